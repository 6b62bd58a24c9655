mod common;

use arlab_core::error::Error;
use arlab_core::expr::{parse, parse_mpoly, parse_upoly, print_mpoly, print_upoly};
use arlab_core::resultant::{compose_mpoly, implicitize};
use arlab_core::upoly::{gcd_monic, UPoly};
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn univariate_print_parse_round_trip(p in rat_upoly(6, 9)) {
        prop_assert_eq!(parse_upoly(&print_upoly(&p)).unwrap(), p);
    }

    #[test]
    fn multivariate_print_parse_round_trip(p in mpoly(3, 3, 6, 9)) {
        prop_assert_eq!(parse_mpoly(&print_mpoly(&p), Some(3)).unwrap(), p);
    }

    #[test]
    fn parser_is_total(text in "[XT0-9+*^()/ 1-3-]{0,24}") {
        match parse(&text) {
            Ok(_) => {}
            Err(Error::Parse { offset, .. }) => prop_assert!(offset <= text.len()),
            Err(e) => prop_assert!(false, "unlocated error {e:?}"),
        }
    }

    #[test]
    fn gcd_is_greatest_common_divisor(
        d in nonzero_upoly(2, 4),
        x in nonzero_upoly(3, 4),
        y in nonzero_upoly(3, 4),
    ) {
        let (a, b) = (&d * &x, &d * &y);
        let g = gcd_monic(&a, &b);
        prop_assert!(a.rem(&g).unwrap().is_zero());
        prop_assert!(b.rem(&g).unwrap().is_zero());
        prop_assert!(g.rem(&d.monic()).unwrap().is_zero());
        prop_assert!(g.is_zero() || g.leading_coeff().unwrap() == &arlab_core::rat::int(1));
    }

    #[test]
    fn implicit_equation_vanishes_on_parametrization(
        f in nonconstant_upoly(3, 4),
        g in nonconstant_upoly(3, 4),
    ) {
        let h = implicitize(&f, &g).unwrap();
        prop_assert!(compose_mpoly(&h, &[f, g]).is_zero());
    }

    #[test]
    fn squarefree_parts_reassemble(a in nonzero_upoly(2, 3), b in nonzero_upoly(2, 3), k in 1u64..4) {
        let p = &a.pow(k) * &b;
        let parts = p.squarefree_decompose().unwrap();
        let back = parts
            .iter()
            .fold(UPoly::one(), |acc, (q, e)| &acc * &q.pow(*e as u64));
        prop_assert_eq!(back, p.monic());
    }

    #[test]
    fn composition_multiplies_degrees(h in nonconstant_upoly(4, 5), f in nonconstant_upoly(4, 5)) {
        let c = h.compose(&f);
        prop_assert_eq!(c.degree(), Some(h.degree_or_zero() * f.degree_or_zero()));
    }

    #[test]
    fn multivariate_gcd_divides(
        d in nonconstant_mpoly(2, 2, 3, 3),
        x in mpoly(2, 2, 3, 3),
        y in mpoly(2, 2, 3, 3),
    ) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (a, b) = (&d * &x, &d * &y);
        let g = a.gcd(&b).unwrap();
        prop_assert!(g.divides(&a));
        prop_assert!(g.divides(&b));
        prop_assert!(d.divides(&g));
    }

    #[test]
    fn specialization_is_a_ring_map(
        a in mpoly(3, 2, 4, 4),
        b in mpoly(3, 2, 4, 4),
        alpha in prop::collection::vec(rational(3), 2),
    ) {
        let sa = a.specialize(&alpha).unwrap();
        let sb = b.specialize(&alpha).unwrap();
        prop_assert_eq!((&a * &b).specialize(&alpha).unwrap(), &sa * &sb);
        prop_assert_eq!((&a + &b).specialize(&alpha).unwrap(), &sa + &sb);
    }
}
