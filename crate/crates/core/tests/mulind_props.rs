mod common;

use arlab_core::mulind::{gcd_free_basis, is_mult_independent, normalize_at_origin, Mode, Verdict};
use arlab_core::rat::{int, Rat};
use arlab_core::upoly::UPoly;
use common::*;
use proptest::prelude::*;

/// Families built as products of a few small bases, so dependencies are common.
fn family() -> impl Strategy<Value = Vec<UPoly>> {
    let bases = prop::collection::vec(nonconstant_upoly(2, 3), 1..=3);
    (
        bases,
        prop::collection::vec(prop::collection::vec(0u64..3, 3), 2..=3),
        prop::collection::vec(rational(3), 3),
    )
        .prop_map(|(bases, exps, units)| {
            exps.iter()
                .zip(&units)
                .map(|(row, u)| {
                    let c = if u == &Rat::from_integer(0.into()) {
                        int(1)
                    } else {
                        u.clone()
                    };
                    bases
                        .iter()
                        .zip(row)
                        .fold(UPoly::constant(c), |acc, (b, &e)| &acc * &b.pow(e))
                })
                .collect()
        })
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Plain), Just(Mode::ModConstants)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn certificates_remultiply(fs in family(), mode in mode()) {
        if let Ok(Verdict::Dependent(c)) = is_mult_independent(&fs, mode) {
            prop_assert!(c.verify(&fs), "{c:?}");
            if mode == Mode::Plain {
                prop_assert_eq!(c.constant, int(1));
            }
        }
    }

    #[test]
    fn refining_the_basis_keeps_the_verdict(fs in family(), q in nonconstant_upoly(2, 3), mode in mode()) {
        let Ok(basis) = gcd_free_basis(&fs) else { return Ok(()); };
        let Ok(before) = basis.verdict(mode) else { return Ok(()); };
        let finer = basis.refine_with(&fs, &q).unwrap();
        prop_assert!(finer.basis.len() >= basis.basis.len());
        prop_assert_eq!(finer.verdict(mode).unwrap().is_independent(), before.is_independent());
    }

    #[test]
    fn scaling_does_not_change_independence_mod_constants(
        fs in family(),
        scales in prop::collection::vec(rational(5), 3),
    ) {
        let scaled: Vec<UPoly> = fs
            .iter()
            .zip(&scales)
            .map(|(f, c)| if *c == int(0) { f.clone() } else { f.scale(c) })
            .collect();
        let a = is_mult_independent(&fs, Mode::ModConstants).unwrap();
        let b = is_mult_independent(&scaled, Mode::ModConstants).unwrap();
        prop_assert_eq!(a.is_independent(), b.is_independent());
    }

    #[test]
    fn origin_normalization_matches_mod_constants(fs in family()) {
        prop_assume!(fs.iter().all(|f| !f.constant_term().eq(&int(0))));
        let normalized: Vec<UPoly> = fs.iter().map(normalize_at_origin).collect();
        let a = is_mult_independent(&fs, Mode::ModConstants).unwrap();
        let b = is_mult_independent(&normalized, Mode::Plain).unwrap();
        prop_assert_eq!(a.is_independent(), b.is_independent());
    }
}

#[test]
fn origin_normalization_curated() {
    let cases: &[&[&str]] = &[
        &["T + 1", "T + 2"],
        &["2*(T + 1)", "3*(T + 1)^2"],
        &["T + 1", "2*T + 2"],
        &["T^2 + 1", "(T^2 + 1)*(T - 3)", "T - 3"],
        &["5", "T - 1"],
        &["1/4*(T + 1)^3", "1/9*(T + 1)^2"],
    ];
    for case in cases {
        let fs: Vec<UPoly> = case
            .iter()
            .map(|s| arlab_core::expr::parse_upoly(s).unwrap())
            .collect();
        let normalized: Vec<UPoly> = fs.iter().map(normalize_at_origin).collect();
        assert_eq!(
            is_mult_independent(&fs, Mode::ModConstants)
                .unwrap()
                .is_independent(),
            is_mult_independent(&normalized, Mode::Plain)
                .unwrap()
                .is_independent(),
            "{case:?}"
        );
    }
}
