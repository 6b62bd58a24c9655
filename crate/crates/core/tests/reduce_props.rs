mod common;

use arlab_core::bounds::{registry, BoundParams};
use arlab_core::error::Error;
use arlab_core::mpoly::MPoly;
use arlab_core::reduce::{annihilator, compose_relation, multivar_check, KroneckerMap};
use arlab_core::upoly::UPoly;
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kronecker_round_trip(f in mpoly(3, 3, 5, 5), d in 2u32..5) {
        let k = KroneckerMap::new(3, d).unwrap();
        prop_assert_eq!(k.backward(&k.forward(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn transformed_degree_survives_specialization(
        f in nonconstant_mpoly(2, 3, 4, 4),
        alpha in rational(4),
    ) {
        let k = KroneckerMap::new(2, f.max_var_degree() + 1).unwrap();
        let ft = k.forward(&f).unwrap();
        let s = ft.specialize(std::slice::from_ref(&alpha)).unwrap();
        prop_assert_eq!(s.degree().map(|d| d as u32), ft.total_degree());
    }

    #[test]
    fn annihilator_composes_to_zero(f in nonconstant_upoly(3, 3), g in nonconstant_upoly(3, 3)) {
        let fs = [MPoly::from_upoly(&f, 1, 0), MPoly::from_upoly(&g, 1, 0)];
        let cap = f.degree_or_zero().max(g.degree_or_zero()) as u32;
        let a = annihilator(&fs, cap).unwrap().expect("a relation exists at degree D");
        prop_assert!(a.degree <= cap);
        prop_assert!(compose_relation(&a.relation, &fs).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn multivariate_chain_holds(
        f in nonconstant_mpoly(2, 1, 3, 2),
        g in nonconstant_mpoly(2, 1, 3, 2),
        n in 1u64..4,
        m in 1u64..4,
    ) {
        let t1 = UPoly::from_ints(&[-1, 1]);
        match multivar_check(&t1, &t1, &f, &g, n, m, 200) {
            Ok(r) => prop_assert!(r.chain_holds, "{r:?}"),
            Err(e) => prop_assert!(
                matches!(e, Error::Dependent { .. } | Error::BudgetExhausted { .. }),
                "{e:?}"
            ),
        }
    }
}

#[test]
fn plane_annihilators_within_degree() {
    let cases: &[[&str; 3]] = &[
        ["X1", "X2", "X1*X2 + 1"],
        ["X1 + X2", "X1 - X2", "X1*X2"],
        ["X1^2", "X2", "X1 + X2"],
    ];
    for case in cases {
        let fs: Vec<MPoly> = case
            .iter()
            .map(|s| arlab_core::expr::parse_mpoly(s, Some(2)).unwrap())
            .collect();
        let d = fs.iter().filter_map(MPoly::total_degree).max().unwrap();
        let a = annihilator(&fs, d * d)
            .unwrap()
            .expect("relation within D^2");
        assert!(a.degree <= d * d);
        assert!(
            compose_relation(&a.relation, &fs).unwrap().is_zero(),
            "{case:?}"
        );
    }
}

#[test]
fn bounds_are_monotone() {
    for formula in registry() {
        let names = formula.params();
        let mut grids: Vec<BoundParams> = vec![BoundParams::new()];
        for name in names {
            grids = grids
                .into_iter()
                .flat_map(|p| {
                    (1..=3u64).map(move |v| {
                        let mut q = p.clone();
                        q.insert(name.to_string(), v);
                        q
                    })
                })
                .collect();
        }
        for params in &grids {
            let Ok(base) = formula.evaluate(params) else {
                continue;
            };
            for name in names {
                let mut bumped = params.clone();
                *bumped.get_mut(*name).unwrap() += 1;
                if let Ok(next) = formula.evaluate(&bumped) {
                    assert!(
                        next.value >= base.value,
                        "{} not monotone in {name} at {params:?}",
                        formula.name()
                    );
                }
            }
        }
    }
}
