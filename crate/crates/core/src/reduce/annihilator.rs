use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::rational_nullspace;
use crate::mpoly::{MPoly, Monomial};
use crate::rat::Rat;

/// Above this many matrix entries the linear system is refused.
const MAX_SYSTEM_ENTRIES: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Annihilator {
    /// Relation in `Z1, ..., Z_{l+1}` (stored as `X` variables).
    pub relation: MPoly,
    pub degree: u32,
    pub system_rows: usize,
    pub system_cols: usize,
}

fn monomials_up_to(vars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(vars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == vars {
            out.push(Monomial::new(prefix.clone()));
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(vars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, deg, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `R(F_1, ..., F_k)`.
pub fn compose_relation(r: &MPoly, fs: &[MPoly]) -> Result<MPoly> {
    if r.arity() != fs.len() {
        return Err(Error::ArityMismatch {
            expected: fs.len(),
            found: r.arity(),
        });
    }
    let arity = fs.first().map_or(0, MPoly::arity);
    let mut out = MPoly::zero(arity);
    for (m, c) in r.terms() {
        let mut term = MPoly::constant(arity, c.clone());
        for (f, &e) in fs.iter().zip(m.exps()) {
            if e > 0 {
                term = term.try_mul(&f.pow(u64::from(e)))?;
            }
        }
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// Nonzero `R` of degree at most `deg_cap` with `R(F_1, ..., F_{l+1}) = 0`,
/// for `l + 1` polynomials in `l` variables, or `None` if no such `R` exists.
///
/// Unknowns are the coefficients of `R` on the graded-lex ordered monomials of
/// degree `<= deg_cap`. The kernel vector of the first dependent column has the
/// smallest possible leading monomial; it is returned monic.
pub fn annihilator(fs: &[MPoly], deg_cap: u32) -> Result<Option<Annihilator>> {
    let Some(first) = fs.first() else {
        return Err(Error::invalid("annihilator needs polynomials"));
    };
    let arity = first.arity();
    if let Some(bad) = fs.iter().find(|f| f.arity() != arity) {
        return Err(Error::ArityMismatch {
            expected: arity,
            found: bad.arity(),
        });
    }
    if fs.len() != arity + 1 {
        return Err(Error::invalid(format!(
            "annihilator expects {} polynomials in {arity} variables, got {}",
            arity + 1,
            fs.len()
        )));
    }
    let zs = monomials_up_to(fs.len(), deg_cap);
    let max_deg = fs.iter().filter_map(MPoly::total_degree).max().unwrap_or(0);
    let rows_estimate = monomials_up_to_count(arity, deg_cap.saturating_mul(max_deg));
    if zs.len().saturating_mul(rows_estimate) > MAX_SYSTEM_ENTRIES {
        return Err(Error::DeskScale(format!(
            "annihilator system of about {rows_estimate} x {} entries",
            zs.len()
        )));
    }

    // Powers of each input, computed once.
    let powers: Vec<Vec<MPoly>> = fs
        .iter()
        .map(|f| {
            let mut v = vec![MPoly::one(arity)];
            for _ in 0..deg_cap {
                let next = v.last().expect("nonempty") * f;
                v.push(next);
            }
            v
        })
        .collect();
    let images: Vec<MPoly> = zs
        .iter()
        .map(|z| {
            z.exps()
                .iter()
                .zip(&powers)
                .fold(MPoly::one(arity), |acc, (&e, p)| &acc * &p[e as usize])
        })
        .collect();
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for img in &images {
        for (m, _) in img.terms() {
            let next = row_index.len();
            row_index.entry(m.clone()).or_insert(next);
        }
    }
    let rows = row_index.len();
    let mut matrix = vec![vec![Rat::from_integer(BigInt::from(0)); zs.len()]; rows];
    for (col, img) in images.iter().enumerate() {
        for (m, c) in img.terms() {
            matrix[row_index[m]][col] = c.clone();
        }
    }
    let Some(v) = rational_nullspace(&matrix, zs.len()).into_iter().next() else {
        return Ok(None);
    };
    let relation = MPoly::from_terms(
        fs.len(),
        zs.iter()
            .zip(v)
            .map(|(z, c)| (z.exps().to_vec(), Rat::from_integer(c))),
    )
    .monic();
    Ok(Some(Annihilator {
        degree: relation.total_degree().unwrap_or(0),
        relation,
        system_rows: rows,
        system_cols: zs.len(),
    }))
}

fn monomials_up_to_count(vars: usize, deg: u32) -> usize {
    // C(vars + deg, vars), saturating.
    let mut acc: u128 = 1;
    for i in 0..vars as u128 {
        acc = acc * (u128::from(deg) + i + 1) / (i + 1);
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_mpoly, print_mpoly_with};

    fn ms(ss: &[&str], arity: usize) -> Vec<MPoly> {
        ss.iter()
            .map(|s| parse_mpoly(s, Some(arity)).unwrap())
            .collect()
    }

    fn relation(ss: &[&str], arity: usize, cap: u32) -> String {
        let fs = ms(ss, arity);
        let a = annihilator(&fs, cap).unwrap().unwrap();
        assert!(compose_relation(&a.relation, &fs).unwrap().is_zero());
        print_mpoly_with(&a.relation, "Z")
    }

    #[test]
    fn examples() {
        assert_eq!(relation(&["X1", "X1^2"], 1, 2), "Z1^2 - Z2");
        assert_eq!(relation(&["X1", "X1 + 1"], 1, 1), "Z1 - Z2 + 1");
        assert_eq!(relation(&["X1^2 + X1", "X1^2 + X1"], 1, 4), "Z1 - Z2");
    }

    #[test]
    fn none_below_the_needed_degree() {
        assert!(annihilator(&ms(&["X1", "X1^3"], 1), 2).unwrap().is_none());
    }

    #[test]
    fn two_variables() {
        let fs = ms(&["X1", "X2", "X1*X2 + X1"], 2);
        let a = annihilator(&fs, 4).unwrap().unwrap();
        assert!(a.degree <= 4);
        assert!(compose_relation(&a.relation, &fs).unwrap().is_zero());
    }

    #[test]
    fn wrong_count_rejected() {
        assert!(annihilator(&ms(&["X1", "X2"], 2), 2).is_err());
    }
}
