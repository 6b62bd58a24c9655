use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::mulind::{is_mult_independent, Mode, Verdict};
use crate::rat::{ser_rats, Rat};
use crate::upoly::UPoly;

pub const DEFAULT_BUDGET: usize = 1000;

/// Candidates tested in parallel per round; the first success in
/// enumeration order wins, so results do not depend on the worker count.
const ROUND: usize = 32;

/// The first `count` rationals by height: `0, 1, -1, 2, -2, 1/2, -1/2, 3, ...`.
///
/// Within height `h`: `h`, then `1/h`, then `p/h` and `h/p` for `1 < p < h`
/// coprime to `h`; each value is followed by its negative.
pub fn candidate_rationals(count: usize) -> Vec<Rat> {
    let mut out = vec![Rat::from_integer(BigInt::from(0))];
    let mut h: i64 = 1;
    while out.len() < count {
        let mut level: Vec<(i64, i64)> = vec![(h, 1)];
        if h > 1 {
            level.push((1, h));
            for p in 2..h {
                if p.gcd(&h) == 1 {
                    level.push((p, h));
                    level.push((h, p));
                }
            }
        }
        for (p, q) in level {
            let r = Rat::new(p.into(), q.into());
            out.push(r.clone());
            out.push(-r);
        }
        h += 1;
    }
    out.truncate(count);
    out
}

/// The first `count` index tuples of length `len`, ordered by index sum
/// and then lexicographically.
pub fn candidate_tuples(len: usize, count: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut sum = 0;
    while out.len() < count {
        let mut level = Vec::new();
        compositions(len, sum, &mut Vec::new(), &mut level);
        out.extend(level);
        sum += 1;
    }
    out.truncate(count);
    out
}

fn compositions(len: usize, sum: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() + 1 == len {
        prefix.push(sum);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=sum {
        prefix.push(first);
        compositions(len, sum - first, prefix, out);
        prefix.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Specialization {
    #[serde(serialize_with = "ser_rats")]
    pub alphas: Vec<Rat>,
    pub specialized: Vec<UPoly>,
    /// Candidates examined up to and including the accepted one.
    pub tried: usize,
}

fn accepts(fs: &[MPoly], alphas: &[Rat], mode: Mode) -> Result<Option<Vec<UPoly>>> {
    let us = fs
        .iter()
        .map(|f| f.specialize(alphas))
        .collect::<Result<Vec<_>>>()?;
    if us.iter().any(UPoly::is_zero) {
        return Ok(None);
    }
    Ok(is_mult_independent(&us, mode)?
        .is_independent()
        .then_some(us))
}

/// First candidate `(alpha_2, ..., alpha_l)` in the fixed order for which
/// `F_i(T, alpha)` stay independent in `mode`.
pub fn find_independent_specialization(
    fs: &[MPoly],
    budget: usize,
    mode: Mode,
) -> Result<Specialization> {
    let Some(first) = fs.first() else {
        return Err(Error::invalid("no polynomials to specialize"));
    };
    let arity = first.arity();
    if let Some(bad) = fs.iter().find(|f| f.arity() != arity) {
        return Err(Error::ArityMismatch {
            expected: arity,
            found: bad.arity(),
        });
    }
    if let Verdict::Dependent(c) = is_mult_independent(fs, Mode::ModConstants)? {
        return Err(Error::Dependent {
            relation: c.relation,
        });
    }
    let tuples = candidate_tuples(arity - 1, budget);
    let max_index = tuples.iter().flatten().copied().max().unwrap_or(0);
    let values = candidate_rationals(max_index + 1);
    let alphas_of = |t: &Vec<usize>| t.iter().map(|&i| values[i].clone()).collect::<Vec<_>>();
    for (round, chunk) in tuples.chunks(ROUND).enumerate() {
        let outcomes: Vec<Result<Option<Vec<UPoly>>>> = chunk
            .par_iter()
            .map(|t| accepts(fs, &alphas_of(t), mode))
            .collect();
        for (k, outcome) in outcomes.into_iter().enumerate() {
            if let Some(specialized) = outcome? {
                return Ok(Specialization {
                    alphas: alphas_of(&chunk[k]),
                    specialized,
                    tried: round * ROUND + k + 1,
                });
            }
        }
    }
    Err(Error::BudgetExhausted {
        tried: tuples.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_mpoly, parse_upoly};
    use crate::rat::{int, rat};

    fn ms(ss: &[&str]) -> Vec<MPoly> {
        ss.iter()
            .map(|s| parse_mpoly(s, Some(2)).unwrap())
            .collect()
    }

    #[test]
    fn rational_order() {
        let v = candidate_rationals(8);
        assert_eq!(
            v,
            vec![
                int(0),
                int(1),
                int(-1),
                int(2),
                int(-2),
                rat(1, 2),
                rat(-1, 2),
                int(3)
            ]
        );
    }

    #[test]
    fn tuple_order() {
        assert_eq!(
            candidate_tuples(2, 6),
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![0, 2],
                vec![1, 1],
                vec![2, 0]
            ]
        );
        assert_eq!(candidate_tuples(1, 3), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn tilde_pair_specializes() {
        let s = find_independent_specialization(&ms(&["X1", "X2 + X1^2"]), 10, Mode::ModConstants)
            .unwrap();
        assert_eq!(s.alphas, vec![int(1)]);
        assert_eq!(s.specialized[1], parse_upoly("T^2 + 1").unwrap());
        assert_eq!(s.tried, 2);
    }

    #[test]
    fn untransformed_pair_exhausts_budget() {
        let err = find_independent_specialization(&ms(&["X1", "X2"]), 10, Mode::ModConstants)
            .unwrap_err();
        assert_eq!(err, Error::BudgetExhausted { tried: 10 });
    }

    #[test]
    fn single_polynomial_accepts_zero() {
        let s = find_independent_specialization(&ms(&["X1"]), 10, Mode::ModConstants).unwrap();
        assert_eq!(s.alphas, vec![int(0)]);
        assert_eq!(s.tried, 1);
    }
}
