use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{common_zero_degree_bound, gamma};
use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::mulind::{is_mult_independent, Mode, Verdict};
use crate::resultant::resultant_in_x2;
use crate::torsion::{common_torsion_zeros, cyclotomic};
use crate::upoly::UPoly;

/// Largest relation box searched, counted in vectors.
const MAX_RELATIONS: usize = 200_000;

/// Points `(x, y)` with `q(x) = 0` and, for two variables, `fiber(x, y) = 0`.
///
/// `fiber` is monic and squarefree in `X2` at every root of `base`; its
/// coefficients are representatives modulo `base`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetBranch {
    pub base: UPoly,
    pub fiber: Option<MPoly>,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyStep {
    pub relation: Vec<i64>,
    pub newly_covered: usize,
    pub remaining: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetReport {
    pub arity: usize,
    pub n_cap: u64,
    pub b_cap: u64,
    pub branches: Vec<CosetBranch>,
    pub point_count: usize,
    pub relations_tested: usize,
    /// Relations vanishing at every point, in search order.
    pub covering: Vec<Vec<i64>>,
    /// Greedy cover by several relations, used when no single one suffices.
    pub greedy: Vec<GreedyStep>,
    pub uncovered: usize,
    pub all_covered: bool,
    /// `(l + 1) D^l prod_{p <= gamma} p`, when it fits.
    #[serde(serialize_with = "ser_opt_big")]
    pub degree_bound: Option<BigUint>,
}

fn ser_opt_big<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.collect_str(b),
        None => s.serialize_none(),
    }
}

// Polynomials in X2 over Q[X1]/(q), coefficients ascending and reduced mod q.
type RingPoly = Vec<UPoly>;

enum Normal {
    Zero,
    Monic(RingPoly),
    Split(UPoly, UPoly),
}

fn reduce_all(p: &[UPoly], q: &UPoly) -> Result<RingPoly> {
    let mut out = p.iter().map(|c| c.rem(q)).collect::<Result<Vec<_>>>()?;
    trim(&mut out);
    Ok(out)
}

fn trim(p: &mut RingPoly) {
    while p.last().is_some_and(UPoly::is_zero) {
        p.pop();
    }
}

/// Make `p` monic, or report the factorization of `q` that its leading
/// coefficient exposes.
fn normalize(p: &RingPoly, q: &UPoly) -> Result<Normal> {
    let mut p = p.clone();
    trim(&mut p);
    let Some(lc) = p.last() else {
        return Ok(Normal::Zero);
    };
    let g = lc.gcd(q);
    if !g.is_one() {
        let other = q.div_exact(&g).ok_or(Error::DivisionByZero)?;
        return Ok(Normal::Split(g, other));
    }
    let inv = lc.inverse_mod(q).ok_or(Error::DivisionByZero)?;
    let scaled = p
        .iter()
        .map(|c| (c * &inv).rem(q))
        .collect::<Result<Vec<_>>>()?;
    Ok(Normal::Monic(scaled))
}

fn rem_monic(a: &RingPoly, b: &RingPoly, q: &UPoly) -> Result<(RingPoly, RingPoly)> {
    let mut r = a.clone();
    let db = b.len() - 1;
    let mut quot = vec![UPoly::zero(); r.len().saturating_sub(db)];
    trim(&mut r);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.pop().unwrap_or_else(UPoly::zero);
        for (i, bc) in b[..db].iter().enumerate() {
            r[k + i] = (&r[k + i] - &(&c * bc)).rem(q)?;
        }
        quot[k] = c;
        trim(&mut r);
    }
    Ok((quot, r))
}

/// Monic gcd over `Q[X1]/(q)` with `q` squarefree, splitting `q` whenever a
/// zero divisor turns up. The pieces partition the roots of `q`.
fn split_gcd(q: &UPoly, a: &RingPoly, b: &RingPoly) -> Result<Vec<(UPoly, RingPoly)>> {
    if q.is_constant() {
        return Ok(Vec::new());
    }
    match normalize(b, q)? {
        Normal::Split(q1, q2) => {
            let mut out = Vec::new();
            for qi in [q1, q2] {
                out.extend(split_gcd(&qi, &reduce_all(a, &qi)?, &reduce_all(b, &qi)?)?);
            }
            Ok(out)
        }
        Normal::Zero => match normalize(a, q)? {
            Normal::Split(q1, q2) => {
                let mut out = Vec::new();
                for qi in [q1, q2] {
                    out.extend(split_gcd(&qi, &reduce_all(a, &qi)?, &Vec::new())?);
                }
                Ok(out)
            }
            Normal::Zero => Ok(vec![(q.clone(), Vec::new())]),
            Normal::Monic(a) => Ok(vec![(q.clone(), a)]),
        },
        Normal::Monic(b) => {
            if b.len() == 1 {
                return Ok(vec![(q.clone(), b)]);
            }
            let (_, r) = rem_monic(a, &b, q)?;
            split_gcd(q, &b, &r)
        }
    }
}

fn derivative(p: &RingPoly, q: &UPoly) -> Result<RingPoly> {
    let d: Vec<UPoly> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&crate::rat::int(k as i64)))
        .collect();
    reduce_all(&d, q)
}

fn to_ring(p: &MPoly) -> Result<RingPoly> {
    p.coefficients_in(1)
        .iter()
        .map(|c| {
            c.to_upoly(0)
                .ok_or_else(|| Error::invalid("coefficient depends on X2"))
        })
        .collect()
}

fn from_ring(p: &RingPoly) -> MPoly {
    let coeffs: Vec<MPoly> = p.iter().map(|c| MPoly::from_upoly(c, 2, 0)).collect();
    MPoly::from_coefficients_in(2, 1, &coeffs)
}

#[derive(Clone, Debug)]
struct Piece {
    base: UPoly,
    fiber: Option<RingPoly>,
}

impl Piece {
    fn points(&self) -> usize {
        let d = self.base.degree_or_zero();
        match &self.fiber {
            None => d,
            Some(g) => d * g.len().saturating_sub(1),
        }
    }

    /// Split into the parts where `value` vanishes and where it does not.
    fn split_on(&self, value: &MPoly) -> Result<(Vec<Piece>, Vec<Piece>)> {
        let q = &self.base;
        match &self.fiber {
            None => {
                let v = value
                    .to_upoly(0)
                    .ok_or_else(|| Error::invalid("expected X1 only"))?;
                let hit = v.rem(q)?.gcd(q);
                let hit = if v.rem(q)?.is_zero() { q.clone() } else { hit };
                let miss = q.div_exact(&hit).ok_or(Error::DivisionByZero)?;
                let wrap = |b: UPoly| Piece {
                    base: b,
                    fiber: None,
                };
                Ok((
                    [hit]
                        .into_iter()
                        .filter(|b| !b.is_constant())
                        .map(wrap)
                        .collect(),
                    [miss]
                        .into_iter()
                        .filter(|b| !b.is_constant())
                        .map(wrap)
                        .collect(),
                ))
            }
            Some(g) => {
                let v = reduce_all(&to_ring(value)?, q)?;
                let (_, v) = rem_monic(&v, g, q)?;
                let (mut hit, mut miss) = (Vec::new(), Vec::new());
                for (qi, d) in split_gcd(q, g, &v)? {
                    let gi = reduce_all(g, &qi)?;
                    let (rest, _) = rem_monic(&gi, &d, &qi)?;
                    if d.len() > 1 {
                        hit.push(Piece {
                            base: qi.clone(),
                            fiber: Some(d),
                        });
                    }
                    if rest.len() > 1 {
                        miss.push(Piece {
                            base: qi,
                            fiber: Some(rest),
                        });
                    }
                }
                Ok((hit, miss))
            }
        }
    }
}

/// Points of `Z(Phi_a(F1), Phi_c(F2), Phi_e(F3))`, given the eliminants
/// `Res_X2` of the first condition against the other two.
fn order_class_points(p: [&MPoly; 3], r01: &UPoly, r02: &UPoly) -> Result<Vec<Piece>> {
    let mut projection = match (r01.is_zero(), r02.is_zero()) {
        (false, false) => r01.gcd(r02),
        (false, true) => r01.clone(),
        (true, false) => r02.clone(),
        (true, true) => UPoly::zero(),
    };
    if projection.is_constant() && !projection.is_zero() {
        return Ok(Vec::new());
    }
    if projection.is_zero() || r01.is_zero() || r02.is_zero() {
        let common = p[0].gcd(p[1])?.gcd(p[2])?;
        if !common.is_constant() {
            return Err(Error::Degenerate(format!(
                "the torsion conditions share the curve {common}"
            )));
        }
    }
    if projection.is_zero() {
        // Any nonzero eliminant of two conditions vanishes on the projection.
        let mut combos = vec![(p[1].clone(), p[2].clone())];
        for k in 1..=4i64 {
            combos.push((
                p[0].clone(),
                p[1].try_add(&p[2].scale(&crate::rat::int(k)))?,
            ));
        }
        for (x, y) in &combos {
            let r = resultant_in_x2(x, y)?;
            if !r.is_zero() {
                projection = r;
                break;
            }
        }
        if projection.is_zero() {
            return Err(Error::Degenerate(
                "every eliminant of the torsion conditions vanishes".into(),
            ));
        }
        if projection.is_constant() {
            return Ok(Vec::new());
        }
    }
    let q = projection.squarefree_part().monic();
    let rings = p.iter().map(|a| to_ring(a)).collect::<Result<Vec<_>>>()?;
    let mut pieces = Vec::new();
    for (q1, g1) in split_gcd(&q, &reduce_all(&rings[0], &q)?, &reduce_all(&rings[1], &q)?)? {
        let r2 = reduce_all(&rings[2], &q1)?;
        for (q2, g2) in split_gcd(&q1, &g1, &r2)? {
            if g2.is_empty() {
                return Err(Error::Degenerate(format!(
                    "a whole vertical line over a root of {q2} satisfies the torsion conditions"
                )));
            }
            if g2.len() == 1 {
                continue;
            }
            let deriv = derivative(&g2, &q2)?;
            for (q3, d) in split_gcd(&q2, &g2, &deriv)? {
                let g = reduce_all(&g2, &q3)?;
                let (sf, _) = rem_monic(&g, &d, &q3)?;
                if sf.len() > 1 {
                    pieces.push(Piece {
                        base: q3,
                        fiber: Some(sf),
                    });
                }
            }
        }
    }
    Ok(pieces)
}

/// Points in the plane where all three `F_i` are roots of unity of order at
/// most `n_cap`, grouped by the exact orders so the classes are disjoint.
fn torsion_points_plane(fs: &[MPoly], n_cap: u64) -> Result<Vec<Piece>> {
    let phis = (1..=n_cap).map(cyclotomic).collect::<Result<Vec<_>>>()?;
    let conds: Vec<Vec<MPoly>> = fs
        .iter()
        .map(|f| phis.iter().map(|phi| f.apply_upoly(phi)).collect())
        .collect();
    if let Some(i) = conds.iter().position(|c| c.iter().any(MPoly::is_zero)) {
        return Err(Error::Degenerate(format!("F{} is a root of unity", i + 1)));
    }
    let n = n_cap as usize;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |c| (a, c))).collect();
    let eliminants = |j: usize| -> Result<Vec<UPoly>> {
        pairs
            .par_iter()
            .map(|&(a, c)| resultant_in_x2(&conds[0][a], &conds[j][c]))
            .collect()
    };
    let (r1, r2) = (eliminants(1)?, eliminants(2)?);
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |c| (0..n).map(move |e| (a, c, e))))
        .collect();
    let classes = triples
        .par_iter()
        .map(|&(a, c, e)| {
            order_class_points(
                [&conds[0][a], &conds[1][c], &conds[2][e]],
                &r1[a * n + c],
                &r2[a * n + e],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(classes.into_iter().flatten().collect())
}

/// Nonzero vectors in `[-b, b]^k` with first nonzero entry positive, ordered
/// by max norm and then lexicographically.
fn relation_vectors(k: usize, b: u64) -> Result<Vec<Vec<i64>>> {
    let side = 2 * b + 1;
    let total = side
        .checked_pow(k as u32)
        .filter(|&t| (t / 2) as usize <= MAX_RELATIONS)
        .ok_or_else(|| Error::DeskScale(format!("relation box [-{b}, {b}]^{k} is too large")))?;
    let b = b as i64;
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let v: Vec<i64> = (0..k)
            .map(|_| {
                let d = (rest % side) as i64 - b;
                rest /= side;
                d
            })
            .rev()
            .collect();
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            out.push(v);
        }
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap_or(0), v.clone()));
    Ok(out)
}

/// `prod_{b_i > 0} F_i^{b_i} - prod_{b_i < 0} F_i^{-b_i}`.
fn relation_poly(fs: &[MPoly], b: &[i64]) -> Result<MPoly> {
    let arity = fs[0].arity();
    let (mut pos, mut neg) = (MPoly::one(arity), MPoly::one(arity));
    for (f, &e) in fs.iter().zip(b) {
        if e > 0 {
            pos = pos.try_mul(&f.pow(e as u64))?;
        } else if e < 0 {
            neg = neg.try_mul(&f.pow(e.unsigned_abs()))?;
        }
    }
    pos.try_sub(&neg)
}

fn count(pieces: &[Piece]) -> usize {
    pieces.iter().map(Piece::points).sum()
}

/// Check that the common torsion points of `F_1, ..., F_{l+1}` (orders at
/// most `n_cap`) lie on varieties `prod F_i^{b_i} = 1` with `|b_i| <= b_cap`.
pub fn common_torsion_variety_check(fs: &[MPoly], n_cap: u64, b_cap: u64) -> Result<CosetReport> {
    let arity = fs.first().map_or(0, MPoly::arity);
    if !(1..=2).contains(&arity) {
        return Err(Error::invalid(format!(
            "containment check supports one or two variables, got {arity}"
        )));
    }
    if fs.len() != arity + 1 {
        return Err(Error::invalid(format!(
            "expected {} polynomials in {arity} variables, got {}",
            arity + 1,
            fs.len()
        )));
    }
    if let Some(f) = fs.iter().find(|f| f.arity() != arity) {
        return Err(Error::ArityMismatch {
            expected: arity,
            found: f.arity(),
        });
    }
    if n_cap == 0 || b_cap == 0 {
        return Err(Error::invalid("n_cap and b_cap must be at least 1"));
    }
    if let Verdict::Dependent(c) = is_mult_independent(fs, Mode::Plain)? {
        return Err(Error::Dependent {
            relation: c.relation,
        });
    }

    let pieces = if arity == 1 {
        let us = fs
            .iter()
            .map(|f| {
                f.to_upoly(0)
                    .ok_or_else(|| Error::invalid("expected X1 only"))
            })
            .collect::<Result<Vec<_>>>()?;
        let p = common_torsion_zeros(&us[0], &us[1], n_cap)?;
        if p.is_constant() {
            Vec::new()
        } else {
            vec![Piece {
                base: p,
                fiber: None,
            }]
        }
    } else {
        torsion_points_plane(fs, n_cap)?
    };
    let point_count = count(&pieces);

    let relations = relation_vectors(fs.len(), b_cap)?;
    let polys = relations
        .par_iter()
        .map(|b| relation_poly(fs, b))
        .collect::<Result<Vec<_>>>()?;
    let splits = polys
        .par_iter()
        .map(|p| {
            let mut hit = Vec::new();
            let mut miss = Vec::new();
            for piece in &pieces {
                let (h, m) = piece.split_on(p)?;
                hit.extend(h);
                miss.extend(m);
            }
            Ok((count(&hit), miss))
        })
        .collect::<Result<Vec<_>>>()?;
    let covering: Vec<Vec<i64>> = if point_count == 0 {
        Vec::new()
    } else {
        relations
            .iter()
            .zip(&splits)
            .filter(|(_, (_, miss))| miss.is_empty())
            .map(|(b, _)| b.clone())
            .collect()
    };

    let mut greedy = Vec::new();
    let mut remaining = pieces.clone();
    if covering.is_empty() {
        while count(&remaining) > 0 {
            let mut best: Option<(usize, usize, Vec<Piece>)> = None;
            for (i, p) in polys.iter().enumerate() {
                let mut hit = 0;
                let mut miss = Vec::new();
                for piece in &remaining {
                    let (h, m) = piece.split_on(p)?;
                    hit += count(&h);
                    miss.extend(m);
                }
                if hit > best.as_ref().map_or(0, |b| b.1) {
                    best = Some((i, hit, miss));
                }
            }
            let Some((i, hit, miss)) = best else { break };
            remaining = miss;
            greedy.push(GreedyStep {
                relation: relations[i].clone(),
                newly_covered: hit,
                remaining: count(&remaining),
            });
        }
    } else {
        remaining.clear();
    }
    let uncovered = count(&remaining);

    let max_deg = fs.iter().filter_map(MPoly::total_degree).max().unwrap_or(0);
    let l = arity as u64;
    let degree_bound = gamma(l, u64::from(max_deg))
        .ok()
        .and_then(|g| g.to_u64())
        .filter(|&g| g <= 1 << 20)
        .and_then(|g| common_zero_degree_bound(l, u64::from(max_deg), g).ok());

    let branches = pieces
        .iter()
        .map(|p| CosetBranch {
            base: p.base.clone(),
            fiber: p.fiber.as_ref().map(from_ring),
            points: p.points(),
        })
        .collect();

    Ok(CosetReport {
        arity,
        n_cap,
        b_cap,
        branches,
        point_count,
        relations_tested: relations.len(),
        covering,
        greedy,
        uncovered,
        all_covered: uncovered == 0,
        degree_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_mpoly;
    use num_complex::Complex64;

    fn ps(items: &[&str], arity: usize) -> Vec<MPoly> {
        items
            .iter()
            .map(|s| parse_mpoly(s, Some(arity)).unwrap())
            .collect()
    }

    #[test]
    fn consecutive_pair() {
        let r = common_torsion_variety_check(&ps(&["X1", "X1 + 1"], 1), 6, 4).unwrap();
        assert_eq!(r.point_count, 2);
        assert_eq!(
            r.branches[0].base,
            crate::upoly::UPoly::from_ints(&[1, 1, 1])
        );
        assert!(r.covering.contains(&vec![2, 2]));
        assert!(r.all_covered);
        assert_eq!(r.degree_bound, Some(BigUint::from(12u32)));
    }

    #[test]
    fn circle_intersection_point() {
        let r = common_torsion_variety_check(&ps(&["X1", "X1 + 2"], 1), 6, 4).unwrap();
        assert_eq!(r.point_count, 1);
        assert!(r.covering.contains(&vec![2, 0]));
        assert!(r.covering.contains(&vec![0, 1]));
    }

    #[test]
    fn dependent_inputs_rejected() {
        let err = common_torsion_variety_check(&ps(&["X1", "X1^2"], 1), 6, 4).unwrap_err();
        assert!(matches!(err, Error::Dependent { .. }));
    }

    #[test]
    fn relation_order() {
        let v = relation_vectors(2, 1).unwrap();
        assert_eq!(v, vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);
    }

    fn roots_of_unity(n: u64) -> Vec<Complex64> {
        (1..=n)
            .flat_map(|k| {
                (0..k).map(move |j| {
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64)
                })
            })
            .collect()
    }

    /// Points found by brute force for `F1 = X1, F2 = X2, F3`: enumerate
    /// torsion values of the first two coordinates directly.
    fn brute_force(f3: &MPoly, n_cap: u64) -> usize {
        let roots = roots_of_unity(n_cap);
        let mut uniq: Vec<Complex64> = Vec::new();
        for r in roots {
            if !uniq.iter().any(|u| (u - r).norm() < 1e-9) {
                uniq.push(r);
            }
        }
        let mut n = 0;
        for &x in &uniq {
            for &y in &uniq {
                let mut v = Complex64::new(0.0, 0.0);
                for (m, c) in f3.terms() {
                    let e = m.exps();
                    v += c.to_f64_lossy() * x.powu(e[0]) * y.powu(e[1]);
                }
                if uniq.iter().any(|u| (u - v).norm() < 1e-9) {
                    n += 1;
                }
            }
        }
        n
    }

    trait Lossy {
        fn to_f64_lossy(&self) -> f64;
    }

    impl Lossy for crate::rat::Rat {
        fn to_f64_lossy(&self) -> f64 {
            self.numer().to_f64().unwrap() / self.denom().to_f64().unwrap()
        }
    }

    #[test]
    fn plane_points_match_brute_force() {
        for (f3, n_cap) in [
            ("X1 + X2 + 1", 3),
            ("X1*X2 + X1 - 1", 4),
            ("X1 - X2 + 1", 6),
        ] {
            let fs = ps(&["X1", "X2", f3], 2);
            let r = common_torsion_variety_check(&fs, n_cap, 2).unwrap();
            assert_eq!(r.point_count, brute_force(&fs[2], n_cap), "{f3}");
            assert!(r.all_covered || !r.greedy.is_empty());
        }
    }
}
