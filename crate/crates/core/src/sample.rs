//! Seeded random polynomials for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mpoly::MPoly;
use crate::rat::{int, rat};
use crate::upoly::UPoly;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer coefficients in `[-range, range]`, degree exactly `degree`.
pub fn random_upoly<R: Rng>(rng: &mut R, degree: usize, range: i64) -> UPoly {
    loop {
        let coeffs: Vec<i64> = (0..=degree)
            .map(|_| rng.gen_range(-range..=range))
            .collect();
        if coeffs[degree] != 0 {
            return UPoly::from_ints(&coeffs);
        }
    }
}

/// Up to `terms` terms with exponents summing to at most `max_degree`;
/// coefficients are small rationals so printing exercises fractions.
pub fn random_mpoly<R: Rng>(rng: &mut R, arity: usize, max_degree: u32, terms: usize) -> MPoly {
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut left = max_degree;
        let exps: Vec<u32> = (0..arity)
            .map(|_| {
                let e = rng.gen_range(0..=left);
                left -= e;
                e
            })
            .collect();
        let c = if rng.gen_bool(0.25) {
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))
        } else {
            int(rng.gen_range(-9..=9))
        };
        out.push((exps, c));
    }
    MPoly::from_terms(arity, out)
}

/// Coprime `(A, B, A + B)` with degrees at most `max_degree`, not all constant.
pub fn coprime_triples(count: usize, max_degree: usize, seed: u64) -> Vec<(UPoly, UPoly, UPoly)> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let deg = rng.gen_range(0..=max_degree);
        let a = random_upoly(&mut rng, deg, 9);
        let deg = rng.gen_range(0..=max_degree);
        let b = random_upoly(&mut rng, deg, 9);
        let c = &a + &b;
        if c.is_zero() || (a.is_constant() && b.is_constant()) {
            continue;
        }
        if a.gcd(&b).is_one() {
            out.push((a, b, c));
        }
    }
    out
}

/// `(f, g, n, m)` with `f`, `g` nonconstant of degree at most `max_degree`,
/// no common root, exponents in `1..=max_exp`, and `f^n != g^m`.
pub fn abc_instances(
    count: usize,
    max_degree: usize,
    max_exp: u64,
    seed: u64,
) -> Vec<(UPoly, UPoly, u64, u64)> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let deg = rng.gen_range(1..=max_degree);
        let f = random_upoly(&mut rng, deg, 5);
        let deg = rng.gen_range(1..=max_degree);
        let g = random_upoly(&mut rng, deg, 5);
        let n = rng.gen_range(1..=max_exp);
        let m = rng.gen_range(1..=max_exp);
        if f.gcd(&g).is_one() && f.pow(n) != g.pow(m) {
            out.push((f, g, n, m));
        }
    }
    out
}
