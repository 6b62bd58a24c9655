//! Sylvester resultants by fraction-free (Bareiss) elimination.
//!
//! The determinant is taken with the rows of the first polynomial on top,
//! which fixes the sign: `Res(T - X1, T + 1 - X2) = X1 - X2 + 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::rat::{common_denominator, Rat};
use crate::upoly::UPoly;

/// Coefficient ring with exact division, enough for Bareiss elimination.
pub trait ExactRing: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact quotient; `None` if the division is not exact.
    fn div_exact(&self, d: &Self) -> Option<Self>;
}

impl ExactRing for UPoly {
    fn zero_like(&self) -> Self {
        UPoly::zero()
    }
    fn one_like(&self) -> Self {
        UPoly::one()
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        UPoly::div_exact(self, d)
    }
}

impl ExactRing for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.arity())
    }
    fn one_like(&self) -> Self {
        MPoly::one(self.arity())
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        MPoly::div_exact(self, d)
    }
}

impl ExactRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        Zero::is_zero(&r).then_some(q)
    }
}

fn trim<R: ExactRing>(c: &[R]) -> &[R] {
    let n = c.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1);
    &c[..n]
}

/// Resultant of `a = sum a[k] Y^k` and `b = sum b[k] Y^k`.
///
/// Both inputs must be nonzero. A constant input `c` against a polynomial of
/// degree `n` gives `c^n`.
pub fn resultant<R: ExactRing>(a: &[R], b: &[R]) -> Result<R> {
    let a = trim(a);
    let b = trim(b);
    if a.is_empty() || b.is_empty() {
        return Err(Error::ZeroPolynomial("resultant"));
    }
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let zero = a[0].zero_like();
    let one = a[0].one_like();
    if size == 0 {
        return Ok(one);
    }
    let mut rows = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for j in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            rows[n + j][j + k] = c.clone();
        }
    }
    Ok(bareiss_det(rows))
}

/// Determinant of a square matrix by Bareiss fraction-free elimination.
pub fn bareiss_det<R: ExactRing>(mut m: Vec<Vec<R>>) -> R {
    let size = m.len();
    let mut negate = false;
    let mut prev: Option<R> = None;
    for k in 0..size.saturating_sub(1) {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..size).find(|&i| !m[i][k].is_zero()) else {
                return m[0][0].zero_like();
            };
            m.swap(k, p);
            negate = !negate;
        }
        let pivot = m[k][k].clone();
        #[allow(clippy::needless_range_loop)]
        for i in k + 1..size {
            let factor = m[i][k].clone();
            for j in k + 1..size {
                let v = m[i][j].mul(&pivot).sub(&factor.mul(&m[k][j]));
                m[i][j] = match &prev {
                    Some(p) => v.div_exact(p).expect("Bareiss division is exact"),
                    None => v,
                };
            }
            m[i][k] = pivot.zero_like();
        }
        prev = Some(pivot);
    }
    let det = m[size - 1][size - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Implicit equation `H(X1, X2) = Res_T(f(T) - X1, g(T) - X2)` of the
/// parametrized curve `t -> (f(t), g(t))`.
pub fn implicitize(f: &UPoly, g: &UPoly) -> Result<MPoly> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial("implicitization (f)"));
    }
    if g.is_constant() {
        return Err(Error::ConstantPolynomial("implicitization (g)"));
    }
    let lift = |p: &UPoly, var: usize| -> Vec<MPoly> {
        let mut c: Vec<MPoly> = p
            .coeffs()
            .iter()
            .map(|x| MPoly::constant(2, x.clone()))
            .collect();
        c[0] = &c[0] - &MPoly::var(2, var);
        c
    };
    resultant(&lift(f, 0), &lift(g, 1))
}

/// Eliminate `X_{var+1}` from two multivariate polynomials.
pub fn resultant_in(a: &MPoly, b: &MPoly, var: usize) -> Result<MPoly> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    resultant(&a.coefficients_in(var), &b.coefficients_in(var))
}

/// `Res_{X2}(a, b)` for polynomials in two variables, as a polynomial in `X1`.
///
/// Same value as [`resultant_in`] with `var = 1`, computed by integer
/// resultants at sample values of `X1` followed by interpolation. Samples
/// where a leading coefficient vanishes are skipped so the Sylvester shape
/// never changes.
pub fn resultant_in_x2(a: &MPoly, b: &MPoly) -> Result<UPoly> {
    if a.arity() != 2 || b.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: if a.arity() != 2 { a.arity() } else { b.arity() },
        });
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroPolynomial("resultant"));
    }
    let integral = |p: &MPoly| -> (BigInt, Vec<UPoly>) {
        let d = common_denominator(p.terms().map(|(_, c)| c));
        let scaled = p.scale(&Rat::from_integer(d.clone()));
        let coeffs = scaled
            .coefficients_in(1)
            .iter()
            .map(|c| c.to_upoly(0).unwrap_or_else(UPoly::zero))
            .collect();
        (d, coeffs)
    };
    let (da, ca) = integral(a);
    let (db, cb) = integral(b);
    let (m, n) = (ca.len() - 1, cb.len() - 1);
    let x_deg = |c: &[UPoly]| c.iter().map(UPoly::degree_or_zero).max().unwrap_or(0);
    let samples_needed = m * x_deg(&cb) + n * x_deg(&ca) + 1;

    let (lca, lcb) = (&ca[m], &cb[n]);
    let mut xs = Vec::with_capacity(samples_needed);
    let mut k: i64 = 0;
    while xs.len() < samples_needed {
        let x = Rat::from_integer(BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }));
        if !lca.eval(&x).is_zero() && !lcb.eval(&x).is_zero() {
            xs.push(x);
        }
        k += 1;
    }
    let at = |c: &[UPoly], x: &Rat| -> Vec<BigInt> {
        c.iter().map(|p| p.eval(x).to_integer()).collect()
    };
    let ys: Vec<Rat> = xs
        .par_iter()
        .map(|x| resultant(&at(&ca, x), &at(&cb, x)).map(Rat::from_integer))
        .collect::<Result<_>>()?;
    let scale = Rat::from_integer(num_traits::pow(da, n) * num_traits::pow(db, m));
    Ok(interpolate(&xs, &ys).scale(&(Rat::one() / scale)))
}

/// Polynomial of degree below `xs.len()` through the given points (Newton form).
pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> UPoly {
    let mut dd = ys.to_vec();
    for j in 1..xs.len() {
        for i in (j..xs.len()).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out = UPoly::zero();
    for i in (0..xs.len()).rev() {
        let lin = UPoly::from_coeffs(vec![-xs[i].clone(), Rat::one()]);
        out = &(&out * &lin) + &UPoly::constant(dd[i].clone());
    }
    out
}

/// Substitute univariate polynomials for every variable of `p`.
pub fn compose_mpoly(p: &MPoly, values: &[UPoly]) -> UPoly {
    assert_eq!(values.len(), p.arity());
    let mut out = UPoly::zero();
    for (m, c) in p.terms() {
        let mut term = UPoly::constant(c.clone());
        for (v, &e) in values.iter().zip(m.exps()) {
            if e > 0 {
                term = &term * &v.pow(u64::from(e));
            }
        }
        out = &out + &term;
    }
    out
}

/// Rational constant helper for resultant inputs over `Q[T]`.
pub fn constant_coeffs(p: &UPoly) -> Vec<UPoly> {
    p.coeffs()
        .iter()
        .map(|c: &Rat| UPoly::constant(c.clone()))
        .collect()
}
