//! Dense univariate polynomials over Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{common_denominator, content, Rat};

/// A polynomial in `T` with rational coefficients.
///
/// `coeffs[k]` is the coefficient of `T^k`. The vector never ends in a zero,
/// so the zero polynomial is the empty vector and has no degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// The variable `T`.
    pub fn t() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        UPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// Coefficients in ascending degree order.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(c.into()))
                .collect(),
        )
    }

    fn from_bigints(coeffs: Vec<BigInt>) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(Rat::from_integer).collect())
    }

    /// `T^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut p = Self::monomial(Rat::one(), n);
        p.coeffs[0] -= Rat::one();
        Self::from_coeffs(p.coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0; only for places where a
    /// zero input has already been excluded or 0 is the right answer.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Zero or a nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divide by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Binary exponentiation.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(T))`, expanded.
    pub fn compose(&self, inner: &UPoly) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            let mut next = &acc * inner;
            next.add_constant(c);
            next
        })
    }

    fn add_constant(&mut self, c: &Rat) {
        if c.is_zero() {
            return;
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(c.clone());
        } else {
            self.coeffs[0] += c;
            if self.coeffs.len() == 1 && self.coeffs[0].is_zero() {
                self.coeffs.clear();
            }
        }
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(n) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if n < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let inv = d.coeffs[dd].recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rat::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    pub fn rem(&self, d: &UPoly) -> Result<UPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient, or `None` if `d` does not divide `self` (or `d` is zero).
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// True iff `self` divides `other`. Zero divides only zero.
    pub fn divides(&self, other: &UPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        gcd_monic(self, other)
    }

    /// Inverse of `self` modulo `m`, if they are coprime.
    pub fn inverse_mod(&self, m: &UPoly) -> Option<UPoly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m).ok()?);
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).ok()?;
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if !r0.is_constant() {
            return None;
        }
        s0.scale(&r0.leading_coeff()?.recip()).rem(m).ok()
    }

    /// Monic lcm; zero if either input is zero.
    pub fn lcm(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        let q = self.div_exact(&g).expect("gcd divides its input");
        (&q * other).monic()
    }

    /// Split into a rational content and a primitive integer polynomial with
    /// positive leading coefficient: `self = content * prim`.
    pub fn primitive_integer(&self) -> (Rat, Vec<BigInt>) {
        if self.is_zero() {
            return (Rat::zero(), Vec::new());
        }
        let den = common_denominator(&self.coeffs);
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = content(&ints);
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
        (Rat::new(g, den), ints)
    }

    /// Yun's squarefree decomposition of `monic(self)`: pairs `(part, mult)`
    /// with pairwise coprime squarefree monic parts, increasing multiplicity,
    /// and `monic(self) = prod part^mult`. Constants decompose to `[]`.
    pub fn squarefree_decompose(&self) -> Result<Vec<(UPoly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("squarefree decomposition"));
        }
        let f = self.monic();
        if f.is_constant() {
            return Ok(Vec::new());
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides f");
        let c = df.div_exact(&a0).expect("gcd divides f'");
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            let nb = b.div_exact(&a).expect("gcd divides b");
            let nc = d.div_exact(&a).expect("gcd divides d");
            if !a.is_constant() {
                out.push((a, i));
            }
            d = &nc - &nb.derivative();
            b = nb;
            i += 1;
        }
        Ok(out)
    }

    /// Monic product of the distinct irreducible factors.
    pub fn radical(&self) -> Result<UPoly> {
        Ok(self
            .squarefree_decompose()?
            .into_iter()
            .fold(UPoly::one(), |acc, (p, _)| &acc * &p))
    }

    /// Squarefree and monic part of a possibly zero polynomial (zero maps to zero).
    pub fn squarefree_part(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.radical().expect("nonzero")
    }
}

/// Monic gcd by primitive-part Euclid on integer images.
///
/// `gcd(0, 0) = 0` and `gcd(a, 0) = monic(a)`.
pub fn gcd_monic(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return UPoly::one();
    }
    let (_, pa) = a.primitive_integer();
    let (_, pb) = b.primitive_integer();
    let (mut x, mut y) = if pa.len() >= pb.len() {
        (pa, pb)
    } else {
        (pb, pa)
    };
    while !y.is_empty() {
        let r = pseudo_rem_primitive(&x, &y);
        x = y;
        y = r;
        if x.len() == 1 {
            return UPoly::one();
        }
    }
    UPoly::from_bigints(x).monic()
}

/// Primitive part of a scalar multiple of the remainder of `a` by `b`.
fn pseudo_rem_primitive(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let lr = r.last().expect("nonempty").clone();
        let g = lr.gcd(lb);
        let mul_r = lb / &g;
        let mul_b = &lr / &g;
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= &mul_r;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &mul_b * bc;
        }
        debug_assert!(r.last().is_some_and(Zero::is_zero));
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        let g = content(&r);
        if !g.is_zero() && !g.is_one() {
            for c in r.iter_mut() {
                *c = &*c / &g;
            }
        }
    }
    r
}

fn mul_dense(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_zero() || b.is_zero() {
        return UPoly::zero();
    }
    // Multiply integer images and rescale once; much cheaper than
    // normalising a rational at every inner step.
    let (ca, ia) = a.primitive_integer();
    let (cb, ib) = b.primitive_integer();
    let mut out = vec![BigInt::zero(); ia.len() + ib.len() - 1];
    for (i, x) in ia.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in ib.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    let c = ca * cb;
    UPoly::from_coeffs(out.into_iter().map(|v| Rat::from_integer(v) * &c).collect())
}

fn add_dense(a: &UPoly, b: &UPoly, negate_b: bool) -> UPoly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.coeffs.get(k);
        let y = b.coeffs.get(k);
        let v = match (x, y) {
            (Some(x), Some(y)) if negate_b => x - y,
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) if negate_b => -y,
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(v);
    }
    UPoly::from_coeffs(out)
}

impl Add<&UPoly> for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        add_dense(self, rhs, false)
    }
}

impl Sub<&UPoly> for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        add_dense(self, rhs, true)
    }
}

impl Mul<&UPoly> for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        mul_dense(self, rhs)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<UPoly> for UPoly {
            type Output = UPoly;
            fn $m(self, rhs: UPoly) -> UPoly { (&self).$m(&rhs) }
        }
        impl $tr<&UPoly> for UPoly {
            type Output = UPoly;
            fn $m(self, rhs: &UPoly) -> UPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        -&self
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_upoly(self))
    }
}

/// Serialized as canonical text.
impl serde::Serialize for UPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&p(&[-1, 1]) * &p(&[1, 1]), p(&[-1, 0, 1]));
        assert_eq!(p(&[-1, 1]).compose(&p(&[0, 0, 0, 1])), p(&[-1, 0, 0, 1]));
        let (q, r) = p(&[-1, 0, 0, 1]).divrem(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn inverse_modulo() {
        let m = p(&[1, 0, 1]);
        let a = p(&[1, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert!((&(&a * &inv) - &UPoly::one()).rem(&m).unwrap().is_zero());
        assert!(p(&[0, 1]).inverse_mod(&p(&[0, 1, 1])).is_none());
    }

    #[test]
    fn divrem_by_zero_is_error() {
        assert_eq!(
            p(&[1, 1]).divrem(&UPoly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(UPoly::zero().degree(), None);
        assert_eq!(p(&[5]).degree(), Some(0));
        assert_eq!(p(&[0, 0, 0]), UPoly::zero());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 0, 0, 1])), p(&[-1, 1]));
        assert_eq!(p(&[1, 1, 1]).gcd(&p(&[-1, 0, 1])), UPoly::one());
        assert_eq!(p(&[1, -2, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(UPoly::zero().gcd(&UPoly::zero()), UPoly::zero());
        assert_eq!(p(&[4, 2]).gcd(&UPoly::zero()), p(&[2, 1]));
    }

    #[test]
    fn gcd_with_rational_coefficients() {
        let a = UPoly::from_coeffs(vec![Rat::new(1.into(), 2.into()), Rat::one()]);
        let b = &a * &p(&[3, 0, 7]);
        assert_eq!(a.gcd(&b), a.monic());
    }

    #[test]
    fn squarefree_examples() {
        let f = &p(&[1, -2, 1]) * &p(&[2, 1]);
        assert_eq!(
            f.squarefree_decompose().unwrap(),
            vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]
        );
        assert_eq!(
            p(&[1, 1, 1]).squarefree_decompose().unwrap(),
            vec![(p(&[1, 1, 1]), 1)]
        );
        assert_eq!(
            p(&[-1, 1]).pow(3).squarefree_decompose().unwrap(),
            vec![(p(&[-1, 1]), 3)]
        );
        assert!(UPoly::zero().squarefree_decompose().is_err());
    }

    #[test]
    fn radical_examples() {
        let f = &p(&[-1, 1]).pow(2) * &p(&[1, 1]);
        assert_eq!(f.radical().unwrap(), p(&[-1, 0, 1]));
        assert_eq!(UPoly::t().pow(5).radical().unwrap(), UPoly::t());
        assert_eq!(p(&[2, 0, 4]).radical().unwrap(), p(&[2, 0, 4]).monic());
    }

    #[test]
    fn compose_degree_multiplies() {
        let h = p(&[1, 2, 0, 3]);
        let f = p(&[0, 1, 1]);
        assert_eq!(h.compose(&f).degree(), Some(6));
    }
}
