//! Sparse multivariate polynomials over Q in graded-lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{common_denominator, content, Rat};
use crate::upoly::UPoly;

/// Largest arity accepted by [`MPoly::gcd`].
pub const MGCD_MAX_ARITY: usize = 3;

/// Exponent vector ordered graded-lexicographically: total degree first,
/// then the exponent of `X1`, then `X2`, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `X1..X_arity`. Variables are addressed by 0-based index
/// (`0` is `X1`). No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MPoly {
    arity: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero(arity: usize) -> Self {
        MPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rat::one())
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        let mut p = Self::zero(arity);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(arity), c);
        }
        p
    }

    /// The variable `X_{var+1}`.
    pub fn var(arity: usize, var: usize) -> Self {
        assert!(var < arity, "variable index out of range");
        let mut e = vec![0; arity];
        e[var] = 1;
        Self::from_terms(arity, [(e, Rat::one())])
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent vector length must equal arity");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Embed a univariate polynomial, `T` becoming `X_{var+1}`.
    pub fn from_upoly(u: &UPoly, arity: usize, var: usize) -> Self {
        Self::from_terms(
            arity,
            u.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; arity];
                e[var] = k as u32;
                (e, c.clone())
            }),
        )
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// `max_i deg_{X_i}`, zero for the zero polynomial.
    pub fn max_var_degree(&self) -> u32 {
        (0..self.arity)
            .filter_map(|v| self.degree_in(v))
            .max()
            .unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Highest variable index in use plus one (0 for constants).
    pub fn used_arity(&self) -> usize {
        (0..self.arity)
            .rev()
            .find(|&v| self.uses_var(v))
            .map_or(0, |v| v + 1)
    }

    /// Same polynomial viewed with a different arity. Fails when shrinking
    /// would drop a variable that occurs.
    pub fn with_arity(&self, arity: usize) -> Result<Self> {
        if self.used_arity() > arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: self.used_arity(),
            });
        }
        let mut out = Self::zero(arity);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.resize(arity, 0);
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    fn check_arity(&self, other: &MPoly) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_arity(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_arity(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_arity(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rat) -> MPoly {
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> MPoly {
        let mut base = self.clone();
        let mut acc = Self::one(self.arity);
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

    /// Divide by the graded-lex leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Replace `X_{var+1}` by `value` everywhere.
    pub fn substitute(&self, var: usize, value: &MPoly) -> Result<MPoly> {
        self.check_arity(value)?;
        if var >= self.arity {
            return Err(Error::invalid(format!(
                "variable X{} outside arity {}",
                var + 1,
                self.arity
            )));
        }
        let coeffs = self.coefficients_in(var);
        let mut out = Self::zero(self.arity);
        for c in coeffs.iter().rev() {
            out = &(&out * value) + c;
        }
        Ok(out)
    }

    /// Evaluate one variable at a rational, keeping the arity.
    pub fn eval_var(&self, var: usize, value: &Rat) -> MPoly {
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[var], 0);
            out.add_term(Monomial(e), c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    /// `F(T, alpha_2, ..., alpha_arity)`.
    pub fn specialize(&self, alphas: &[Rat]) -> Result<UPoly> {
        if alphas.len() + 1 != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity - 1,
                found: alphas.len(),
            });
        }
        let mut coeffs: Vec<Rat> = Vec::new();
        for (m, c) in &self.terms {
            let k = m.0[0] as usize;
            let mut v = c.clone();
            for (a, &e) in alphas.iter().zip(&m.0[1..]) {
                if e > 0 {
                    v *= num_traits::pow(a.clone(), e as usize);
                }
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rat::zero());
            }
            coeffs[k] += v;
        }
        Ok(UPoly::from_coeffs(coeffs))
    }

    /// The univariate polynomial in `X_{var+1}`, if no other variable occurs.
    pub fn to_upoly(&self, var: usize) -> Option<UPoly> {
        let mut coeffs: Vec<Rat> = Vec::new();
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return None;
            }
            let k = m.0[var] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rat::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UPoly::from_coeffs(coeffs))
    }

    /// Coefficients with respect to `X_{var+1}` (ascending), each free of that variable.
    pub fn coefficients_in(&self, var: usize) -> Vec<MPoly> {
        let mut out: Vec<MPoly> = Vec::new();
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            if out.len() <= k {
                out.resize(k + 1, Self::zero(self.arity));
            }
            let mut e = m.0.clone();
            e[var] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Inverse of [`MPoly::coefficients_in`].
    pub fn from_coefficients_in(arity: usize, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = Self::zero(arity);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut e = m.0.clone();
                e[var] += k as u32;
                out.add_term(Monomial(e), a.clone());
            }
        }
        out
    }

    fn leading_coeff_in(&self, var: usize) -> (u32, MPoly) {
        let d = self.degree_in(var).unwrap_or(0);
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            if m.0[var] == d {
                let mut e = m.0.clone();
                e[var] = 0;
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        (d, out)
    }

    /// Exact quotient by multivariate division, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if self.arity != d.arity {
            return None;
        }
        let (dm, dc) = d.leading_term()?;
        let (dm, dc_inv) = (dm.clone(), dc.recip());
        let mut r = self.clone();
        let mut q = Self::zero(self.arity);
        while let Some((rm, rc)) = r.leading_term() {
            let m = rm.div(&dm)?;
            let c = rc * &dc_inv;
            r = &r - &d.mul_term(&m, &c);
            q.add_term(m, c);
        }
        Some(q)
    }

    pub fn divides(&self, other: &MPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_exact(self).is_some()
    }

    /// Pseudo-remainder in `X_{var+1}`.
    fn pseudo_rem(&self, d: &MPoly, var: usize) -> MPoly {
        let (dd, lcd) = d.leading_coeff_in(var);
        let mut r = self.clone();
        while !r.is_zero() {
            let (dr, lcr) = r.leading_coeff_in(var);
            if dr < dd {
                break;
            }
            let mut e = vec![0; self.arity];
            e[var] = dr - dd;
            let shift = Self::from_terms(self.arity, [(e, Rat::one())]);
            r = &(&r * &lcd) - &(&(&lcr * &shift) * d);
        }
        r
    }

    /// Monic gcd (leading coefficient 1 under graded-lex). Arity is capped at
    /// [`MGCD_MAX_ARITY`]; `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &MPoly) -> Result<MPoly> {
        self.check_arity(other)?;
        if self.arity > MGCD_MAX_ARITY {
            return Err(Error::DeskScale(format!(
                "multivariate gcd supports arity <= {MGCD_MAX_ARITY}, got {}",
                self.arity
            )));
        }
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroPolynomial("gcd of two zero polynomials"));
        }
        let vars: Vec<usize> = (0..self.arity).collect();
        Ok(gcd_rec(self, other, &vars))
    }

    /// `h(self)` for a univariate `h`.
    pub fn apply_upoly(&self, h: &UPoly) -> MPoly {
        h.coeffs()
            .iter()
            .rev()
            .fold(Self::zero(self.arity), |acc, c| {
                &(&acc * self) + &Self::constant(self.arity, c.clone())
            })
    }

    /// Value at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.arity);
        self.terms.iter().fold(Rat::zero(), |acc, (m, c)| {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc + v
        })
    }
}

fn content_in(p: &MPoly, var: usize, rest: &[usize]) -> MPoly {
    p.coefficients_in(var)
        .iter()
        .filter(|c| !c.is_zero())
        .fold(MPoly::zero(p.arity), |acc, c| gcd_rec(&acc, c, rest))
}

fn primitive_in(p: &MPoly, var: usize, rest: &[usize]) -> MPoly {
    let c = content_in(p, var, rest);
    p.div_exact(&c).expect("content divides")
}

/// Scale to integer coefficients with trivial integer content.
fn integer_primitive(p: &MPoly) -> MPoly {
    let den = common_denominator(p.terms.values());
    let ints: Vec<BigInt> = p
        .terms
        .values()
        .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
        .collect();
    let g = content(&ints);
    if g.is_zero() {
        return p.clone();
    }
    p.scale(&Rat::new(den, g))
}

/// Recursive content / primitive-PRS gcd over the listed variables. The main
/// variable is the one of least degree, which keeps the remainder sequence short.
fn gcd_rec(a: &MPoly, b: &MPoly, vars: &[usize]) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let deg = |v: usize| a.degree_in(v).unwrap_or(0).max(b.degree_in(v).unwrap_or(0));
    let Some(var) = vars
        .iter()
        .copied()
        .filter(|&v| a.uses_var(v) || b.uses_var(v))
        .min_by_key(|&v| deg(v))
    else {
        return MPoly::one(a.arity);
    };
    let rest: Vec<usize> = vars.iter().copied().filter(|&v| v != var).collect();
    let rest = &rest[..];
    let ca = content_in(a, var, rest);
    let cb = content_in(b, var, rest);
    let c = gcd_rec(&ca, &cb, rest);
    let pa = integer_primitive(&a.div_exact(&ca).expect("content divides"));
    let pb = integer_primitive(&b.div_exact(&cb).expect("content divides"));
    let (mut x, mut y) = if pa.degree_in(var) >= pb.degree_in(var) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let g = loop {
        if y.is_zero() {
            break primitive_in(&x, var, rest);
        }
        if !y.uses_var(var) {
            break MPoly::one(a.arity);
        }
        let r = x.pseudo_rem(&y, var);
        x = y;
        y = if r.is_zero() {
            r
        } else {
            integer_primitive(&primitive_in(&r, var, rest))
        };
    };
    (&c * &g).monic()
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.arity, rhs.arity);
        let mut out = MPoly::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rat::one())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly { (&self).$m(&rhs) }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_mpoly(self))
    }
}

/// Serialized as canonical text.
impl serde::Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn x(i: usize) -> MPoly {
        MPoly::var(2, i)
    }

    fn c(v: i64) -> MPoly {
        MPoly::constant(2, int(v))
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&x(0) * &x(1), MPoly::from_terms(2, [(vec![1, 1], int(1))]));
        let s = (&x(0) + &x(1)).pow(2);
        assert_eq!(
            s,
            MPoly::from_terms(
                2,
                [
                    (vec![2, 0], int(1)),
                    (vec![1, 1], int(2)),
                    (vec![0, 2], int(1))
                ]
            )
        );
        let sub = (&x(0) * &x(1))
            .substitute(1, &(&x(1) + &x(0).pow(2)))
            .unwrap();
        assert_eq!(sub, &(&x(0) * &x(1)) + &x(0).pow(3));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let a = MPoly::var(2, 0);
        let b = MPoly::var(3, 0);
        assert!(matches!(a.try_mul(&b), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn specialize_examples() {
        let f = &x(0) * &x(1);
        assert_eq!(f.specialize(&[int(3)]).unwrap(), UPoly::from_ints(&[0, 3]));
        let g = &x(1) + &x(0).pow(2);
        assert_eq!(
            g.specialize(&[int(1)]).unwrap(),
            UPoly::from_ints(&[1, 0, 1])
        );
        let h = &(&x(0) + &x(1)) - &x(1);
        assert_eq!(h.specialize(&[int(7)]).unwrap(), UPoly::t());
        assert!(f.specialize(&[]).is_err());
    }

    #[test]
    fn grlex_leading_term() {
        let p = &(&x(0) * &x(1)) + &x(0).pow(3);
        assert_eq!(p.leading_term().unwrap().0.exps(), &[3, 0]);
        let q = &x(0) + &x(1);
        assert_eq!(q.leading_term().unwrap().0.exps(), &[1, 0]);
    }

    #[test]
    fn mgcd_examples() {
        let a = &x(0) * &x(1);
        let b = &x(0).pow(2) * &x(1);
        assert_eq!(a.gcd(&b).unwrap(), a);

        let s = &x(0) + &x(1);
        let a = &s.pow(2) * &(&x(0) - &c(1));
        let b = &s * &(&x(1) + &c(3));
        assert_eq!(a.gcd(&b).unwrap(), s);

        let a = &x(0).pow(2) - &c(1);
        let b = &x(1).pow(2) - &c(1);
        assert_eq!(a.gcd(&b).unwrap(), c(1));
    }

    #[test]
    fn mgcd_rejects_large_arity() {
        let a = MPoly::var(4, 0);
        assert!(matches!(a.gcd(&a), Err(Error::DeskScale(_))));
    }

    #[test]
    fn mgcd_normalizes_scalars() {
        let a = (&x(0) + &x(1)).scale(&int(6));
        let b = (&x(0) + &x(1)).scale(&int(-4));
        assert_eq!(a.gcd(&b).unwrap(), &x(0) + &x(1));
    }

    #[test]
    fn div_exact_detects_non_divisibility() {
        let a = &x(0).pow(2) - &c(1);
        assert!(a.div_exact(&(&x(0) - &c(1))).is_some());
        assert!(a.div_exact(&(&x(0) - &c(2))).is_none());
        assert!(a.div_exact(&x(1)).is_none());
    }
}
