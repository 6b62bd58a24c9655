//! Multiplicative independence of polynomial families, plain and modulo
//! constants, with re-checkable dependence certificates.
//!
//! Inputs are refined into a gcd-free (pairwise coprime) basis; each input is
//! then a rational unit times a product of basis powers. A relation
//! `prod F_i^{v_i} = a` with `a` constant exists exactly when `v` is in the
//! left kernel of the exponent matrix. Plain independence additionally
//! requires `a = 1`, which adds one row per prime dividing a unit; the sign
//! of the units only ever costs a factor of two in the relation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::integer_nullspace;
use crate::mpoly::MPoly;
use crate::rat::{pow_signed, Rat};
use crate::upoly::UPoly;

/// Polynomials the independence engine can work with.
pub trait FamilyPoly: Clone + PartialEq + fmt::Display + Send + Sync {
    fn is_zero(&self) -> bool;
    fn is_constant(&self) -> bool;
    fn one_like(&self) -> Self;
    fn leading_coeff(&self) -> Rat;
    fn value_at_origin(&self) -> Rat;
    fn scale(&self, c: &Rat) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn pow(&self, e: u64) -> Self;
    fn div_exact(&self, d: &Self) -> Option<Self>;
    /// Normalized gcd (monic under the type's term order).
    fn gcd(&self, other: &Self) -> Result<Self>;
    fn degree(&self) -> u32;

    fn monic(&self) -> Self {
        self.scale(&self.leading_coeff().recip())
    }
}

impl FamilyPoly for UPoly {
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn is_constant(&self) -> bool {
        UPoly::is_constant(self)
    }
    fn one_like(&self) -> Self {
        UPoly::one()
    }
    fn leading_coeff(&self) -> Rat {
        UPoly::leading_coeff(self)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }
    fn value_at_origin(&self) -> Rat {
        self.constant_term()
    }
    fn scale(&self, c: &Rat) -> Self {
        UPoly::scale(self, c)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn pow(&self, e: u64) -> Self {
        UPoly::pow(self, e)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        UPoly::div_exact(self, d)
    }
    fn gcd(&self, other: &Self) -> Result<Self> {
        Ok(UPoly::gcd(self, other))
    }
    fn degree(&self) -> u32 {
        self.degree_or_zero() as u32
    }
}

impl FamilyPoly for MPoly {
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn is_constant(&self) -> bool {
        MPoly::is_constant(self)
    }
    fn one_like(&self) -> Self {
        MPoly::one(self.arity())
    }
    fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }
    fn value_at_origin(&self) -> Rat {
        self.coeff(&vec![0; self.arity()])
    }
    fn scale(&self, c: &Rat) -> Self {
        MPoly::scale(self, c)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn pow(&self, e: u64) -> Self {
        MPoly::pow(self, e)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        MPoly::div_exact(self, d)
    }
    fn gcd(&self, other: &Self) -> Result<Self> {
        MPoly::gcd(self, other)
    }
    fn degree(&self) -> u32 {
        self.total_degree().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Relations must multiply to exactly 1.
    Plain,
    /// Relations may multiply to any nonzero constant.
    ModConstants,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Mode::Plain),
            "mod_constants" | "mod-constants" => Ok(Mode::ModConstants),
            _ => Err(Error::invalid(format!(
                "unknown independence mode '{s}' (expected plain or mod-constants)"
            ))),
        }
    }
}

/// Rows are inputs, columns are basis elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

/// `inputs[i] = units[i] * prod_j basis[j]^exponents[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GcdFreeBasis<P> {
    pub basis: Vec<P>,
    pub exponents: ExponentMatrix,
    pub units: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependenceCertificate {
    pub relation: Vec<i64>,
    #[serde(serialize_with = "crate::rat::ser_rat")]
    pub constant: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Independent,
    Dependent(DependenceCertificate),
}

impl Verdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, Verdict::Independent)
    }

    pub fn certificate(&self) -> Option<&DependenceCertificate> {
        match self {
            Verdict::Independent => None,
            Verdict::Dependent(c) => Some(c),
        }
    }
}

/// Add `p` to a pairwise-coprime set of monic nonconstant polynomials,
/// splitting members on common factors.
fn insert_coprime<P: FamilyPoly>(set: &mut Vec<P>, p: P) -> Result<()> {
    let mut pending = vec![p];
    'next: while let Some(x) = pending.pop() {
        if x.is_constant() {
            continue;
        }
        let x = x.monic();
        for idx in 0..set.len() {
            let g = x.gcd(&set[idx])?;
            if g.is_constant() {
                continue;
            }
            let b = set.swap_remove(idx);
            pending.push(b.div_exact(&g).expect("gcd divides"));
            pending.push(x.div_exact(&g).expect("gcd divides"));
            pending.push(g);
            continue 'next;
        }
        set.push(x);
    }
    Ok(())
}

fn sort_basis<P: FamilyPoly>(set: &mut [P]) {
    set.sort_by_cached_key(|p| (p.degree(), p.to_string()));
}

fn decompose<P: FamilyPoly>(inputs: &[P], basis: Vec<P>) -> GcdFreeBasis<P> {
    let mut entries = Vec::with_capacity(inputs.len());
    let mut units = Vec::with_capacity(inputs.len());
    for p in inputs {
        let mut rest = p.clone();
        let mut row = Vec::with_capacity(basis.len());
        for b in &basis {
            let mut e = 0i64;
            while !rest.is_constant() {
                match rest.div_exact(b) {
                    Some(q) => {
                        rest = q;
                        e += 1;
                    }
                    None => break,
                }
            }
            row.push(e);
        }
        debug_assert!(rest.is_constant(), "basis must generate every input");
        units.push(rest.leading_coeff());
        entries.push(row);
    }
    GcdFreeBasis {
        exponents: ExponentMatrix {
            rows: inputs.len(),
            cols: basis.len(),
            entries,
        },
        basis,
        units,
    }
}

/// Coprime-basis refinement of a family of nonzero polynomials.
pub fn gcd_free_basis<P: FamilyPoly>(polys: &[P]) -> Result<GcdFreeBasis<P>> {
    if polys.iter().any(FamilyPoly::is_zero) {
        return Err(Error::ZeroPolynomial("gcd-free basis"));
    }
    let mut set = Vec::new();
    for p in polys {
        insert_coprime(&mut set, p.clone())?;
    }
    sort_basis(&mut set);
    Ok(decompose(polys, set))
}

impl<P: FamilyPoly> GcdFreeBasis<P> {
    /// A finer basis for the same inputs, obtained by also splitting on `q`.
    pub fn refine_with(&self, inputs: &[P], q: &P) -> Result<GcdFreeBasis<P>> {
        let mut set = self.basis.clone();
        for b in &self.basis {
            let g = b.gcd(q)?;
            if !g.is_constant() {
                insert_coprime(&mut set, g)?;
            }
        }
        sort_basis(&mut set);
        Ok(decompose(inputs, set))
    }

    /// Verdict computed from this basis.
    pub fn verdict(&self, mode: Mode) -> Result<Verdict> {
        let s = self.exponents.rows;
        if mode == Mode::ModConstants {
            if let Some(i) = (0..s).find(|&i| self.exponents.entries[i].iter().all(|&e| e == 0)) {
                let mut relation = vec![0; s];
                relation[i] = 1;
                return Ok(Verdict::Dependent(DependenceCertificate {
                    relation,
                    constant: self.units[i].clone(),
                }));
            }
        }
        // Left kernel of the exponent matrix: transpose so inputs are columns.
        let mut system: Vec<Vec<BigInt>> = (0..self.exponents.cols)
            .map(|j| {
                (0..s)
                    .map(|i| BigInt::from(self.exponents.entries[i][j]))
                    .collect()
            })
            .collect();
        if mode == Mode::Plain {
            let factored = self
                .units
                .iter()
                .map(factor_rational)
                .collect::<Result<Vec<_>>>()?;
            let mut primes: Vec<BigInt> = factored
                .iter()
                .flat_map(|f| f.iter().map(|(p, _)| p.clone()))
                .collect();
            primes.sort();
            primes.dedup();
            for p in &primes {
                system.push(
                    factored
                        .iter()
                        .map(|f| {
                            f.iter()
                                .find(|(q, _)| q == p)
                                .map_or_else(BigInt::zero, |(_, e)| BigInt::from(*e))
                        })
                        .collect(),
                );
            }
        }
        let kernel = integer_nullspace(&system, s);
        let Some(v) = kernel.into_iter().next() else {
            return Ok(Verdict::Independent);
        };
        let mut relation = to_i64(&v)?;
        let mut constant = unit_product(&self.units, &relation);
        if mode == Mode::Plain && constant != Rat::one() {
            debug_assert_eq!(constant, -Rat::one());
            relation.iter_mut().for_each(|x| *x *= 2);
            constant = Rat::one();
        }
        Ok(Verdict::Dependent(DependenceCertificate {
            relation,
            constant,
        }))
    }
}

fn to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| Error::DeskScale("relation entry exceeds 64 bits".into()))
        })
        .collect()
}

fn unit_product(units: &[Rat], relation: &[i64]) -> Rat {
    units
        .iter()
        .zip(relation)
        .map(|(u, &e)| pow_signed(u, e).expect("units are nonzero"))
        .fold(Rat::one(), |a, b| a * b)
}

/// Decide multiplicative independence of `polys`.
pub fn is_mult_independent<P: FamilyPoly>(polys: &[P], mode: Mode) -> Result<Verdict> {
    gcd_free_basis(polys)?.verdict(mode)
}

impl DependenceCertificate {
    /// Re-multiply: `prod F_i^{v_i} == constant`, with negative exponents
    /// moved to the other side.
    pub fn verify<P: FamilyPoly>(&self, polys: &[P]) -> bool {
        if polys.len() != self.relation.len()
            || polys.is_empty()
            || self.relation.iter().all(|&e| e == 0)
        {
            return false;
        }
        let one = polys[0].one_like();
        let mut num = one.clone();
        let mut den = one;
        for (p, &e) in polys.iter().zip(&self.relation) {
            if e > 0 {
                num = num.mul(&p.pow(e as u64));
            } else if e < 0 {
                den = den.mul(&p.pow(e.unsigned_abs()));
            }
        }
        num == den.scale(&self.constant)
    }
}

/// `F / F(0)` when `F(0) != 0`, else `F` unchanged.
pub fn normalize_at_origin<P: FamilyPoly>(p: &P) -> P {
    let c = p.value_at_origin();
    if c.is_zero() {
        p.clone()
    } else {
        p.scale(&c.recip())
    }
}

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Prime factorization of `|r|` with signed exponents (denominator primes
/// negative). The sign of `r` is dropped.
pub fn factor_rational(r: &Rat) -> Result<Vec<(BigInt, i64)>> {
    let mut out: Vec<(BigInt, i64)> = Vec::new();
    for (n, sign) in [(r.numer().abs(), 1i64), (r.denom().clone(), -1)] {
        for (p, e) in factor_integer(&n).ok_or_else(|| Error::UnfactoredUnit(r.to_string()))? {
            out.push((p, sign * e));
        }
    }
    out.sort();
    Ok(out)
}

fn factor_integer(n: &BigInt) -> Option<Vec<(BigInt, i64)>> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let lim = BigInt::from(TRIAL_DIVISION_LIMIT);
        if n > &lim * &lim {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}
