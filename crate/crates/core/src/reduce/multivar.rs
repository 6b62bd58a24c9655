use num_bigint::BigUint;
use serde::Serialize;

use super::kronecker::KroneckerMap;
use super::specialize::find_independent_specialization;
use crate::bounds::{genar1_bound, multivar_bound};
use crate::error::{Error, Result};
use crate::mpoly::{MPoly, MGCD_MAX_ARITY};
use crate::mulind::{is_mult_independent, Mode, Verdict};
use crate::rat::{ser_rats, Rat};
use crate::upoly::UPoly;

/// The chain `deg gcd(h1(F^n), h2(G^m)) <= deg of the transformed gcd
/// <= deg of the specialized univariate gcd <= bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultivarReport {
    pub arity: usize,
    /// Largest total degree of `F` and `G`.
    pub max_degree: u32,
    pub kronecker: KroneckerMap,
    pub mode: Mode,
    pub direct_gcd: Option<MPoly>,
    pub direct_degree: Option<u32>,
    pub transformed_gcd: Option<MPoly>,
    pub transformed_degree: Option<u32>,
    #[serde(serialize_with = "ser_rats")]
    pub alphas: Vec<Rat>,
    pub candidates_tried: usize,
    pub specialized_f: UPoly,
    pub specialized_g: UPoly,
    pub univariate_gcd: UPoly,
    pub univariate_degree: usize,
    #[serde(serialize_with = "ser_big")]
    pub bound: BigUint,
    /// The two-polynomial bound for the specialized pair, for comparison.
    #[serde(serialize_with = "ser_big")]
    pub univariate_bound: BigUint,
    pub chain_holds: bool,
    pub notes: Vec<String>,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Run the reduction for `gcd(h1(F^n), h2(G^m))`.
///
/// Independence is required modulo constants, or only plainly when
/// `h1 = h2 = T - 1`.
pub fn multivar_check(
    h1: &UPoly,
    h2: &UPoly,
    f: &MPoly,
    g: &MPoly,
    n: u64,
    m: u64,
    budget: usize,
) -> Result<MultivarReport> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: g.arity(),
        });
    }
    if n == 0 || m == 0 {
        return Err(Error::invalid("exponents must be at least 1"));
    }
    if h1.is_constant() || h2.is_constant() {
        return Err(Error::ConstantPolynomial("h1 and h2"));
    }
    if f.is_constant() || g.is_constant() {
        return Err(Error::ConstantPolynomial("F and G"));
    }
    let arity = f.arity();
    let t_minus_one = UPoly::from_ints(&[-1, 1]);
    let mode = if *h1 == t_minus_one && *h2 == t_minus_one {
        Mode::Plain
    } else {
        Mode::ModConstants
    };
    if let Verdict::Dependent(c) = is_mult_independent(&[f.clone(), g.clone()], mode)? {
        return Err(Error::Dependent {
            relation: c.relation,
        });
    }
    let max_degree = f
        .total_degree()
        .unwrap_or(0)
        .max(g.total_degree().unwrap_or(0));
    let kronecker = KroneckerMap::new(arity, max_degree + 1)?;
    let ft = kronecker.forward(f)?;
    let gt = kronecker.forward(g)?;
    let mut notes = Vec::new();

    let (direct_gcd, transformed_gcd) = if arity <= MGCD_MAX_ARITY {
        let a = f.pow(n).apply_upoly(h1);
        let b = g.pow(m).apply_upoly(h2);
        let direct = a.gcd(&b)?;
        let transformed = ft.pow(n).apply_upoly(h1).gcd(&gt.pow(m).apply_upoly(h2))?;
        (Some(direct), Some(transformed))
    } else {
        notes.push(format!(
            "direct multivariate gcd skipped: arity {arity} exceeds {MGCD_MAX_ARITY}"
        ));
        (None, None)
    };

    // Independence of the transformed pair is what the specialization must keep.
    let spec_mode = if arity == 1 { mode } else { Mode::ModConstants };
    let spec = find_independent_specialization(&[ft, gt], budget, spec_mode)?;
    let (sf, sg) = (spec.specialized[0].clone(), spec.specialized[1].clone());
    let univariate_gcd = h1.compose(&sf.pow(n)).gcd(&h2.compose(&sg.pow(m)));
    let univariate_degree = univariate_gcd.degree_or_zero();

    let dh1 = h1.degree_or_zero() as u64;
    let dh2 = h2.degree_or_zero() as u64;
    let bound = multivar_bound(dh1, dh2, u64::from(max_degree), arity as u64)?;
    let univariate_bound = genar1_bound(
        dh1,
        dh2,
        sf.degree_or_zero() as u64,
        sg.degree_or_zero() as u64,
    )?;

    let direct_degree = direct_gcd.as_ref().map(|p| p.total_degree().unwrap_or(0));
    let transformed_degree = transformed_gcd
        .as_ref()
        .map(|p| p.total_degree().unwrap_or(0));
    let u_deg = univariate_degree as u32;
    let chain_holds = direct_degree
        .zip(transformed_degree)
        .is_none_or(|(d, e)| d <= e && e <= u_deg)
        && BigUint::from(univariate_degree) <= bound;

    Ok(MultivarReport {
        arity,
        max_degree,
        kronecker,
        mode,
        direct_gcd,
        direct_degree,
        transformed_gcd,
        transformed_degree,
        alphas: spec.alphas,
        candidates_tried: spec.tried,
        specialized_f: sf,
        specialized_g: sg,
        univariate_gcd,
        univariate_degree,
        bound,
        univariate_bound,
        chain_holds,
        notes,
    })
}
