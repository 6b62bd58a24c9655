//! Closed-form degree and count bounds, selectable by name.
//!
//! Every formula is exact big-integer arithmetic except the
//! `(0.792 x / ln(x + 1))^x` count, which is enclosed in a fixed-point
//! interval and rounded up.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Named nonnegative integer parameters.
pub type BoundParams = BTreeMap<String, u64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub theorem: String,
    pub inputs: BoundParams,
    #[serde(serialize_with = "ser_biguint")]
    pub value: BigUint,
    /// False when `value` is a rounded-up real number.
    pub exact: bool,
    pub intermediates: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl BoundReport {
    fn exact(theorem: &str, inputs: &BoundParams, value: BigUint) -> Self {
        BoundReport {
            theorem: theorem.to_string(),
            inputs: inputs.clone(),
            value,
            exact: true,
            intermediates: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }
}

pub trait BoundFormula: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn params(&self) -> &'static [&'static str];
    fn evaluate(&self, params: &BoundParams) -> Result<BoundReport>;
}

fn get(params: &BoundParams, key: &str) -> Result<u64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::invalid(format!("missing bound parameter '{key}'")))
}

fn positive(params: &BoundParams, key: &str) -> Result<u64> {
    match get(params, key)? {
        0 => Err(Error::invalid(format!(
            "bound parameter '{key}' must be positive"
        ))),
        v => Ok(v),
    }
}

/// Refuse results with more than this many bits.
const MAX_RESULT_BITS: u64 = 1 << 26;

fn checked_pow(base: &BigUint, exp: u64) -> Result<BigUint> {
    let bits = base.bits().saturating_mul(exp);
    if bits > MAX_RESULT_BITS {
        return Err(Error::DeskScale(format!(
            "result would have about {bits} bits"
        )));
    }
    Ok(num_traits::pow(base.clone(), exp as usize))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n as usize {
        if sieve[i] {
            (i * i..=n as usize)
                .step_by(i)
                .for_each(|j| sieve[j] = false);
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k as usize]).collect()
}

fn product_tree(xs: &[u64]) -> BigUint {
    match xs {
        [] => BigUint::one(),
        [x] => BigUint::from(*x),
        _ => {
            let (a, b) = xs.split_at(xs.len() / 2);
            product_tree(a) * product_tree(b)
        }
    }
}

/// Largest argument accepted by [`primorial_checked`].
pub const PRIMORIAL_LIMIT: u64 = 1 << 22;

/// Product of the primes `p <= n`.
pub fn primorial(n: u64) -> BigUint {
    product_tree(&primes_up_to(n))
}

/// [`primorial`] with a size guard: the sieve and the result grow linearly in `n`.
pub fn primorial_checked(n: u64) -> Result<BigUint> {
    if n > PRIMORIAL_LIMIT {
        return Err(Error::DeskScale(format!(
            "primorial({n}) has about {} bits",
            (n as f64 * std::f64::consts::LOG2_E) as u64
        )));
    }
    Ok(primorial(n))
}

/// `(11 (df + dg)^2)^min(df, dg)`.
pub fn univar_bound(df: u64, dg: u64) -> Result<BigUint> {
    let base = BigUint::from(11u64) * BigUint::from(df + dg).pow(2);
    checked_pow(&base, df.min(dg))
}

/// `dh1 dh2 (11 (df + dg)^2)^min(df, dg)`.
pub fn genar1_bound(dh1: u64, dh2: u64, df: u64, dg: u64) -> Result<BigUint> {
    Ok(BigUint::from(dh1) * dh2 * univar_bound(df, dg)?)
}

/// `dh1 dh2 (44 (D + 1)^(2 l))^((D + 1)^l)`.
pub fn multivar_bound(dh1: u64, dh2: u64, d: u64, l: u64) -> Result<BigUint> {
    let d1 = BigUint::from(d + 1);
    let base = BigUint::from(44u64) * checked_pow(&d1, 2 * l)?;
    let exp = checked_pow(&d1, l)?
        .to_u64()
        .ok_or_else(|| Error::DeskScale("exponent exceeds 64 bits".into()))?;
    Ok(BigUint::from(dh1) * dh2 * checked_pow(&base, exp)?)
}

/// `C(l + 1 + D^l, l + 1)`.
pub fn gamma(l: u64, d: u64) -> Result<BigUint> {
    let dl = checked_pow(&BigUint::from(d), l)?
        .to_u64()
        .ok_or_else(|| Error::DeskScale("D^l exceeds 64 bits".into()))?;
    Ok(binomial(l + 1 + dl, l + 1))
}

/// `(l + 1) D^l prod_{p <= gamma} p`.
pub fn common_zero_degree_bound(l: u64, d: u64, gamma: u64) -> Result<BigUint> {
    Ok(BigUint::from(l + 1) * checked_pow(&BigUint::from(d), l)? * primorial_checked(gamma)?)
}

// Fixed-point logarithms: values are integers scaled by 2^prec.

/// Bounds on `2^prec * atanh(a / b)` for `0 <= a / b <= 1/3`.
fn atanh_fixed(a: &BigUint, b: &BigUint, prec: u64) -> (BigUint, BigUint) {
    let a2 = a * a;
    let b2 = b * b;
    let mut num = a.clone();
    let mut den = b.clone();
    let mut lo = BigUint::zero();
    let mut k = 1u64;
    let mut terms = 0u64;
    let last = loop {
        let term = (&num << prec) / (&den * k);
        if term.is_zero() {
            break term;
        }
        lo += &term;
        terms += 1;
        num *= &a2;
        den *= &b2;
        k += 2;
    };
    // Each floor loses under one unit; the tail after a zero term is below
    // one unit times 1 / (1 - 1/9).
    let hi = &lo + terms + 2u64 + last;
    (lo, hi)
}

/// Bounds on `2^prec * ln(y)` for `y >= 1`.
fn ln_fixed(y: u64, prec: u64) -> (BigUint, BigUint) {
    let k = 63 - u64::from(y.leading_zeros());
    let pk = 1u64 << k;
    let (ln2_lo, ln2_hi) = atanh_fixed(&BigUint::one(), &BigUint::from(3u64), prec);
    let (r_lo, r_hi) = atanh_fixed(&BigUint::from(y - pk), &BigUint::from(y + pk), prec);
    ((ln2_lo * k + r_lo) * 2u64, (ln2_hi * k + r_hi) * 2u64)
}

fn mul_floor(a: &BigUint, b: &BigUint, prec: u64) -> BigUint {
    (a * b) >> prec
}

fn mul_ceil(a: &BigUint, b: &BigUint, prec: u64) -> BigUint {
    let p = a * b;
    let q = &p >> prec;
    if (&q << prec) == p {
        q
    } else {
        q + 1u64
    }
}

fn pow_fixed(x: &BigUint, e: u64, prec: u64, up: bool) -> BigUint {
    let mul = if up { mul_ceil } else { mul_floor };
    let mut result = BigUint::one() << prec;
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base, prec);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base, prec);
        }
    }
    result
}

fn ceil_fixed(v: &BigUint, prec: u64) -> BigUint {
    let q = v >> prec;
    if (&q << prec) == *v {
        q
    } else {
        q + 1u64
    }
}

fn n_bound_bits(g: u64) -> u64 {
    let gf = g as f64;
    (gf * (0.792 * gf / (gf + 1.0).ln()).log2()).max(0.0) as u64
}

/// `ceil((0.792 g / ln(g + 1))^g)` and whether the enclosure pinned the
/// ceiling down exactly.
pub fn n_bound(g: u64) -> (BigUint, bool) {
    if g == 0 {
        return (BigUint::one(), true);
    }
    // Rough log2 of the result, to size the working precision.
    let approx_bits = n_bound_bits(g);
    let mut prec = 64 + approx_bits / 4;
    let mut last_hi = BigUint::zero();
    for _ in 0..8 {
        let (ln_lo, ln_hi) = ln_fixed(g + 1, prec);
        let scaled = BigUint::from(99 * g) << (2 * prec);
        let x_lo = &scaled / (ln_hi * 125u64);
        let x_hi = &scaled / (ln_lo * 125u64) + 1u64;
        let lo = ceil_fixed(&pow_fixed(&x_lo, g, prec, false), prec);
        let hi = ceil_fixed(&pow_fixed(&x_hi, g, prec, true), prec);
        if lo == hi {
            return (hi, true);
        }
        last_hi = hi;
        prec = prec * 2 + approx_bits;
    }
    (last_hi, false)
}

/// Above this many bits of `gamma` the common-zero bounds get a size warning.
const GAMMA_WARN_BITS: u64 = 14;

struct Univar;
struct GenAr1;
struct TorsionPoints;
struct Multivar;
struct Gamma;
struct CommonZeros;
struct NBound;
struct CosetEntries;
struct Abc;
struct Annihilator;

impl BoundFormula for Univar {
    fn name(&self) -> &'static str {
        "univar"
    }
    fn summary(&self) -> &'static str {
        "deg gcd(f^n - 1, g^m - 1) <= (11 (df + dg)^2)^min(df, dg)"
    }
    fn params(&self) -> &'static [&'static str] {
        &["df", "dg"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let v = univar_bound(positive(p, "df")?, positive(p, "dg")?)?;
        Ok(BoundReport::exact(self.name(), p, v))
    }
}

impl BoundFormula for GenAr1 {
    fn name(&self) -> &'static str {
        "genar1"
    }
    fn summary(&self) -> &'static str {
        "deg gcd(h1(f^n), h2(g^m)) <= dh1 dh2 (11 (df + dg)^2)^min(df, dg)"
    }
    fn params(&self) -> &'static [&'static str] {
        &["dh1", "dh2", "df", "dg"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let v = genar1_bound(
            positive(p, "dh1")?,
            positive(p, "dh2")?,
            positive(p, "df")?,
            positive(p, "dg")?,
        )?;
        Ok(BoundReport::exact(self.name(), p, v))
    }
}

impl BoundFormula for TorsionPoints {
    fn name(&self) -> &'static str {
        "torsion-points"
    }
    fn summary(&self) -> &'static str {
        "torsion points on a curve of degree deg without binomial factors <= 11 deg^2"
    }
    fn params(&self) -> &'static [&'static str] {
        &["deg"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let d = positive(p, "deg")?;
        Ok(BoundReport::exact(
            self.name(),
            p,
            BigUint::from(11u64) * d * d,
        ))
    }
}

impl BoundFormula for Multivar {
    fn name(&self) -> &'static str {
        "multivar"
    }
    fn summary(&self) -> &'static str {
        "deg gcd(h1(F^n), h2(G^m)) <= dh1 dh2 (44 (D + 1)^(2 l))^((D + 1)^l)"
    }
    fn params(&self) -> &'static [&'static str] {
        &["dh1", "dh2", "D", "l"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let v = multivar_bound(
            positive(p, "dh1")?,
            positive(p, "dh2")?,
            positive(p, "D")?,
            positive(p, "l")?,
        )?;
        Ok(BoundReport::exact(self.name(), p, v))
    }
}

impl BoundFormula for Gamma {
    fn name(&self) -> &'static str {
        "gamma"
    }
    fn summary(&self) -> &'static str {
        "gamma_l(D) = C(l + 1 + D^l, l + 1)"
    }
    fn params(&self) -> &'static [&'static str] {
        &["l", "D"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let v = gamma(positive(p, "l")?, positive(p, "D")?)?;
        Ok(BoundReport::exact(self.name(), p, v))
    }
}

fn gamma_u64(l: u64, d: u64) -> Result<u64> {
    gamma(l, d)?
        .to_u64()
        .ok_or_else(|| Error::DeskScale("gamma exceeds 64 bits".into()))
}

impl BoundFormula for CommonZeros {
    fn name(&self) -> &'static str {
        "common-zeros"
    }
    fn summary(&self) -> &'static str {
        "common zeros of F_i^{n_i} - 1 lie on at most N varieties of degree <= (l + 1) D^l primorial(gamma)"
    }
    fn params(&self) -> &'static [&'static str] {
        &["l", "D"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let (l, d) = (positive(p, "l")?, positive(p, "D")?);
        let g = gamma_u64(l, d)?;
        let mut r = BoundReport::exact(self.name(), p, common_zero_degree_bound(l, d, g)?);
        r.intermediates.insert("gamma".into(), g.to_string());
        r.intermediates
            .insert("primorial_gamma".into(), primorial_checked(g)?.to_string());
        let ln_primorial: f64 = primes_up_to(g).iter().map(|&q| (q as f64).ln()).sum();
        r.intermediates.insert(
            "ln_primorial_gamma_approx".into(),
            format!("{ln_primorial:.6}"),
        );
        if 64 - g.leading_zeros() as u64 > GAMMA_WARN_BITS {
            r.warnings.push(format!(
                "gamma = {g} is large; N is reported only by its bit length"
            ));
            r.intermediates.insert(
                "n_bound_log2_approx".into(),
                format!(
                    "{:.3}",
                    g as f64 * (0.792 * g as f64 / ((g + 1) as f64).ln()).log2()
                ),
            );
        } else {
            let (n, tight) = n_bound(g);
            r.intermediates.insert("n_bound".into(), n.to_string());
            r.intermediates.insert(
                "n_bound_rounding".into(),
                if tight {
                    "upper rounding"
                } else {
                    "upper rounding, not tight"
                }
                .into(),
            );
        }
        Ok(r)
    }
}

impl BoundFormula for NBound {
    fn name(&self) -> &'static str {
        "n-bound"
    }
    fn summary(&self) -> &'static str {
        "N = ceil((0.792 gamma / ln(gamma + 1))^gamma); pass gamma, or l and D"
    }
    fn params(&self) -> &'static [&'static str] {
        &["gamma"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let g = match p.get("gamma") {
            Some(&g) => g,
            None => gamma_u64(positive(p, "l")?, positive(p, "D")?)?,
        };
        let bits = n_bound_bits(g);
        if bits > MAX_RESULT_BITS {
            return Err(Error::DeskScale(format!("N would have about {bits} bits")));
        }
        let mut warnings = Vec::new();
        if 64 - g.leading_zeros() as u64 > GAMMA_WARN_BITS {
            warnings.push(format!("gamma = {g} is large; evaluation may be slow"));
        }
        let (value, tight) = n_bound(g);
        let mut r = BoundReport::exact(self.name(), p, value);
        r.exact = false;
        r.warnings = warnings;
        r.intermediates.insert("gamma".into(), g.to_string());
        r.intermediates.insert(
            "rounding".into(),
            if tight {
                "upper rounding"
            } else {
                "upper rounding, not tight"
            }
            .into(),
        );
        Ok(r)
    }
}

impl BoundFormula for CosetEntries {
    fn name(&self) -> &'static str {
        "coset-entries"
    }
    fn summary(&self) -> &'static str {
        "relation entries |b_{j,i}| <= D primorial(s) for a variety with s monomials"
    }
    fn params(&self) -> &'static [&'static str] {
        &["D", "s"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let (d, s) = (positive(p, "D")?, positive(p, "s")?);
        let mut r = BoundReport::exact(self.name(), p, BigUint::from(d) * primorial_checked(s)?);
        if 64 - s.leading_zeros() as u64 > GAMMA_WARN_BITS {
            r.warnings.push(format!(
                "s = {s} is large; the coset count bound is omitted"
            ));
        } else {
            let (n, _) = n_bound(s);
            r.intermediates
                .insert("coset_count_bound".into(), n.to_string());
        }
        Ok(r)
    }
}

impl BoundFormula for Abc {
    fn name(&self) -> &'static str {
        "abc"
    }
    fn summary(&self) -> &'static str {
        "root multiplicity of prod f_i^{n_i} - prod g_j^{m_j} <= sum deg f_i + sum deg g_j"
    }
    fn params(&self) -> &'static [&'static str] {
        &["df", "dg"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let v = get(p, "df")? + get(p, "dg")?;
        Ok(BoundReport::exact(self.name(), p, BigUint::from(v)))
    }
}

impl BoundFormula for Annihilator {
    fn name(&self) -> &'static str {
        "annihilator"
    }
    fn summary(&self) -> &'static str {
        "l + 1 polynomials in l variables of degree <= D satisfy a relation of degree <= D^l"
    }
    fn params(&self) -> &'static [&'static str] {
        &["D", "l"]
    }
    fn evaluate(&self, p: &BoundParams) -> Result<BoundReport> {
        let v = checked_pow(&BigUint::from(positive(p, "D")?), positive(p, "l")?)?;
        Ok(BoundReport::exact(self.name(), p, v))
    }
}

static REGISTRY: &[&dyn BoundFormula] = &[
    &Univar,
    &GenAr1,
    &TorsionPoints,
    &Multivar,
    &Gamma,
    &CommonZeros,
    &NBound,
    &CosetEntries,
    &Abc,
    &Annihilator,
];

pub fn registry() -> &'static [&'static dyn BoundFormula] {
    REGISTRY
}

pub fn lookup(name: &str) -> Result<&'static dyn BoundFormula> {
    REGISTRY
        .iter()
        .copied()
        .find(|f| f.name() == name)
        .ok_or_else(|| {
            let names: Vec<_> = REGISTRY.iter().map(|f| f.name()).collect();
            Error::invalid(format!(
                "unknown bound '{name}' (known: {})",
                names.join(", ")
            ))
        })
}

pub fn evaluate(name: &str, params: &BoundParams) -> Result<BoundReport> {
    lookup(name)?.evaluate(params)
}
