//! Cyclotomic polynomials and torsion points on plane curves.
//!
//! Zero tests at roots of unity run in prime fields `F_p` with
//! `p = 1 (mod L)`, where a primitive `L`-th root of unity is an ordinary
//! field element. Exponents are then plain integers mod `L`, so evaluating a
//! sparse curve at `(zeta_a^i, zeta_b^j)` is a table lookup per term.
//!
//! Indices are consistent across primes: the zero set of a rational curve is
//! stable under `zeta -> zeta^k` for units `k`, so whichever primitive root
//! each prime happens to pick, the true zeros land on the same index pairs.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::rat::{common_denominator, Rat};
use crate::resultant::{constant_coeffs, resultant};
use crate::upoly::UPoly;

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn mobius(n: u64) -> i8 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// `Phi_d`, from `prod_{e | d} (T^e - 1)^{mu(d/e)}`.
pub fn cyclotomic(d: u64) -> Result<UPoly> {
    if d == 0 {
        return Err(Error::invalid("cyclotomic index must be at least 1"));
    }
    let mut num = UPoly::one();
    let mut den = UPoly::one();
    for e in divisors(d) {
        let b = UPoly::x_pow_minus_one(e as usize);
        match mobius(d / e) {
            1 => num = &num * &b,
            -1 => den = &den * &b,
            _ => {}
        }
    }
    Ok(num.div_exact(&den).expect("cyclotomic quotient is exact"))
}

/// True iff every root of `p` is a root of unity.
pub fn is_cyclotomic_product(p: &UPoly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("cyclotomic test"));
    }
    let mut rest = p.monic();
    let n = rest.degree_or_zero() as u64;
    // phi(d) >= sqrt(d/2), so phi(d) <= n forces d <= 2 n^2.
    for d in 1..=2 * n * n {
        if rest.is_one() {
            break;
        }
        if euler_phi(d) > rest.degree_or_zero() as u64 {
            continue;
        }
        let phi = cyclotomic(d)?;
        while let Some(q) = rest.div_exact(&phi) {
            rest = q;
        }
    }
    Ok(rest.is_one())
}

/// `Psi_B = prod_{d <= B} Phi_d`.
pub fn torsion_window(b: u64) -> Result<UPoly> {
    if b == 0 {
        return Err(Error::invalid("torsion window must be at least 1"));
    }
    let mut out = UPoly::one();
    for d in 1..=b {
        out = &out * &cyclotomic(d)?;
    }
    Ok(out)
}

/// Monic squarefree polynomial whose roots are the `t` with `f(t)` and
/// `g(t)` both roots of unity of order at most `b`.
///
/// A root fixes the orders of `f(t)` and `g(t)`, so the window splits into
/// coprime pieces `gcd(Phi_a(f), Phi_c(g))` which are computed separately.
pub fn common_torsion_zeros(f: &UPoly, g: &UPoly, b: u64) -> Result<UPoly> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial("common torsion zeros (f)"));
    }
    if g.is_constant() {
        return Err(Error::ConstantPolynomial("common torsion zeros (g)"));
    }
    if b == 0 {
        return Err(Error::invalid("torsion window must be at least 1"));
    }
    let phis = (1..=b).map(cyclotomic).collect::<Result<Vec<_>>>()?;
    let fs: Vec<UPoly> = phis.iter().map(|p| p.compose(f)).collect();
    let gs: Vec<UPoly> = phis.iter().map(|p| p.compose(g)).collect();
    let pieces: Vec<UPoly> = fs
        .par_iter()
        .flat_map_iter(|a| gs.iter().map(move |c| a.gcd(c)))
        .filter(|d| !d.is_constant())
        .collect();
    let mut out = UPoly::one();
    for p in pieces {
        out = &out * &p.radical()?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TorsionPoint {
    pub order_x: u64,
    pub order_y: u64,
    pub index_x: u64,
    pub index_y: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionScanConfig {
    pub max_order: u64,
    pub prime_count: usize,
    pub prime_floor: u64,
    /// Re-check every order pair symbolically with resultants.
    pub certify: bool,
}

impl TorsionScanConfig {
    pub const DEFAULT_PRIME_FLOOR: u64 = 1 << 30;

    /// Default window `6 (deg H + 1)^2`.
    pub fn for_curve(h: &MPoly) -> Self {
        let d = u64::from(h.total_degree().unwrap_or(0));
        Self::with_bound(6 * (d + 1) * (d + 1))
    }

    pub fn with_bound(max_order: u64) -> Self {
        TorsionScanConfig {
            max_order,
            prime_count: 3,
            prime_floor: Self::DEFAULT_PRIME_FLOOR,
            certify: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionPointSet {
    pub curve: MPoly,
    pub points: Vec<TorsionPoint>,
    pub scan_bound: u64,
    pub primes_used: Vec<u64>,
    /// `Some(true)` when the symbolic re-check agreed on every order pair.
    pub certified: Option<bool>,
    pub warnings: Vec<String>,
}

impl TorsionPointSet {
    /// The count bound `11 (deg H)^2` for curves without exceptional factors.
    pub fn count_bound(&self) -> u64 {
        let d = u64::from(self.curve.total_degree().unwrap_or(0));
        11 * d * d
    }
}

/// A binomial-type factor `X^i Y^j - rho` or `X^i - rho Y^j` (rho a root of
/// unity), recorded through its rational norm form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceptionalFactor {
    pub factor: MPoly,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TorsionOutcome {
    Points(TorsionPointSet),
    Exceptional(ExceptionalFactor),
}

/// Norm forms of the exceptional binomials of degree at most `max_deg`.
///
/// Over Q a factor `X^i Y^j - rho` with `rho` a primitive `k`-th root of unity
/// comes with all its conjugates, whose product is `Phi_k(X^i Y^j)`; likewise
/// `X^i - rho Y^j` gives `Y^{j phi(k)} Phi_k(X^i / Y^j)`. Coprime `(i, j)`
/// suffices because `Phi_k(Z^g)` splits into cyclotomic factors of `Z`.
fn exceptional_forms(max_deg: u32) -> Result<Vec<(MPoly, String)>> {
    let mut out = Vec::new();
    let max_deg = u64::from(max_deg);
    for i in 0..=max_deg {
        for j in 0..=max_deg {
            if (i, j) == (0, 0) || i.gcd(&j) != 1 {
                continue;
            }
            // Degrees: (i + j) phi(k) for the product form, max(i, j) phi(k)
            // for the ratio form.
            let room_product = max_deg / (i + j);
            let room_ratio = if i > 0 && j > 0 {
                max_deg / i.max(j)
            } else {
                0
            };
            let room = room_product.max(room_ratio);
            for k in 1..=2 * room * room {
                let phi_k = euler_phi(k);
                if phi_k > room {
                    continue;
                }
                let phi = cyclotomic(k)?;
                let coeffs = phi.coeffs();
                if phi_k <= room_product {
                    let product = MPoly::from_terms(
                        2,
                        coeffs.iter().enumerate().map(|(t, c)| {
                            let t = t as u64;
                            (vec![(i * t) as u32, (j * t) as u32], c.clone())
                        }),
                    );
                    out.push((product, format!("Phi_{k}(X1^{i}*X2^{j})")));
                }
                if phi_k <= room_ratio {
                    let ratio = MPoly::from_terms(
                        2,
                        coeffs.iter().enumerate().map(|(t, c)| {
                            let t = t as u64;
                            (vec![(i * t) as u32, (j * (phi_k - t)) as u32], c.clone())
                        }),
                    );
                    out.push((ratio, format!("X2^{}*Phi_{k}(X1^{i}/X2^{j})", j * phi_k)));
                }
            }
        }
    }
    Ok(out)
}

/// First exceptional binomial norm form dividing `h`, if any.
pub fn find_exceptional_factor(h: &MPoly) -> Result<Option<ExceptionalFactor>> {
    let d = h.total_degree().unwrap_or(0);
    for (form, description) in exceptional_forms(d)? {
        if form.divides(h) {
            return Ok(Some(ExceptionalFactor {
                factor: form,
                description,
            }));
        }
    }
    Ok(None)
}

// Prime-field helpers.

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_factors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Candidates `p = kL + 1` examined before giving up on a modulus.
const PRIME_SEARCH_SPAN: u64 = 1 << 20;

/// The first `count` primes `p = 1 (mod l)` above `floor`.
pub fn primes_one_mod(l: u64, floor: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let start = floor / l + 1;
    for k in start..start.saturating_add(PRIME_SEARCH_SPAN) {
        let Some(p) = k.checked_mul(l).and_then(|x| x.checked_add(1)) else {
            break;
        };
        if is_prime_u64(p) {
            out.push(p);
            if out.len() == count {
                break;
            }
        }
    }
    out
}

/// Powers `h^0 .. h^{l-1}` of an element of exact order `l` in `F_p`.
fn root_table(l: u64, p: u64) -> Vec<u64> {
    let qs = prime_factors(l);
    let h = (2..p)
        .map(|c| powmod(c, (p - 1) / l, p))
        .find(|&h| qs.iter().all(|q| powmod(h, l / q, p) != 1))
        .expect("F_p^* is cyclic");
    let mut table = Vec::with_capacity(l as usize);
    let mut x = 1;
    for _ in 0..l {
        table.push(x);
        x = mulmod(x, h, p);
    }
    table
}

/// `h` with denominators cleared, as `(deg_x, deg_y, coefficient)` triples.
fn integer_terms(h: &MPoly) -> Vec<(u64, u64, BigInt)> {
    let d = common_denominator(h.terms().map(|(_, c)| c));
    h.terms()
        .map(|(m, c)| {
            let e = m.exps();
            (
                u64::from(e[0]),
                u64::from(e[1]),
                (c * Rat::from_integer(d.clone())).to_integer(),
            )
        })
        .collect()
}

struct FieldCurve {
    p: u64,
    terms: Vec<(u64, u64, u64)>,
    table: Vec<u64>,
}

impl FieldCurve {
    fn new(terms: &[(u64, u64, BigInt)], l: u64, p: u64) -> Self {
        let bp = BigInt::from(p);
        let terms = terms
            .iter()
            .map(|(ex, ey, c)| {
                let r = c.mod_floor(&bp).to_u64().expect("reduced mod p");
                (*ex, *ey, r)
            })
            .collect();
        FieldCurve {
            p,
            terms,
            table: root_table(l, p),
        }
    }

    /// `H(zeta_L^u, zeta_L^v)`.
    fn eval(&self, u: u64, v: u64) -> u64 {
        let l = self.table.len() as u64;
        self.terms.iter().fold(0u64, |acc, &(ex, ey, c)| {
            let k = ((u as u128 * ex as u128 + v as u128 * ey as u128) % l as u128) as usize;
            (acc + mulmod(c, self.table[k], self.p)) % self.p
        })
    }
}

fn primitive_indices(a: u64) -> impl Iterator<Item = u64> {
    (0..a).filter(move |i| i.gcd(&a) == 1)
}

struct PairScan {
    points: Vec<TorsionPoint>,
    primes: Vec<u64>,
    warning: Option<String>,
}

fn scan_pair(terms: &[(u64, u64, BigInt)], a: u64, b: u64, cfg: &TorsionScanConfig) -> PairScan {
    let l = a.lcm(&b);
    let primes = primes_one_mod(l, cfg.prime_floor, cfg.prime_count);
    if primes.len() < cfg.prime_count {
        return PairScan {
            points: Vec::new(),
            primes: Vec::new(),
            warning: Some(format!(
                "order pair ({a}, {b}) skipped: fewer than {} primes = 1 mod {l} found",
                cfg.prime_count
            )),
        };
    }
    let (sa, sb) = (l / a, l / b);
    let mut candidates: Vec<(u64, u64)> = primitive_indices(a)
        .flat_map(|i| primitive_indices(b).map(move |j| (i, j)))
        .collect();
    for &p in &primes {
        let field = FieldCurve::new(terms, l, p);
        candidates.retain(|&(i, j)| field.eval(i * sa, j * sb) == 0);
        if candidates.is_empty() {
            break;
        }
    }
    PairScan {
        points: candidates
            .into_iter()
            .map(|(i, j)| TorsionPoint {
                order_x: a,
                order_y: b,
                index_x: i,
                index_y: j,
            })
            .collect(),
        primes,
        warning: None,
    }
}

/// Torsion points of `h` with both orders at most `cfg.max_order`, or the
/// exceptional factor that makes the set infinite.
pub fn count_torsion_points(h: &MPoly, cfg: &TorsionScanConfig) -> Result<TorsionOutcome> {
    if h.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: h.arity(),
        });
    }
    if h.is_zero() {
        return Err(Error::ZeroPolynomial("torsion count"));
    }
    if cfg.max_order == 0 || cfg.prime_count == 0 {
        return Err(Error::invalid(
            "scan bound and prime count must be at least 1",
        ));
    }
    if let Some(ex) = find_exceptional_factor(h)? {
        return Ok(TorsionOutcome::Exceptional(ex));
    }
    let terms = integer_terms(h);
    let b = cfg.max_order;
    let pairs: Vec<(u64, u64)> = (1..=b).flat_map(|x| (1..=b).map(move |y| (x, y))).collect();
    let scans: Vec<PairScan> = pairs
        .par_iter()
        .map(|&(x, y)| scan_pair(&terms, x, y, cfg))
        .collect();
    let mut points = Vec::new();
    let mut primes = Vec::new();
    let mut warnings = Vec::new();
    for s in scans {
        points.extend(s.points);
        primes.extend(s.primes);
        warnings.extend(s.warning);
    }
    points.sort();
    primes.sort_unstable();
    primes.dedup();
    let mut set = TorsionPointSet {
        curve: h.clone(),
        points,
        scan_bound: b,
        primes_used: primes,
        certified: None,
        warnings,
    };
    if cfg.certify {
        certify(&mut set)?;
    }
    Ok(TorsionOutcome::Points(set))
}

/// Symbolic re-check: `gcd(Res_Y(H, Phi_b(Y)), Phi_a(X)) != 1` exactly when
/// some point of orders `(a, b)` lies on the curve.
fn certify(set: &mut TorsionPointSet) -> Result<()> {
    let b = set.scan_bound;
    let by_y: Vec<UPoly> = set
        .curve
        .coefficients_in(1)
        .iter()
        .map(|c| c.to_upoly(0).expect("coefficient in X only"))
        .collect();
    let phis = (1..=b).map(cyclotomic).collect::<Result<Vec<_>>>()?;
    let res: Vec<UPoly> = phis
        .par_iter()
        .map(|phi| resultant(&by_y, &constant_coeffs(phi)))
        .collect::<Result<_>>()?;
    let reported: BTreeMap<(u64, u64), usize> =
        set.points.iter().fold(BTreeMap::new(), |mut m, p| {
            *m.entry((p.order_x, p.order_y)).or_default() += 1;
            m
        });
    let mut ok = true;
    for (ia, phi_a) in phis.iter().enumerate() {
        for (ib, r) in res.iter().enumerate() {
            let key = (ia as u64 + 1, ib as u64 + 1);
            let symbolic = r.is_zero() || !r.gcd(phi_a).is_constant();
            if symbolic != reported.contains_key(&key) {
                ok = false;
                set.warnings.push(format!(
                    "certify: order pair {key:?} symbolic={symbolic} scanned={}",
                    reported.contains_key(&key)
                ));
            }
        }
    }
    set.certified = Some(ok);
    Ok(())
}

/// Re-evaluate every reported point under `extra` further primes.
pub fn spot_check(
    set: &TorsionPointSet,
    prime_count: usize,
    prime_floor: u64,
    extra: usize,
) -> bool {
    let terms = integer_terms(&set.curve);
    let mut fields: HashMap<u64, Vec<FieldCurve>> = HashMap::new();
    set.points.iter().all(|pt| {
        let l = pt.order_x.lcm(&pt.order_y);
        let fs = fields.entry(l).or_insert_with(|| {
            primes_one_mod(l, prime_floor, prime_count + extra)
                .into_iter()
                .skip(prime_count)
                .map(|p| FieldCurve::new(&terms, l, p))
                .collect()
        });
        fs.len() == extra
            && fs
                .iter()
                .all(|f| f.eval(pt.index_x * (l / pt.order_x), pt.index_y * (l / pt.order_y)) == 0)
    })
}

/// `sum_{d <= b} phi(d)`, the degree of `Psi_b`.
pub fn window_degree(b: u64) -> u64 {
    (1..=b).map(euler_phi).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_mpoly, parse_upoly};

    fn u(s: &str) -> UPoly {
        parse_upoly(s).unwrap()
    }

    fn m(s: &str) -> MPoly {
        parse_mpoly(s, Some(2)).unwrap()
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1).unwrap(), u("T - 1"));
        assert_eq!(cyclotomic(6).unwrap(), u("T^2 - T + 1"));
        assert_eq!(cyclotomic(8).unwrap(), u("T^4 + 1"));
        assert!(cyclotomic(0).is_err());
    }

    #[test]
    fn cyclotomic_product_examples() {
        assert!(is_cyclotomic_product(&u("T^2 + T + 1")).unwrap());
        assert!(!is_cyclotomic_product(&u("T^2 - 2")).unwrap());
        assert!(is_cyclotomic_product(&u("(T - 1)^2*(T^2 + 1)")).unwrap());
        assert!(is_cyclotomic_product(&u("0")).is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(torsion_window(2).unwrap(), u("T^2 - 1"));
        assert_eq!(torsion_window(3).unwrap(), u("(T^2 - 1)*(T^2 + T + 1)"));
        assert_eq!(torsion_window(6).unwrap().degree(), Some(12));
        assert_eq!(window_degree(6), 12);
    }

    #[test]
    fn common_zero_examples() {
        assert_eq!(
            common_torsion_zeros(&u("T"), &u("T+1"), 6).unwrap(),
            u("T^2 + T + 1")
        );
        assert_eq!(common_torsion_zeros(&u("T"), &u("T+1"), 2).unwrap(), u("1"));
        assert_eq!(
            common_torsion_zeros(&u("T"), &u("2*T"), 12).unwrap(),
            u("1")
        );
        assert!(common_torsion_zeros(&u("3"), &u("T"), 4).is_err());
    }

    fn points(h: &str, b: u64) -> TorsionPointSet {
        match count_torsion_points(&m(h), &TorsionScanConfig::with_bound(b)).unwrap() {
            TorsionOutcome::Points(s) => s,
            TorsionOutcome::Exceptional(e) => panic!("unexpected exceptional factor {e:?}"),
        }
    }

    #[test]
    fn line_has_two_sixth_root_points() {
        let s = points("X1 + X2 - 1", 12);
        assert_eq!(s.points.len(), 2);
        assert!(s.points.iter().all(|p| p.order_x == 6 && p.order_y == 6));
        assert_eq!((s.points[0].index_x, s.points[0].index_y), (1, 5));
        assert!(spot_check(&s, 3, TorsionScanConfig::DEFAULT_PRIME_FLOOR, 2));
    }

    #[test]
    fn diagonal_is_exceptional() {
        let out = count_torsion_points(&m("X1 - X2"), &TorsionScanConfig::with_bound(12)).unwrap();
        assert!(matches!(out, TorsionOutcome::Exceptional(_)));
        let out =
            count_torsion_points(&m("X1*X2 + 1"), &TorsionScanConfig::with_bound(12)).unwrap();
        assert!(matches!(out, TorsionOutcome::Exceptional(_)));
        // X^2 + XY + Y^2 = Y^2 Phi_3(X/Y), a conjugate pair of lines.
        let out = count_torsion_points(
            &m("X1^2 + X1*X2 + X2^2"),
            &TorsionScanConfig::with_bound(12),
        )
        .unwrap();
        assert!(matches!(out, TorsionOutcome::Exceptional(_)));
    }

    #[test]
    fn hyperbola_off_the_torus() {
        assert!(points("X1*X2 - 2", 12).points.is_empty());
    }

    #[test]
    fn certify_agrees_with_scan() {
        let mut cfg = TorsionScanConfig::with_bound(12);
        cfg.certify = true;
        let TorsionOutcome::Points(s) = count_torsion_points(&m("X1 + X2 - 1"), &cfg).unwrap()
        else {
            panic!()
        };
        assert_eq!(s.certified, Some(true), "{:?}", s.warnings);
    }

    #[test]
    fn miller_rabin() {
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(1));
        let ps = primes_one_mod(12, 1 << 30, 3);
        assert_eq!(ps.len(), 3);
        assert!(ps.iter().all(|p| p % 12 == 1 && is_prime_u64(*p)));
    }
}
