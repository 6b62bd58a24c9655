//! Gcd experiments on powers: sweeps over exponent grids, the accumulated
//! stable divisor, bound checks, root multiplicities, and exceptional-exponent
//! monoids.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{genar1_bound, univar_bound};
use crate::error::{Error, Result};
use crate::mulind::{gcd_free_basis, is_mult_independent, Mode, Verdict};
use crate::rat::{ser_rat, Rat};
use crate::torsion::{common_torsion_zeros, cyclotomic};
use crate::upoly::UPoly;

fn nonconstant(p: &UPoly, what: &'static str) -> Result<()> {
    if p.is_constant() {
        Err(Error::ConstantPolynomial(what))
    } else {
        Ok(())
    }
}

fn degree(p: &UPoly) -> u64 {
    p.degree_or_zero() as u64
}

/// Monic `gcd(f^n - 1, g^m - 1)`.
pub fn ar_gcd(f: &UPoly, g: &UPoly, n: u64, m: u64) -> Result<UPoly> {
    genar1_gcd_unchecked(
        &UPoly::from_ints(&[-1, 1]),
        &UPoly::from_ints(&[-1, 1]),
        f,
        g,
        n,
        m,
    )
}

fn genar1_gcd_unchecked(
    h1: &UPoly,
    h2: &UPoly,
    f: &UPoly,
    g: &UPoly,
    n: u64,
    m: u64,
) -> Result<UPoly> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("exponents must be at least 1"));
    }
    nonconstant(f, "f")?;
    nonconstant(g, "g")?;
    let a = h1.compose(&f.pow(n));
    let b = h2.compose(&g.pow(m));
    Ok(a.gcd(&b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenAr1Result {
    pub gcd: UPoly,
    #[serde(serialize_with = "ser_big")]
    pub bound: BigUint,
    pub within_bound: bool,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
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

/// `gcd(h1(f^n), h2(g^m))` with its degree bound. With `precheck`, `f` and
/// `g` must be independent modulo constants.
pub fn genar1_gcd(
    h1: &UPoly,
    h2: &UPoly,
    f: &UPoly,
    g: &UPoly,
    n: u64,
    m: u64,
    precheck: bool,
) -> Result<GenAr1Result> {
    nonconstant(h1, "h1")?;
    nonconstant(h2, "h2")?;
    nonconstant(f, "f")?;
    nonconstant(g, "g")?;
    if precheck {
        require_independent(&[f.clone(), g.clone()], Mode::ModConstants)?;
    }
    let gcd = genar1_gcd_unchecked(h1, h2, f, g, n, m)?;
    let bound = genar1_bound(degree(h1), degree(h2), degree(f), degree(g))?;
    let within_bound = BigUint::from(degree(&gcd)) <= bound;
    Ok(GenAr1Result {
        gcd,
        bound,
        within_bound,
    })
}

fn require_independent(polys: &[UPoly], mode: Mode) -> Result<()> {
    match is_mult_independent(polys, mode)? {
        Verdict::Independent => Ok(()),
        Verdict::Dependent(c) => Err(Error::Dependent {
            relation: c.relation,
        }),
    }
}

fn product(ps: &[UPoly]) -> UPoly {
    ps.iter().fold(UPoly::one(), |acc, p| &acc * p)
}

fn power_product(ps: &[UPoly], es: &[u64]) -> UPoly {
    ps.iter()
        .zip(es)
        .fold(UPoly::one(), |acc, (p, &e)| &acc * &p.pow(e))
}

/// Data of `gcd(prod f_i^{n_i} - prod phi_i^{nu_i}, prod g_i^{m_i} - prod psi_i^{mu_i})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SUnitFamily {
    pub fs: Vec<UPoly>,
    pub phis: Vec<UPoly>,
    pub gs: Vec<UPoly>,
    pub psis: Vec<UPoly>,
}

impl SUnitFamily {
    pub fn exponent_count(&self) -> usize {
        self.fs.len() + self.phis.len() + self.gs.len() + self.psis.len()
    }

    /// Disjoint zero sets on each side, and plain independence of everything.
    pub fn check_hypotheses(&self) -> Result<()> {
        if self.fs.is_empty() || self.gs.is_empty() {
            return Err(Error::invalid("each side needs at least one polynomial"));
        }
        if !product(&self.fs).gcd(&product(&self.phis)).is_one() {
            return Err(Error::hypothesis("f_i and phi_i share a zero"));
        }
        if !product(&self.gs).gcd(&product(&self.psis)).is_one() {
            return Err(Error::hypothesis("g_i and psi_i share a zero"));
        }
        let all: Vec<UPoly> = [&self.fs, &self.phis, &self.gs, &self.psis]
            .into_iter()
            .flatten()
            .cloned()
            .collect();
        require_independent(&all, Mode::Plain)
    }

    fn sides(&self, exps: &[u64]) -> Result<(UPoly, UPoly)> {
        if exps.len() != self.exponent_count() {
            return Err(Error::invalid(format!(
                "expected {} exponents, got {}",
                self.exponent_count(),
                exps.len()
            )));
        }
        let (a, rest) = exps.split_at(self.fs.len());
        let (b, rest) = rest.split_at(self.phis.len());
        let (c, d) = rest.split_at(self.gs.len());
        let left = &power_product(&self.fs, a) - &power_product(&self.phis, b);
        let right = &power_product(&self.gs, c) - &power_product(&self.psis, d);
        Ok((left, right))
    }

    /// Monic gcd of the two differences; a zero difference is rejected.
    pub fn gcd(&self, exps: &[u64]) -> Result<UPoly> {
        let (left, right) = self.sides(exps)?;
        if left.is_zero() || right.is_zero() {
            return Err(Error::invalid(
                "an exponent choice makes one side identically zero",
            ));
        }
        Ok(left.gcd(&right))
    }

    fn is_ar_shaped(&self) -> bool {
        self.fs.len() == 1 && self.gs.len() == 1 && self.phis.is_empty() && self.psis.is_empty()
    }
}

/// S-unit gcd with hypothesis checks.
pub fn sunit_gcd(family: &SUnitFamily, exps: &[u64]) -> Result<UPoly> {
    family.check_hypotheses()?;
    family.gcd(exps)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Ar {
        f: UPoly,
        g: UPoly,
    },
    GenAr1 {
        h1: UPoly,
        h2: UPoly,
        f: UPoly,
        g: UPoly,
    },
    SUnit(SUnitFamily),
}

impl Family {
    pub fn check_hypotheses(&self) -> Result<()> {
        match self {
            Family::Ar { f, g } => {
                nonconstant(f, "f")?;
                nonconstant(g, "g")?;
                require_independent(&[f.clone(), g.clone()], Mode::Plain)
            }
            Family::GenAr1 { h1, h2, f, g } => {
                nonconstant(h1, "h1")?;
                nonconstant(h2, "h2")?;
                nonconstant(f, "f")?;
                nonconstant(g, "g")?;
                require_independent(&[f.clone(), g.clone()], Mode::ModConstants)
            }
            Family::SUnit(s) => s.check_hypotheses(),
        }
    }

    fn exponent_count(&self) -> usize {
        match self {
            Family::SUnit(s) => s.exponent_count(),
            _ => 2,
        }
    }

    fn min_exponent(&self) -> u64 {
        match self {
            Family::SUnit(_) => 0,
            _ => 1,
        }
    }

    /// `None` when the exponent choice makes a side vanish.
    fn gcd_at(&self, exps: &[u64]) -> Result<Option<UPoly>> {
        match self {
            Family::Ar { f, g } => ar_gcd(f, g, exps[0], exps[1]).map(Some),
            Family::GenAr1 { h1, h2, f, g } => {
                genar1_gcd_unchecked(h1, h2, f, g, exps[0], exps[1]).map(Some)
            }
            Family::SUnit(s) => {
                let (left, right) = s.sides(exps)?;
                if left.is_zero() || right.is_zero() {
                    Ok(None)
                } else {
                    Ok(Some(left.gcd(&right)))
                }
            }
        }
    }

    fn bound(&self) -> Result<Option<BigUint>> {
        match self {
            Family::Ar { f, g } => univar_bound(degree(f), degree(g)).map(Some),
            Family::GenAr1 { h1, h2, f, g } => {
                genar1_bound(degree(h1), degree(h2), degree(f), degree(g)).map(Some)
            }
            Family::SUnit(_) => Ok(None),
        }
    }

    /// `(f, g)` when the family is `gcd(f^n - 1, g^m - 1)` in disguise.
    fn ar_pair(&self) -> Option<(&UPoly, &UPoly)> {
        let t_minus_one = UPoly::from_ints(&[-1, 1]);
        match self {
            Family::Ar { f, g } => Some((f, g)),
            Family::GenAr1 { h1, h2, f, g } if *h1 == t_minus_one && *h2 == t_minus_one => {
                Some((f, g))
            }
            Family::SUnit(s) if s.is_ar_shaped() => Some((&s.fs[0], &s.gs[0])),
            _ => None,
        }
    }

    /// Lexicographic exponent grid `[min, bound]^k`.
    pub fn grid(&self, bound: u64) -> Result<Vec<Vec<u64>>> {
        let k = self.exponent_count() as u32;
        let lo = self.min_exponent();
        if bound < lo {
            return Err(Error::invalid("grid bound is below the smallest exponent"));
        }
        let side = bound - lo + 1;
        let total = side
            .checked_pow(k)
            .filter(|&t| t <= MAX_GRID)
            .ok_or_else(|| Error::DeskScale(format!("grid {side}^{k} is too large")))?;
        Ok((0..total)
            .map(|mut idx| {
                let mut v = vec![0; k as usize];
                for slot in v.iter_mut().rev() {
                    *slot = lo + idx % side;
                    idx /= side;
                }
                v
            })
            .collect())
    }
}

const MAX_GRID: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub exps: Vec<u64>,
    pub gcd: UPoly,
    pub degree: usize,
    pub max_multiplicity: usize,
    #[serde(serialize_with = "ser_opt_big")]
    pub bound: Option<BigUint>,
    pub within_bound: Option<bool>,
}

/// Comparison of the stable divisor with the torsion-window candidate
/// `common_torsion_zeros(f, g, B)^d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionCrossCheck {
    pub window: u64,
    pub multiplicity: u64,
    pub candidate: UPoly,
    /// Largest order of `f(t)` or `g(t)` over the roots `t` of the stable divisor.
    pub observed_max_order: u64,
    pub window_sufficient: bool,
    /// `None` when the window is too small for the comparison to mean anything.
    pub divides: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub family: Family,
    pub grid_bound: u64,
    pub records: Vec<SweepRecord>,
    /// Grid cells where one side vanished identically.
    pub skipped: Vec<Vec<u64>>,
    pub stable_divisor: UPoly,
    /// Where the running lcm last changed, if it then held for the final half.
    pub stabilized_at: Option<Vec<u64>>,
    /// Root-multiplicity cap `min(df, dg)` for the plain two-polynomial case.
    pub multiplicity_cap: Option<u64>,
    pub torsion_check: Option<TorsionCrossCheck>,
}

impl SweepReport {
    /// Human-readable descriptions of every failed check.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.records {
            if r.within_bound == Some(false) {
                out.push(format!("degree {} exceeds bound at {:?}", r.degree, r.exps));
            }
            if let Some(cap) = self.multiplicity_cap {
                if r.max_multiplicity as u64 > cap {
                    out.push(format!(
                        "root multiplicity {} exceeds {cap} at {:?}",
                        r.max_multiplicity, r.exps
                    ));
                }
            }
            if !r.gcd.divides(&self.stable_divisor) {
                out.push(format!(
                    "gcd at {:?} does not divide the stable divisor",
                    r.exps
                ));
            }
        }
        if let Some(t) = &self.torsion_check {
            if t.divides == Some(false) {
                out.push("stable divisor does not divide the torsion candidate".into());
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub grid_bound: u64,
    /// Torsion window for the cross-check; skipped when `None`.
    pub torsion_window: Option<u64>,
    /// Replaces the theorem's bound. Only for exercising violation reporting.
    pub bound_override: Option<BigUint>,
}

impl SweepConfig {
    pub fn new(grid_bound: u64) -> Self {
        SweepConfig {
            grid_bound,
            torsion_window: None,
            bound_override: None,
        }
    }
}

/// Largest multiplicity of a root of `p`; zero for nonzero constants.
pub fn max_multiplicity(p: &UPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("multiplicity"));
    }
    Ok(p.squarefree_decompose()?
        .iter()
        .map(|(_, k)| *k)
        .max()
        .unwrap_or(0))
}

/// Gcd over the whole grid with the running lcm.
pub fn stable_divisor_sweep(family: &Family, cfg: &SweepConfig) -> Result<SweepReport> {
    family.check_hypotheses()?;
    let grid = family.grid(cfg.grid_bound)?;
    let bound = match &cfg.bound_override {
        Some(b) => Some(b.clone()),
        None => family.bound()?,
    };
    let cells: Vec<Option<UPoly>> = grid
        .par_iter()
        .map(|e| family.gcd_at(e))
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut lcm = UPoly::one();
    let mut last_change: Option<usize> = None;
    for (exps, cell) in grid.into_iter().zip(cells) {
        let Some(gcd) = cell else {
            skipped.push(exps);
            continue;
        };
        let next = lcm.lcm(&gcd);
        if next != lcm {
            lcm = next;
            last_change = Some(records.len());
        }
        let deg = gcd.degree_or_zero();
        records.push(SweepRecord {
            within_bound: bound.as_ref().map(|b| BigUint::from(deg) <= *b),
            bound: bound.clone(),
            max_multiplicity: max_multiplicity(&gcd)?,
            degree: deg,
            exps,
            gcd,
        });
    }
    let stabilized_at = match last_change {
        None => records.first().map(|r| r.exps.clone()),
        Some(i) if 2 * i < records.len() => Some(records[i].exps.clone()),
        Some(_) => None,
    };
    let pair = family.ar_pair();
    let multiplicity_cap = pair.map(|(f, g)| degree(f).min(degree(g)));
    let torsion_check = match (pair, cfg.torsion_window) {
        (Some((f, g)), Some(window)) => {
            Some(torsion_cross_check(f, g, &lcm, window, cfg.grid_bound)?)
        }
        _ => None,
    };
    Ok(SweepReport {
        family: family.clone(),
        grid_bound: cfg.grid_bound,
        records,
        skipped,
        stable_divisor: lcm,
        stabilized_at,
        multiplicity_cap,
        torsion_check,
    })
}

/// Largest `a <= max` with `gcd(s, Phi_a(h))` nonconstant.
fn max_order_on(s: &UPoly, h: &UPoly, max: u64) -> Result<u64> {
    let mut best = 0;
    for a in 1..=max {
        if !s.gcd(&cyclotomic(a)?.compose(h)).is_constant() {
            best = a;
        }
    }
    Ok(best)
}

fn torsion_cross_check(
    f: &UPoly,
    g: &UPoly,
    stable: &UPoly,
    window: u64,
    grid_bound: u64,
) -> Result<TorsionCrossCheck> {
    let d = degree(f).min(degree(g));
    let candidate = common_torsion_zeros(f, g, window)?.pow(d);
    // Every root of a swept gcd has f(t)^n = g(t)^m = 1 with n, m <= grid_bound.
    let observed = if stable.is_constant() {
        0
    } else {
        max_order_on(stable, f, grid_bound)?.max(max_order_on(stable, g, grid_bound)?)
    };
    let window_sufficient = window >= observed;
    Ok(TorsionCrossCheck {
        window,
        multiplicity: d,
        divides: window_sufficient.then(|| stable.divides(&candidate)),
        candidate,
        observed_max_order: observed,
        window_sufficient,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbcCheck {
    pub difference: UPoly,
    pub mult: usize,
    pub bound: u64,
    pub ok: bool,
}

/// Largest root multiplicity of `prod f_i^{n_i} - prod g_j^{m_j}` against
/// `sum deg f_i + sum deg g_j`.
pub fn abc_mult_check(fs: &[UPoly], gs: &[UPoly], ns: &[u64], ms: &[u64]) -> Result<AbcCheck> {
    if fs.len() != ns.len() || gs.len() != ms.len() {
        return Err(Error::invalid("one exponent per polynomial is required"));
    }
    if fs.iter().chain(gs).any(UPoly::is_zero) {
        return Err(Error::ZeroPolynomial("abc check"));
    }
    if !product(fs).gcd(&product(gs)).is_one() {
        return Err(Error::hypothesis("the two products share a zero"));
    }
    let difference = &power_product(fs, ns) - &power_product(gs, ms);
    if difference.is_zero() {
        return Err(Error::ZeroPolynomial("abc check (difference)"));
    }
    let mult = max_multiplicity(&difference)?;
    let bound: u64 = fs.iter().chain(gs).map(degree).sum();
    Ok(AbcCheck {
        difference,
        mult,
        bound,
        ok: mult as u64 <= bound,
    })
}

/// Rational-function variant: `prod (f_i / g_i)^{n_i} - 1` has the zeros of
/// `prod f_i^{n_i} - prod g_i^{n_i}`, with bound `sum (deg f_i + deg g_i)`.
pub fn abc_mult_check_rational(fractions: &[(UPoly, UPoly)], ns: &[u64]) -> Result<AbcCheck> {
    let (fs, gs): (Vec<UPoly>, Vec<UPoly>) = fractions.iter().cloned().unzip();
    abc_mult_check(&fs, &gs, ns, ns)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MasonCheck {
    pub max_degree: usize,
    pub radical_degree: usize,
    pub holds: bool,
}

/// `max(deg A, deg B, deg C) <= deg rad(ABC) - 1` for coprime `A + B = C`.
pub fn mason_stothers_check(a: &UPoly, b: &UPoly, c: &UPoly) -> Result<MasonCheck> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::ZeroPolynomial("mason-stothers"));
    }
    if &(a + b) != c {
        return Err(Error::hypothesis("sum mismatch: A + B != C"));
    }
    if !a.gcd(b).is_one() || !a.gcd(c).is_one() || !b.gcd(c).is_one() {
        return Err(Error::hypothesis("A, B, C are not pairwise coprime"));
    }
    if a.is_constant() && b.is_constant() && c.is_constant() {
        return Err(Error::hypothesis("A, B, C are all constant"));
    }
    let max_degree = [a, b, c]
        .iter()
        .map(|p| p.degree_or_zero())
        .max()
        .unwrap_or(0);
    let radical_degree = (&(a * b) * c).radical()?.degree_or_zero();
    Ok(MasonCheck {
        max_degree,
        radical_degree,
        holds: max_degree < radical_degree,
    })
}

/// Exponent tuples whose gcd is divisible by one basis factor of the stable
/// divisor, with the closure check on pairs of members.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonoidRecord {
    pub zero: UPoly,
    pub members: Vec<Vec<u64>>,
    pub pairs_checked: usize,
    pub closure_failures: Vec<(Vec<u64>, Vec<u64>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    /// Share of grid cells (box `[min, bound]^k`) with gcd 1.
    #[serde(serialize_with = "ser_rat")]
    pub density: Rat,
    pub coprime_cells: usize,
    pub total_cells: usize,
    pub monoids: Vec<MonoidRecord>,
}

/// Pairs of members examined exhaustively up to this count, sampled beyond.
const CLOSURE_PAIR_LIMIT: usize = 10_000;

/// Density of coprime cells on the grid and the monoids of exceptional cells.
pub fn coprimality_density(family: &Family, grid_bound: u64, seed: u64) -> Result<DensityReport> {
    let (fs, gs) = match family {
        Family::Ar { f, g } => (vec![f.clone()], vec![g.clone()]),
        Family::SUnit(s) => (s.fs.clone(), s.gs.clone()),
        Family::GenAr1 { .. } => {
            return Err(Error::invalid(
                "density is defined for the two-power and S-unit families",
            ))
        }
    };
    let one = UPoly::one();
    if !(&product(&fs) - &one).gcd(&(&product(&gs) - &one)).is_one() {
        return Err(Error::hypothesis("gcd(prod f_i - 1, prod g_i - 1) != 1"));
    }
    let sweep = stable_divisor_sweep(family, &SweepConfig::new(grid_bound))?;
    let total_cells = sweep.records.len();
    let coprime_cells = sweep.records.iter().filter(|r| r.gcd.is_one()).count();
    let density = if total_cells == 0 {
        Rat::zero()
    } else {
        Rat::new(coprime_cells.into(), total_cells.into())
    };

    let nontrivial: Vec<UPoly> = sweep
        .records
        .iter()
        .filter(|r| !r.gcd.is_one())
        .map(|r| r.gcd.clone())
        .collect();
    let basis = if nontrivial.is_empty() {
        Vec::new()
    } else {
        gcd_free_basis(&nontrivial)?.basis
    };
    let in_grid = |v: &[u64]| v.iter().all(|&x| x <= grid_bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut monoids = Vec::with_capacity(basis.len());
    for zero in basis {
        let members: Vec<Vec<u64>> = sweep
            .records
            .iter()
            .filter(|r| zero.divides(&r.gcd))
            .map(|r| r.exps.clone())
            .collect();
        let n = members.len();
        let pairs: Vec<(usize, usize)> = if n * n <= CLOSURE_PAIR_LIMIT {
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
        } else {
            sample(&mut rng, n * n, CLOSURE_PAIR_LIMIT)
                .into_iter()
                .map(|k| (k / n, k % n))
                .collect()
        };
        let mut closure_failures = Vec::new();
        for &(i, j) in &pairs {
            let sum: Vec<u64> = members[i]
                .iter()
                .zip(&members[j])
                .map(|(a, b)| a + b)
                .collect();
            if in_grid(&sum) && members.binary_search(&sum).is_err() {
                closure_failures.push((members[i].clone(), members[j].clone()));
            }
        }
        monoids.push(MonoidRecord {
            zero,
            members,
            pairs_checked: pairs.len(),
            closure_failures,
        });
    }
    Ok(DensityReport {
        density,
        coprime_cells,
        total_cells,
        monoids,
    })
}
