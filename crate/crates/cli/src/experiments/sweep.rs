use arlab_core::gcdlab::{
    coprimality_density, genar1_gcd, stable_divisor_sweep, sunit_gcd, Family, SUnitFamily,
    SweepConfig, SweepReport,
};
use clap::{Arg, ArgMatches, Command};
use num_bigint::BigUint;
use serde_json::json;

use crate::inputs::*;
use crate::report::Report;
use crate::{Context, Experiment, Failure};

fn bound_override(m: &ArgMatches) -> Result<Option<BigUint>, Failure> {
    m.get_one::<String>("bound-override")
        .map(|s| {
            s.parse::<BigUint>().map_err(|_| {
                Failure::Usage(format!("--bound-override expects an integer, got '{s}'"))
            })
        })
        .transpose()
}

/// Test hook: replace the degree bound to exercise violation reporting.
fn bound_override_arg() -> Arg {
    Arg::new("bound-override").long("bound-override").hide(true)
}

fn sweep_summary(report: &mut Report, sweep: &SweepReport) {
    for r in &sweep.records {
        report.record(r);
    }
    report.summary.stable_divisor = Some(echo_u(&sweep.stable_divisor));
    report.summary.bound = sweep
        .records
        .first()
        .and_then(|r| r.bound.as_ref())
        .map(|b| b.to_string());
    report.summary.violations = sweep.violations();
    report
        .detail("stabilized_at", &sweep.stabilized_at)
        .detail("multiplicity_cap", sweep.multiplicity_cap)
        .detail("skipped", &sweep.skipped)
        .detail("records", sweep.records.len());
    if let Some(t) = &sweep.torsion_check {
        report.detail("torsion_check", t);
    }
}

fn sunit_args(cmd: Command) -> Command {
    cmd.arg(polys("fs", "f_1 ... f_k"))
        .arg(polys("phis", "phi_1 ... phi_r"))
        .arg(polys("gs", "g_1 ... g_s"))
        .arg(polys("psis", "psi_1 ... psi_t"))
}

fn sunit_family(m: &ArgMatches) -> Result<SUnitFamily, Failure> {
    Ok(SUnitFamily {
        fs: upolys(m, "fs")?,
        phis: upolys(m, "phis")?,
        gs: upolys(m, "gs")?,
        psis: upolys(m, "psis")?,
    })
}

fn echo_sunit(report: &mut Report, s: &SUnitFamily) {
    report
        .input("fs", echo_us(&s.fs))
        .input("phis", echo_us(&s.phis))
        .input("gs", echo_us(&s.gs))
        .input("psis", echo_us(&s.psis));
}

pub struct GcdSweep;

impl Experiment for GcdSweep {
    fn name(&self) -> &'static str {
        "gcd-sweep"
    }
    fn about(&self) -> &'static str {
        "gcd(h1(f^n), h2(g^m)) over the grid n, m <= max, with the running lcm"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(poly("f", "f(T)").required(true))
            .arg(poly("g", "g(T)").required(true))
            .arg(poly("h1", "h1(T); default T - 1"))
            .arg(poly("h2", "h2(T); default T - 1"))
            .arg(number("max", "grid bound").required(true))
            .arg(number(
                "torsion-window",
                "window B for the torsion cross-check",
            ))
            .arg(bound_override_arg())
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let (f, g) = (upoly(m, "f")?, upoly(m, "g")?);
        let max = required_u64(m, "max")?;
        let mut report = Report::new(self.name());
        report.input("f", echo_u(&f)).input("g", echo_u(&g));
        let family = if m.contains_id("h1") || m.contains_id("h2") {
            let h1 = upoly_or(m, "h1", "T - 1")?;
            let h2 = upoly_or(m, "h2", "T - 1")?;
            report.input("h1", echo_u(&h1)).input("h2", echo_u(&h2));
            Family::GenAr1 { h1, h2, f, g }
        } else {
            Family::Ar { f, g }
        };
        let cfg = SweepConfig {
            grid_bound: max,
            torsion_window: m.get_one::<u64>("torsion-window").copied(),
            bound_override: bound_override(m)?,
        };
        report
            .input("max", max)
            .input("torsion_window", cfg.torsion_window);
        let sweep = stable_divisor_sweep(&family, &cfg)?;
        sweep_summary(&mut report, &sweep);
        Ok(report)
    }
}

pub struct GenAr1;

impl Experiment for GenAr1 {
    fn name(&self) -> &'static str {
        "genar1"
    }
    fn about(&self) -> &'static str {
        "one gcd(h1(f^n), h2(g^m)) against its degree bound"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(poly("h1", "h1(T)").required(true))
            .arg(poly("h2", "h2(T)").required(true))
            .arg(poly("f", "f(T)").required(true))
            .arg(poly("g", "g(T)").required(true))
            .arg(number("n", "exponent of f").required(true))
            .arg(number("m", "exponent of g").required(true))
            .arg(flag("no-precheck", "skip the independence check"))
            .arg(bound_override_arg())
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let (h1, h2) = (upoly(m, "h1")?, upoly(m, "h2")?);
        let (f, g) = (upoly(m, "f")?, upoly(m, "g")?);
        let (n, e) = (required_u64(m, "n")?, required_u64(m, "m")?);
        let precheck = !m.get_flag("no-precheck");
        let mut report = Report::new(self.name());
        report
            .input("h1", echo_u(&h1))
            .input("h2", echo_u(&h2))
            .input("f", echo_u(&f))
            .input("g", echo_u(&g))
            .input("n", n)
            .input("m", e)
            .input("precheck", precheck);
        let mut r = genar1_gcd(&h1, &h2, &f, &g, n, e, precheck)?;
        if let Some(b) = bound_override(m)? {
            r.within_bound = BigUint::from(r.gcd.degree_or_zero()) <= b;
            r.bound = b;
        }
        let degree = r.gcd.degree_or_zero();
        report.record(json!({
            "n": n,
            "m": e,
            "gcd": echo_u(&r.gcd),
            "degree": degree,
            "bound": r.bound.to_string(),
            "within_bound": r.within_bound,
        }));
        report.summary.bound = Some(r.bound.to_string());
        if !r.within_bound {
            report.violation(format!("degree {degree} exceeds bound {}", r.bound));
        }
        Ok(report)
    }
}

pub struct SUnitGcd;

impl Experiment for SUnitGcd {
    fn name(&self) -> &'static str {
        "sunit-gcd"
    }
    fn about(&self) -> &'static str {
        "gcd(prod f_i^a_i - prod phi_i^b_i, prod g_i^c_i - prod psi_i^d_i) at one tuple or over a grid"
    }
    fn configure(&self, cmd: Command) -> Command {
        sunit_args(cmd)
            .arg(numbers(
                "exps",
                "one exponent per polynomial, in the order fs, phis, gs, psis",
            ))
            .arg(number("max", "sweep every tuple in [0, max]^k instead").conflicts_with("exps"))
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let family = sunit_family(m)?;
        let mut report = Report::new(self.name());
        echo_sunit(&mut report, &family);
        if let Some(&max) = m.get_one::<u64>("max") {
            report.input("max", max);
            let sweep = stable_divisor_sweep(&Family::SUnit(family), &SweepConfig::new(max))?;
            sweep_summary(&mut report, &sweep);
            return Ok(report);
        }
        let exps = u64s(m, "exps");
        if exps.is_empty() {
            return Err(Failure::Usage("give --exps or --max".into()));
        }
        report.input("exps", &exps);
        let gcd = sunit_gcd(&family, &exps)?;
        report.record(json!({
            "exps": exps,
            "gcd": echo_u(&gcd),
            "degree": gcd.degree_or_zero(),
        }));
        Ok(report)
    }
}

pub struct Density;

impl Experiment for Density {
    fn name(&self) -> &'static str {
        "density"
    }
    fn about(&self) -> &'static str {
        "share of coprime cells on the cubical grid and the exceptional monoids"
    }
    fn configure(&self, cmd: Command) -> Command {
        sunit_args(cmd)
            .arg(poly("f", "f(T) for the two-power family"))
            .arg(poly("g", "g(T) for the two-power family"))
            .arg(number("max", "grid bound").required(true))
    }
    fn run(&self, m: &ArgMatches, ctx: &Context) -> Result<Report, Failure> {
        let max = required_u64(m, "max")?;
        let mut report = Report::new(self.name());
        let family = if m.contains_id("f") || m.contains_id("g") {
            let (f, g) = (upoly(m, "f")?, upoly(m, "g")?);
            report.input("f", echo_u(&f)).input("g", echo_u(&g));
            Family::Ar { f, g }
        } else {
            let s = sunit_family(m)?;
            echo_sunit(&mut report, &s);
            Family::SUnit(s)
        };
        report.input("max", max).input("seed", ctx.seed);
        let d = coprimality_density(&family, max, ctx.seed)?;
        for monoid in &d.monoids {
            report.record(json!({
                "zero": echo_u(&monoid.zero),
                "members": monoid.members.len(),
                "pairs_checked": monoid.pairs_checked,
                "closure_failures": monoid.closure_failures,
            }));
            for (a, b) in &monoid.closure_failures {
                report.violation(format!(
                    "monoid of {} not closed: {a:?} + {b:?}",
                    echo_u(&monoid.zero)
                ));
            }
        }
        report
            .detail("density", arlab_core::rat::format_rat(&d.density))
            .detail("coprime_cells", d.coprime_cells)
            .detail("total_cells", d.total_cells)
            .detail("grid", "cubical");
        Ok(report)
    }
}
