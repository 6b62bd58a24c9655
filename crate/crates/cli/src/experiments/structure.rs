use arlab_core::gcdlab::{abc_mult_check, mason_stothers_check};
use arlab_core::mulind::{gcd_free_basis, FamilyPoly, Mode, Verdict};
use arlab_core::rat::format_rat;
use arlab_core::resultant::implicitize;
use arlab_core::sample::{abc_instances, coprime_triples};
use arlab_core::torsion::{
    common_torsion_zeros, count_torsion_points, TorsionOutcome, TorsionScanConfig,
};
use clap::{Arg, ArgMatches, Command};
use serde_json::json;

use crate::inputs::*;
use crate::report::Report;
use crate::{Context, Experiment, Failure};

pub struct Independence;

fn independence_of<P: FamilyPoly>(
    report: &mut Report,
    polys: &[P],
    mode: Mode,
) -> Result<(), Failure> {
    let basis = gcd_free_basis(polys)?;
    let verdict = basis.verdict(mode)?;
    let certificate = verdict.certificate();
    report
        .detail(
            "basis",
            basis
                .basis
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
        )
        .detail("exponents", &basis.exponents.entries)
        .detail(
            "units",
            basis.units.iter().map(format_rat).collect::<Vec<_>>(),
        )
        .detail("independent", verdict.is_independent())
        .detail("certificate", certificate)
        .detail("verified", certificate.map(|c| c.verify(polys)));
    for (p, (row, unit)) in polys
        .iter()
        .zip(basis.exponents.entries.iter().zip(&basis.units))
    {
        report
            .record(json!({ "input": p.to_string(), "exponents": row, "unit": format_rat(unit) }));
    }
    if let Verdict::Dependent(c) = &verdict {
        if !c.verify(polys) {
            report.violation("dependence certificate does not re-multiply");
        }
    }
    Ok(())
}

impl Experiment for Independence {
    fn name(&self) -> &'static str {
        "independence"
    }
    fn about(&self) -> &'static str {
        "multiplicative independence with a gcd-free basis and a dependence certificate"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(polys("polys", "polynomials in T, or in X1, X2, ...").required(true))
            .arg(
                Arg::new("mode")
                    .long("mode")
                    .value_parser(["plain", "mod-constants"])
                    .default_value("plain"),
            )
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let mode_text = m.get_one::<String>("mode").expect("has default");
        let mode: Mode = mode_text.parse()?;
        let mut report = Report::new(self.name());
        report.input("mode", mode_text);
        if uses_x(m, &["polys"]) {
            let ps = mpolys(m, &["polys"], None)?.remove(0);
            report.input("polys", echo_ms(&ps));
            independence_of(&mut report, &ps, mode)?;
        } else {
            let ps = upolys(m, "polys")?;
            report.input("polys", echo_us(&ps));
            independence_of(&mut report, &ps, mode)?;
        }
        Ok(report)
    }
}

pub struct TorsionCount;

impl Experiment for TorsionCount {
    fn name(&self) -> &'static str {
        "torsion-count"
    }
    fn about(&self) -> &'static str {
        "torsion points on a plane curve against the 11 deg^2 bound"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(poly("curve", "H(X1, X2)").conflicts_with_all(["f", "g"]))
            .arg(poly("f", "f(T); the curve is the image of (f, g)").requires("g"))
            .arg(poly("g", "g(T)").requires("f"))
            .arg(number(
                "max-order",
                "largest order scanned; default 6 (deg H + 1)^2",
            ))
            .arg(number("primes", "auxiliary primes per order pair").default_value("3"))
            .arg(flag("certify", "re-check every order pair with resultants"))
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let mut report = Report::new(self.name());
        let curve = if m.contains_id("curve") {
            mpolys(m, &["curve"], Some(2))?.remove(0).remove(0)
        } else if m.contains_id("f") {
            let (f, g) = (upoly(m, "f")?, upoly(m, "g")?);
            report.input("f", echo_u(&f)).input("g", echo_u(&g));
            implicitize(&f, &g)?
        } else {
            return Err(Failure::Usage("give --curve or --f and --g".into()));
        };
        report.input("curve", echo_m(&curve));
        let mut cfg = match m.get_one::<u64>("max-order") {
            Some(&b) => TorsionScanConfig::with_bound(b),
            None => TorsionScanConfig::for_curve(&curve),
        };
        cfg.prime_count = required_u64(m, "primes")? as usize;
        cfg.certify = m.get_flag("certify");
        report
            .input("max_order", cfg.max_order)
            .input("primes", cfg.prime_count)
            .input("certify", cfg.certify);
        match count_torsion_points(&curve, &cfg)? {
            TorsionOutcome::Exceptional(e) => {
                report
                    .detail("exceptional", true)
                    .detail("factor", echo_m(&e.factor))
                    .detail("description", &e.description);
            }
            TorsionOutcome::Points(set) => {
                let bound = set.count_bound();
                for p in &set.points {
                    report.record(p);
                }
                report.summary.bound = Some(bound.to_string());
                report
                    .detail("exceptional", false)
                    .detail("count", set.points.len())
                    .detail("primes_used", &set.primes_used)
                    .detail("certified", set.certified)
                    .detail("warnings", &set.warnings);
                if set.points.len() as u64 > bound {
                    report.violation(format!(
                        "{} torsion points exceed {bound}",
                        set.points.len()
                    ));
                }
                if set.certified == Some(false) {
                    report.violation("symbolic re-check disagreed with the scan");
                }
            }
        }
        Ok(report)
    }
}

pub struct TorsionZeros;

impl Experiment for TorsionZeros {
    fn name(&self) -> &'static str {
        "torsion-zeros"
    }
    fn about(&self) -> &'static str {
        "common zeros t with f(t), g(t) roots of unity of order at most the window"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(poly("f", "f(T)").required(true))
            .arg(poly("g", "g(T)").required(true))
            .arg(number("window", "largest order B").required(true))
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let (f, g) = (upoly(m, "f")?, upoly(m, "g")?);
        let window = required_u64(m, "window")?;
        let zeros = common_torsion_zeros(&f, &g, window)?;
        let mut report = Report::new(self.name());
        report
            .input("f", echo_u(&f))
            .input("g", echo_u(&g))
            .input("window", window)
            .detail("zeros", echo_u(&zeros))
            .detail("degree", zeros.degree_or_zero());
        Ok(report)
    }
}

pub struct AbcCheck;

impl Experiment for AbcCheck {
    fn name(&self) -> &'static str {
        "abc-check"
    }
    fn about(&self) -> &'static str {
        "largest root multiplicity of prod f_i^n_i - prod g_j^m_j against sum of degrees"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(polys("fs", "f_1 ... f_k"))
            .arg(polys("gs", "g_1 ... g_s"))
            .arg(numbers("ns", "exponents of the f_i"))
            .arg(numbers("ms", "exponents of the g_j"))
            .arg(
                number("samples", "check this many seeded random instances instead")
                    .conflicts_with_all(["fs", "gs"]),
            )
            .arg(number("max-degree", "sample degree bound").default_value("4"))
            .arg(number("max-exp", "sample exponent bound").default_value("12"))
    }
    fn run(&self, m: &ArgMatches, ctx: &Context) -> Result<Report, Failure> {
        let mut report = Report::new(self.name());
        let cases = if let Some(&count) = m.get_one::<u64>("samples") {
            let deg = required_u64(m, "max-degree")? as usize;
            let exp = required_u64(m, "max-exp")?;
            if deg == 0 || exp == 0 {
                return Err(Failure::Usage(
                    "--max-degree and --max-exp must be positive".into(),
                ));
            }
            report
                .input("samples", count)
                .input("max_degree", deg)
                .input("max_exp", exp)
                .input("seed", ctx.seed);
            abc_instances(count as usize, deg, exp, ctx.seed)
                .into_iter()
                .map(|(f, g, n, e)| (vec![f], vec![g], vec![n], vec![e]))
                .collect()
        } else {
            let (fs, gs) = (upolys(m, "fs")?, upolys(m, "gs")?);
            let (ns, ms) = (u64s(m, "ns"), u64s(m, "ms"));
            report
                .input("fs", echo_us(&fs))
                .input("gs", echo_us(&gs))
                .input("ns", &ns)
                .input("ms", &ms);
            vec![(fs, gs, ns, ms)]
        };
        let mut worst = 0usize;
        for (fs, gs, ns, ms) in &cases {
            let c = abc_mult_check(fs, gs, ns, ms)?;
            worst = worst.max(c.mult);
            report.record(json!({
                "fs": echo_us(fs),
                "gs": echo_us(gs),
                "ns": ns,
                "ms": ms,
                "mult": c.mult,
                "bound": c.bound,
                "ok": c.ok,
            }));
            if !c.ok {
                report.violation(format!(
                    "multiplicity {} exceeds {} for {}",
                    c.mult,
                    c.bound,
                    echo_u(&c.difference)
                ));
            }
        }
        report
            .detail("cases", cases.len())
            .detail("largest_multiplicity", worst);
        Ok(report)
    }
}

pub struct Mason;

impl Experiment for Mason {
    fn name(&self) -> &'static str {
        "mason"
    }
    fn about(&self) -> &'static str {
        "max degree of coprime A + B = C against deg rad(ABC) - 1"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(poly("a", "A(T)").requires_all(["b", "c"]))
            .arg(poly("b", "B(T)"))
            .arg(poly("c", "C(T)"))
            .arg(
                number("samples", "check this many seeded random triples instead")
                    .conflicts_with("a"),
            )
            .arg(number("max-degree", "sample degree bound").default_value("8"))
    }
    fn run(&self, m: &ArgMatches, ctx: &Context) -> Result<Report, Failure> {
        let mut report = Report::new(self.name());
        let triples = if let Some(&count) = m.get_one::<u64>("samples") {
            let deg = required_u64(m, "max-degree")? as usize;
            if deg == 0 {
                return Err(Failure::Usage("--max-degree must be positive".into()));
            }
            report
                .input("samples", count)
                .input("max_degree", deg)
                .input("seed", ctx.seed);
            coprime_triples(count as usize, deg, ctx.seed)
        } else if m.contains_id("a") {
            let t = (upoly(m, "a")?, upoly(m, "b")?, upoly(m, "c")?);
            report
                .input("a", echo_u(&t.0))
                .input("b", echo_u(&t.1))
                .input("c", echo_u(&t.2));
            vec![t]
        } else {
            return Err(Failure::Usage("give --a --b --c or --samples".into()));
        };
        for (a, b, c) in &triples {
            let r = mason_stothers_check(a, b, c)?;
            report.record(json!({
                "a": echo_u(a),
                "b": echo_u(b),
                "c": echo_u(c),
                "max_degree": r.max_degree,
                "radical_degree": r.radical_degree,
                "holds": r.holds,
            }));
            if !r.holds {
                report.violation(format!(
                    "degree {} not below rad degree {}",
                    r.max_degree, r.radical_degree
                ));
            }
        }
        report.detail("cases", triples.len());
        Ok(report)
    }
}
