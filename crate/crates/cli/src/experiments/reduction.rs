use arlab_core::mulind::{normalize_at_origin, Mode};
use arlab_core::reduce::{
    annihilator, common_torsion_variety_check, compose_relation, find_independent_specialization,
    multivar_check, KroneckerMap, DEFAULT_BUDGET,
};
use arlab_core::MPoly;
use clap::{Arg, ArgMatches, Command};
use serde_json::json;

use crate::inputs::*;
use crate::report::Report;
use crate::{Context, Experiment, Failure};

fn mode_arg(default: &'static str) -> Arg {
    Arg::new("mode")
        .long("mode")
        .value_parser(["plain", "mod-constants"])
        .default_value(default)
}

fn max_total_degree(fs: &[MPoly]) -> u32 {
    fs.iter().filter_map(MPoly::total_degree).max().unwrap_or(0)
}

pub struct Kronecker;

impl Experiment for Kronecker {
    fn name(&self) -> &'static str {
        "kronecker"
    }
    fn about(&self) -> &'static str {
        "apply X_i -> X_i + X1^(d^(i-1)) or its inverse"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(poly("poly", "F(X1, ..., Xl)").required(true))
            .arg(number("d", "Kronecker parameter, at least 2").required(true))
            .arg(number(
                "arity",
                "number of variables; default the largest index used",
            ))
            .arg(flag("backward", "apply the inverse map"))
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let arity = m.get_one::<u64>("arity").map(|&a| a as usize);
        let f = mpolys(m, &["poly"], arity)?.remove(0).remove(0);
        let d = u32::try_from(required_u64(m, "d")?)
            .map_err(|_| Failure::Usage("--d does not fit in 32 bits".into()))?;
        let map = KroneckerMap::new(f.arity(), d)?;
        let backward = m.get_flag("backward");
        let image = if backward {
            map.backward(&f)?
        } else {
            map.forward(&f)?
        };
        let mut report = Report::new(self.name());
        report
            .input("poly", echo_m(&f))
            .input("d", d)
            .input("arity", f.arity())
            .input("backward", backward)
            .detail("image", echo_m(&image))
            .detail("total_degree", image.total_degree());
        Ok(report)
    }
}

pub struct Specialize;

impl Experiment for Specialize {
    fn name(&self) -> &'static str {
        "specialize"
    }
    fn about(&self) -> &'static str {
        "first (alpha_2, ..., alpha_l) keeping F_i(T, alpha) independent"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(polys("polys", "F_1 ... F_k in X1, ..., Xl").required(true))
            .arg(number("budget", "candidates to try").default_value("1000"))
            .arg(mode_arg("mod-constants"))
            .arg(flag("tilde", "normalize each F to F / F(0) first"))
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let mut fs = mpolys(m, &["polys"], None)?.remove(0);
        let budget = required_u64(m, "budget")? as usize;
        let mode_text = m.get_one::<String>("mode").expect("has default");
        let tilde = m.get_flag("tilde");
        let mut report = Report::new(self.name());
        report
            .input("polys", echo_ms(&fs))
            .input("budget", budget)
            .input("mode", mode_text)
            .input("tilde", tilde);
        if tilde {
            fs = fs.iter().map(normalize_at_origin).collect();
        }
        let s = find_independent_specialization(&fs, budget, mode_text.parse::<Mode>()?)?;
        report
            .detail(
                "alphas",
                s.alphas
                    .iter()
                    .map(arlab_core::rat::format_rat)
                    .collect::<Vec<_>>(),
            )
            .detail("specialized", echo_us(&s.specialized))
            .detail("tried", s.tried);
        Ok(report)
    }
}

pub struct MultivarCheck;

impl Experiment for MultivarCheck {
    fn name(&self) -> &'static str {
        "multivar-check"
    }
    fn about(&self) -> &'static str {
        "multivariate gcd(h1(F^n), h2(G^m)) through Kronecker and specialization"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(poly("h1", "h1(T); default T - 1"))
            .arg(poly("h2", "h2(T); default T - 1"))
            .arg(poly("f", "F(X1, ..., Xl)").required(true))
            .arg(poly("g", "G(X1, ..., Xl)").required(true))
            .arg(number("n", "exponent of F").required(true))
            .arg(number("m", "exponent of G").required(true))
            .arg(number("budget", "specialization candidates to try").default_value("1000"))
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let (h1, h2) = (upoly_or(m, "h1", "T - 1")?, upoly_or(m, "h2", "T - 1")?);
        let mut groups = mpolys(m, &["f", "g"], None)?;
        let (g, f) = (groups.remove(1).remove(0), groups.remove(0).remove(0));
        let (n, e) = (required_u64(m, "n")?, required_u64(m, "m")?);
        let budget = m
            .get_one::<u64>("budget")
            .map_or(DEFAULT_BUDGET, |&b| b as usize);
        let mut report = Report::new(self.name());
        report
            .input("h1", echo_u(&h1))
            .input("h2", echo_u(&h2))
            .input("f", echo_m(&f))
            .input("g", echo_m(&g))
            .input("n", n)
            .input("m", e)
            .input("budget", budget);
        let r = multivar_check(&h1, &h2, &f, &g, n, e, budget)?;
        report.summary.bound = Some(r.bound.to_string());
        if !r.chain_holds {
            report.violation(format!(
                "degree chain broken: direct {:?}, transformed {:?}, univariate {}, bound {}",
                r.direct_degree, r.transformed_degree, r.univariate_degree, r.bound
            ));
        }
        report.record(&r);
        Ok(report)
    }
}

pub struct Annihilate;

impl Experiment for Annihilate {
    fn name(&self) -> &'static str {
        "annihilate"
    }
    fn about(&self) -> &'static str {
        "nonzero R with R(F_1, ..., F_{l+1}) = 0 of least leading monomial"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(polys("polys", "F_1 ... F_{l+1} in X1, ..., Xl").required(true))
            .arg(number("deg-cap", "largest degree of R; default D^l"))
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let fs = mpolys(m, &["polys"], None)?.remove(0);
        let arity = fs.first().map_or(0, MPoly::arity);
        let d = u64::from(max_total_degree(&fs));
        let guaranteed = d.checked_pow(arity as u32).unwrap_or(u64::MAX);
        let cap = m.get_one::<u64>("deg-cap").copied().unwrap_or(guaranteed);
        let cap32 = u32::try_from(cap)
            .map_err(|_| Failure::Usage(format!("degree cap {cap} is too large")))?;
        let mut report = Report::new(self.name());
        report.input("polys", echo_ms(&fs)).input("deg_cap", cap);
        report.summary.bound = Some(guaranteed.to_string());
        match annihilator(&fs, cap32)? {
            Some(a) => {
                let vanishes = compose_relation(&a.relation, &fs)?.is_zero();
                report
                    .detail("relation", echo_m(&a.relation))
                    .detail("degree", a.degree)
                    .detail("system", json!([a.system_rows, a.system_cols]))
                    .detail("vanishes", vanishes);
                if !vanishes {
                    report.violation("relation does not vanish on the inputs");
                }
                if u64::from(a.degree) > guaranteed {
                    report.violation(format!("degree {} exceeds {guaranteed}", a.degree));
                }
            }
            None => {
                report.detail("relation", None::<String>);
                if cap >= guaranteed {
                    report.violation(format!("no relation of degree <= {cap}"));
                }
            }
        }
        Ok(report)
    }
}

pub struct CosetCheck;

impl Experiment for CosetCheck {
    fn name(&self) -> &'static str {
        "coset-check"
    }
    fn about(&self) -> &'static str {
        "common torsion points of F_1, ..., F_{l+1} against relations prod F_i^b_i = 1"
    }
    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(polys("polys", "F_1 ... F_{l+1} in X1 (, X2)").required(true))
            .arg(number("n-cap", "largest root-of-unity order").required(true))
            .arg(number("b-cap", "largest |b_i| searched").required(true))
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let fs = mpolys(m, &["polys"], None)?.remove(0);
        let (n_cap, b_cap) = (required_u64(m, "n-cap")?, required_u64(m, "b-cap")?);
        let mut report = Report::new(self.name());
        report
            .input("polys", echo_ms(&fs))
            .input("n_cap", n_cap)
            .input("b_cap", b_cap);
        let r = common_torsion_variety_check(&fs, n_cap, b_cap)?;
        for b in &r.branches {
            report.record(json!({
                "base": echo_u(&b.base),
                "fiber": b.fiber.as_ref().map(echo_m),
                "points": b.points,
            }));
        }
        report.summary.bound = r.degree_bound.as_ref().map(ToString::to_string);
        report
            .detail("point_count", r.point_count)
            .detail("relations_tested", r.relations_tested)
            .detail("covering", &r.covering)
            .detail("greedy", &r.greedy)
            .detail("uncovered", r.uncovered)
            .detail("all_covered", r.all_covered);
        Ok(report)
    }
}
