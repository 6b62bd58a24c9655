use std::collections::BTreeSet;

use arlab_core::bounds::{self, BoundParams};
use clap::{Arg, ArgMatches, Command};
use serde_json::json;

use crate::inputs::number;
use crate::report::Report;
use crate::{Context, Experiment, Failure};

pub struct Bounds;

fn param_names() -> BTreeSet<&'static str> {
    bounds::registry()
        .iter()
        .flat_map(|f| f.params().iter().copied())
        .collect()
}

impl Experiment for Bounds {
    fn name(&self) -> &'static str {
        "bounds"
    }
    fn about(&self) -> &'static str {
        "evaluate a named degree or count bound"
    }
    fn configure(&self, cmd: Command) -> Command {
        let names: Vec<&'static str> = bounds::registry().iter().map(|f| f.name()).collect();
        let mut cmd = cmd
            .arg(
                Arg::new("theorem")
                    .long("theorem")
                    .value_parser(names)
                    .required_unless_present("list"),
            )
            .arg(crate::inputs::flag(
                "list",
                "list the known bounds and their parameters",
            ));
        for p in param_names() {
            cmd = cmd.arg(number(p, "bound parameter"));
        }
        cmd
    }
    fn run(&self, m: &ArgMatches, _: &Context) -> Result<Report, Failure> {
        let mut report = Report::new(self.name());
        if m.get_flag("list") {
            for f in bounds::registry() {
                report.record(
                    json!({ "name": f.name(), "summary": f.summary(), "params": f.params() }),
                );
            }
            return Ok(report);
        }
        let name = m
            .get_one::<String>("theorem")
            .expect("required unless --list");
        let params: BoundParams = param_names()
            .into_iter()
            .filter_map(|p| m.get_one::<u64>(p).map(|&v| (p.to_string(), v)))
            .collect();
        report.input("theorem", name).input("params", &params);
        let r = bounds::evaluate(name, &params)?;
        report.summary.bound = Some(r.value.to_string());
        report
            .detail("exact", r.exact)
            .detail("intermediates", &r.intermediates)
            .detail("warnings", &r.warnings);
        Ok(report)
    }
}
