//! `arlab`: experiment runner over `arlab-core`.
//!
//! Each subcommand is an [`Experiment`] registered in
//! [`experiments::registry`]. A run parses arguments, executes inside a
//! dedicated thread pool, and emits a versioned report.
//!
//! Exit codes: 0 success, 1 malformed input, 2 failed hypothesis,
//! 3 bound violation, 4 resource or search limit reached.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Arg, ArgMatches, Command};

pub mod experiments;
pub mod inputs;
pub mod report;

use report::{Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

/// Shared settings visible to every experiment.
#[derive(Clone, Debug)]
pub struct Context {
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Core(#[from] arlab_core::Error),
    #[error("{context}: {source}")]
    Input {
        context: String,
        source: arlab_core::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        use arlab_core::Error as E;
        let core = match self {
            Failure::Usage(_) => return EXIT_INPUT,
            Failure::Core(e) | Failure::Input { source: e, .. } => e,
        };
        match core {
            e if e.is_hypothesis_failure() => EXIT_HYPOTHESIS,
            E::DeskScale(_)
            | E::BudgetExhausted { .. }
            | E::UnfactoredUnit(_)
            | E::Degenerate(_) => EXIT_LIMIT,
            _ => EXIT_INPUT,
        }
    }
}

pub trait Experiment: Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    /// Add the experiment's own arguments.
    fn configure(&self, cmd: Command) -> Command;
    fn run(&self, m: &ArgMatches, ctx: &Context) -> Result<Report, Failure>;
}

pub fn command() -> Command {
    let mut cmd = Command::new("arlab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Exact experiments on gcds of polynomial powers")
        .subcommand_required(true)
        .arg(
            Arg::new("output")
                .long("output")
                .short('o')
                .global(true)
                .value_parser(clap::value_parser!(PathBuf))
                .help("Write the report here instead of stdout"),
        )
        .arg(
            Arg::new("format")
                .long("format")
                .global(true)
                .value_parser(clap::value_parser!(Format))
                .default_value("json"),
        )
        .arg(
            Arg::new("workers")
                .long("workers")
                .global(true)
                .value_parser(clap::value_parser!(usize))
                .help("Worker threads (default: all cores; ARLAB_WORKERS overrides)"),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .global(true)
                .value_parser(clap::value_parser!(u64))
                .default_value("0"),
        );
    for e in experiments::registry() {
        let sub = Command::new(e.name()).about(e.about());
        cmd = cmd.subcommand(e.configure(sub));
    }
    cmd
}

/// Result of a run: the exit code, the rendered report (if any) and a
/// message for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<String>,
    pub message: Option<String>,
}

fn worker_count(m: &ArgMatches) -> Result<usize, Failure> {
    if let Ok(v) = std::env::var("ARLAB_WORKERS") {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::Usage(format!(
                "ARLAB_WORKERS must be a positive integer, got '{v}'"
            ))),
        };
    }
    match m.get_one::<usize>("workers") {
        Some(0) => Err(Failure::Usage("--workers must be positive".into())),
        Some(&n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Parse `argv` and run the selected experiment without touching stdout.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_INPUT,
            };
            return Outcome {
                code,
                report: None,
                message: Some(e.render().to_string()),
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let experiment = experiments::lookup(name).expect("clap only accepts registered names");
    let format = *sub.get_one::<Format>("format").expect("has default");
    let fail = |f: Failure| Outcome {
        code: f.exit_code(),
        report: None,
        message: Some(format!("error: {f}")),
    };
    let workers = match worker_count(sub) {
        Ok(n) => n,
        Err(f) => return fail(f),
    };
    let ctx = Context {
        seed: *sub.get_one::<u64>("seed").expect("has default"),
        workers,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            return fail(Failure::Usage(format!(
                "cannot start {workers} workers: {e}"
            )))
        }
    };
    match pool.install(|| experiment.run(sub, &ctx)) {
        Ok(report) => {
            let violations = report.summary.violations.len();
            Outcome {
                code: if violations == 0 {
                    EXIT_OK
                } else {
                    EXIT_VIOLATION
                },
                report: Some(report.render(format)),
                message: (violations > 0)
                    .then(|| format!("bound violation: {}", report.summary.violations.join("; "))),
            }
        }
        Err(f) => fail(f),
    }
}

/// Entry point used by the binary: runs, writes the report, returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let output = command().try_get_matches_from(&argv).ok().and_then(|m| {
        m.subcommand()
            .and_then(|(_, s)| s.get_one::<PathBuf>("output").cloned())
    });
    let outcome = execute(&argv);
    if let Some(msg) = &outcome.message {
        if outcome.code == EXIT_OK {
            print!("{msg}");
        } else {
            eprintln!("{}", msg.trim_end());
        }
    }
    if let Some(text) = &outcome.report {
        if let Err(e) = report::write_output(text, output.as_deref()) {
            eprintln!("error: cannot write report: {e}");
            return EXIT_INPUT;
        }
    }
    outcome.code
}
