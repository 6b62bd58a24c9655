//! Argument helpers: polynomial flags, parsing with located errors, and the
//! canonical echo used in reports.

use arlab_core::expr::{parse, print_mpoly, print_upoly, to_mpoly, to_upoly};
use arlab_core::{MPoly, UPoly};
use clap::{Arg, ArgAction, ArgMatches};

use crate::Failure;

/// `--name EXPR`; leading minus signs are allowed in the value.
pub fn poly(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name)
        .long(name)
        .allow_hyphen_values(true)
        .value_name("EXPR")
        .help(help)
}

/// `--name EXPR...`. Values may not start with a hyphen, since that would
/// swallow the next flag; write `(-T + 1)` or `0 - T + 1` instead.
pub fn polys(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name)
        .long(name)
        .value_name("EXPR")
        .help(help)
        .num_args(1..)
        .action(ArgAction::Append)
}

pub fn number(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name)
        .long(name)
        .value_parser(clap::value_parser!(u64))
        .help(help)
}

pub fn numbers(name: &'static str, help: &'static str) -> Arg {
    number(name, help).num_args(1..).action(ArgAction::Append)
}

pub fn flag(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name)
        .long(name)
        .action(ArgAction::SetTrue)
        .help(help)
}

fn texts<'a>(m: &'a ArgMatches, id: &str) -> Vec<&'a String> {
    m.get_many::<String>(id)
        .map(|v| v.collect())
        .unwrap_or_default()
}

fn located(id: &str, text: &str, e: arlab_core::Error) -> Failure {
    Failure::Input {
        context: format!("--{id} '{text}'"),
        source: e,
    }
}

pub fn parse_upoly(id: &str, text: &str) -> Result<UPoly, Failure> {
    parse(text)
        .and_then(|ast| to_upoly(&ast))
        .map_err(|e| located(id, text, e))
}

pub fn upoly(m: &ArgMatches, id: &str) -> Result<UPoly, Failure> {
    let text = m
        .get_one::<String>(id)
        .ok_or_else(|| Failure::Usage(format!("--{id} is required")))?;
    parse_upoly(id, text)
}

pub fn upoly_or(m: &ArgMatches, id: &str, default: &str) -> Result<UPoly, Failure> {
    match m.get_one::<String>(id) {
        Some(t) => parse_upoly(id, t),
        None => parse_upoly(id, default),
    }
}

pub fn upolys(m: &ArgMatches, id: &str) -> Result<Vec<UPoly>, Failure> {
    texts(m, id)
        .into_iter()
        .map(|t| parse_upoly(id, t))
        .collect()
}

/// Parse several flags' polynomials in one common arity (the largest `X`
/// index seen, unless `arity` is given).
pub fn mpolys(
    m: &ArgMatches,
    ids: &[&str],
    arity: Option<usize>,
) -> Result<Vec<Vec<MPoly>>, Failure> {
    let mut asts = Vec::new();
    for id in ids {
        let mut group = Vec::new();
        for t in texts(m, id) {
            group.push((t.clone(), parse(t).map_err(|e| located(id, t, e))?));
        }
        asts.push((*id, group));
    }
    let arity = arity.unwrap_or_else(|| {
        asts.iter()
            .flat_map(|(_, g)| g.iter().map(|(_, a)| a.arity()))
            .max()
            .unwrap_or(1)
    });
    asts.into_iter()
        .map(|(id, group)| {
            group
                .into_iter()
                .map(|(t, a)| to_mpoly(&a, arity).map_err(|e| located(id, &t, e)))
                .collect()
        })
        .collect()
}

pub fn required_u64(m: &ArgMatches, id: &str) -> Result<u64, Failure> {
    m.get_one::<u64>(id)
        .copied()
        .ok_or_else(|| Failure::Usage(format!("--{id} is required")))
}

pub fn u64s(m: &ArgMatches, id: &str) -> Vec<u64> {
    m.get_many::<u64>(id)
        .map(|v| v.copied().collect())
        .unwrap_or_default()
}

pub fn uses_x(m: &ArgMatches, ids: &[&str]) -> bool {
    ids.iter()
        .flat_map(|id| texts(m, id))
        .any(|t| parse(t).is_ok_and(|a| a.max_var_index() > 0))
}

pub fn echo_u(p: &UPoly) -> String {
    print_upoly(p)
}

pub fn echo_us(ps: &[UPoly]) -> Vec<String> {
    ps.iter().map(print_upoly).collect()
}

pub fn echo_m(p: &MPoly) -> String {
    print_mpoly(p)
}

pub fn echo_ms(ps: &[MPoly]) -> Vec<String> {
    ps.iter().map(print_mpoly).collect()
}
