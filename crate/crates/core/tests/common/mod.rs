#![allow(dead_code)]

use arlab_core::mpoly::MPoly;
use arlab_core::rat::{rat, Rat};
use arlab_core::upoly::UPoly;
use proptest::prelude::*;

pub fn upoly(max_deg: usize, range: i64) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(-range..=range, 1..=max_deg + 1).prop_map(|c| UPoly::from_ints(&c))
}

pub fn nonzero_upoly(max_deg: usize, range: i64) -> impl Strategy<Value = UPoly> {
    upoly(max_deg, range).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn nonconstant_upoly(max_deg: usize, range: i64) -> impl Strategy<Value = UPoly> {
    upoly(max_deg, range).prop_filter("nonconstant", |p| !p.is_constant())
}

pub fn rational(range: i64) -> impl Strategy<Value = Rat> {
    (-range..=range, 1..=range).prop_map(|(n, d)| rat(n, d))
}

pub fn rat_upoly(max_deg: usize, range: i64) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(rational(range), 1..=max_deg + 1).prop_map(UPoly::from_coeffs)
}

/// Sparse polynomial in `arity` variables, each exponent at most `max_exp`.
pub fn mpoly(
    arity: usize,
    max_exp: u32,
    max_terms: usize,
    range: i64,
) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, arity), rational(range)),
        1..=max_terms,
    )
    .prop_map(move |terms| MPoly::from_terms(arity, terms))
}

pub fn nonconstant_mpoly(
    arity: usize,
    max_exp: u32,
    max_terms: usize,
    range: i64,
) -> impl Strategy<Value = MPoly> {
    mpoly(arity, max_exp, max_terms, range).prop_filter("nonconstant", |p| !p.is_constant())
}
