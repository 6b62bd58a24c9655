//! The subcommand registry.

mod bounds;
mod reduction;
mod structure;
mod sweep;

use crate::Experiment;

static REGISTRY: &[&dyn Experiment] = &[
    &sweep::GcdSweep,
    &sweep::GenAr1,
    &sweep::SUnitGcd,
    &structure::Independence,
    &structure::TorsionCount,
    &structure::TorsionZeros,
    &structure::AbcCheck,
    &structure::Mason,
    &reduction::Kronecker,
    &reduction::Specialize,
    &reduction::MultivarCheck,
    &reduction::Annihilate,
    &reduction::CosetCheck,
    &bounds::Bounds,
    &sweep::Density,
];

pub fn registry() -> &'static [&'static dyn Experiment] {
    REGISTRY
}

pub fn lookup(name: &str) -> Option<&'static dyn Experiment> {
    REGISTRY.iter().copied().find(|e| e.name() == name)
}
