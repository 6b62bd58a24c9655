//! Multivariate-to-univariate reduction: Kronecker substitution,
//! independence-preserving specialization, annihilating relations, the
//! multivariate gcd pipeline and the common-torsion containment check.

mod annihilator;
mod coset;
mod kronecker;
mod multivar;
mod specialize;

pub use annihilator::{annihilator, compose_relation, Annihilator};
pub use coset::{common_torsion_variety_check, CosetBranch, CosetReport, GreedyStep};
pub use kronecker::KroneckerMap;
pub use multivar::{multivar_check, MultivarReport};
pub use specialize::{
    candidate_rationals, candidate_tuples, find_independent_specialization, Specialization,
    DEFAULT_BUDGET,
};
