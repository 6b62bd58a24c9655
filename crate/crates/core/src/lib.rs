//! Exact computer algebra for gcd-degree bounds of polynomial powers.
//!
//! The crate covers univariate and multivariate polynomial arithmetic over Q,
//! multiplicative-independence certificates, torsion points on plane curves,
//! gcd sweeps over exponent grids, and the multivariate-to-univariate
//! reduction machinery (Kronecker substitution, specialization, annihilating
//! polynomials, and the closed-form bound formulas).

pub mod bounds;
pub mod error;
pub mod expr;
pub mod gcdlab;
pub mod linalg;
pub mod mpoly;
pub mod mulind;
pub mod rat;
pub mod reduce;
pub mod resultant;
pub mod sample;
pub mod torsion;
pub mod upoly;

pub use error::{Error, Result};
pub use mpoly::MPoly;
pub use rat::Rat;
pub use upoly::UPoly;
