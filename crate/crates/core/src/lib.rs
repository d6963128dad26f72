//! Exact computations in truncated tensor and free Lie algebras: group
//! expansions, Johnson maps, derivation Lie algebras, Chevalley–Eilenberg
//! cochains and formal homology connections on finite CDGA models.
//!
//! All arithmetic is over arbitrary-precision rationals; every object carries
//! its truncation degree and binary operations check compatibility.

pub mod ce_cohomology;
pub mod derivations;
pub mod error;
pub mod expansions;
pub mod formal_connection;
pub mod free_lie;
pub mod linalg;
pub mod rational;
pub mod tensor;

pub use error::{Error, Result};
pub use rational::Rational;
