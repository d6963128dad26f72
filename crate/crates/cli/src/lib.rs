//! Reproducible text reports over the `liexp` library: dimension tables,
//! Johnson maps of automorphisms read from presentation files, and seeded
//! verification suites.

pub mod corpus;
pub mod dims;
pub mod error;
pub mod johnson;
pub mod report;
pub mod verify;

pub use error::CliError;
pub use report::Report;
