//! Group expansions, automorphisms of free and surface groups, and Johnson maps.

mod automorphism;
mod expansion;
mod file;
mod group;
mod johnson;
pub mod random;

pub use automorphism::{catalogue, FreeGroupAutomorphism};
pub use expansion::{
    free_expansion, free_expansion_with_logs, inner_twist, omega, surface_ideal,
    symplectic_expansion, symplectic_expansion_with, transport_expansion, DegreeSolve, Expansion,
};
pub use file::PresentationFile;
pub use group::{surface_relator, GroupPresentation, GroupWord, PresentationKind};
pub use johnson::{
    filtration_level, johnson_graded, johnson_graded_oracle, johnson_map, tau1_coboundary,
    tau1_cocycle_check, twist, CoboundaryReport, CocycleCheck, PositiveAutomorphism,
};
