//! Formal homology connections on finite CDGA models: flatness, Chen's
//! homotopy-transfer construction, the ideal `I_ω`, and the surface model.

mod connection;
mod file;
mod ideal;
mod model;

pub use connection::{
    check_transfer_equivariance, transfer_connection, word_label, DefectTable, FormSeries, FormalConnection, Series, Word,
};
pub use file::{parse_model, ModelText};
pub use ideal::{connection_ideal, ConnectionIdeal};
pub use model::{massey_model, surface_model, trivial_model, CDGAModel, ProductTable, SideConditions};

/// `flatness_check` as a free function: defects of `c` on `model` up to length `n`.
pub fn flatness_check(
    c: &FormalConnection,
    model: &CDGAModel,
    n: usize,
) -> crate::Result<DefectTable> {
    c.flatness_check(model, n)
}
