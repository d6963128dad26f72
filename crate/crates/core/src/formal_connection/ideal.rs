//! The ideal `I_ω = δ(H₂[1])` of a connection, as Lie data on the degree-zero letters.

use std::sync::Arc;

use super::connection::FormalConnection;
use crate::error::{Error, Result};
use crate::free_lie::{FreeLie, HomogeneousIdeal, LieElement};
use crate::tensor::{TruncatedTensor, Word};

/// `I_ω` on the letters of suspended degree zero (the first homology), in the
/// order they appear among the connection's letters.
#[derive(Clone, Debug)]
pub struct ConnectionIdeal {
    pub lie: Arc<FreeLie>,
    /// Positions of the degree-zero letters among all letters.
    pub letters: Vec<usize>,
    /// `δ(X)` for each degree-one letter `X`, on the degree-zero letters.
    pub generators: Vec<TruncatedTensor>,
    /// Lowest-length homogeneous part of each nonzero generator, as a Lie element.
    pub leading: Vec<LieElement>,
    /// Whether every generator equals its leading term, so that `ideal` is `I_ω`
    /// itself rather than its associated graded.
    pub homogeneous: bool,
    /// The graded ideal generated by the leading terms.
    pub ideal: HomogeneousIdeal,
}

pub fn connection_ideal(c: &FormalConnection) -> Result<ConnectionIdeal> {
    let letters: Vec<usize> = (0..c.letters())
        .filter(|&i| c.letter_degrees()[i] == 0)
        .collect();
    let n = letters.len();
    let depth = c.truncation().max(2);
    let lie = Arc::new(FreeLie::new(n, depth));
    let position = |i: usize| letters.iter().position(|&j| j == i);
    let mut generators = Vec::new();
    let mut leading = Vec::new();
    let mut homogeneous = true;
    for x in (0..c.letters()).filter(|&i| c.letter_degrees()[i] == 1) {
        let mut t = TruncatedTensor::zero(n, depth);
        for (w, coeff) in c.delta(x) {
            let word: Vec<u8> = w
                .iter()
                .map(|&i| position(i).map(|p| p as u8))
                .collect::<Option<_>>()
                .ok_or_else(|| {
                    Error::MalformedConnection(format!(
                        "δ(X{}) involves a letter of positive degree",
                        x + 1
                    ))
                })?;
            t.add_term(Word(word), coeff.clone());
        }
        if let Some(k) = t.min_degree() {
            let lead = lie.lie_coords(&t, k).map_err(|e| match e {
                Error::NotLieElement { defect } => Error::NotLieElement {
                    defect: format!("leading term of δ(X{}): {defect}", x + 1),
                },
                other => other,
            })?;
            if t != t.homogeneous(k) {
                homogeneous = false;
            }
            leading.push(lead);
        }
        generators.push(t);
    }
    let ideal = HomogeneousIdeal::generated_by(&lie, leading.clone(), depth)?;
    Ok(ConnectionIdeal {
        lie,
        letters,
        generators,
        leading,
        homogeneous,
        ideal,
    })
}
