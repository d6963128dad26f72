//! The discrete Maurer–Cartan defect: derivation-valued edge data on a graph whose
//! holonomies around each 2-cell should compose to the identity.

use std::sync::Arc;

use crate::derivations::{DerMode, Derivation};
use crate::error::{Error, Result};
use crate::free_lie::QuotientLie;
use crate::tensor::{Substitution, TensorDerivation};

/// Positive derivations of one algebra attached to the oriented edges of a graph.
#[derive(Clone, Debug)]
pub struct EdgeCochain {
    algebra: Arc<QuotientLie>,
    vertices: usize,
    edges: Vec<(usize, usize)>,
    values: Vec<Derivation>,
}

impl EdgeCochain {
    pub fn new(
        algebra: Arc<QuotientLie>,
        vertices: usize,
        edges: Vec<((usize, usize), Derivation)>,
    ) -> Result<Self> {
        let mut out = EdgeCochain {
            algebra,
            vertices,
            edges: Vec::with_capacity(edges.len()),
            values: Vec::with_capacity(edges.len()),
        };
        for (e, ((s, t), x)) in edges.into_iter().enumerate() {
            if s >= vertices || t >= vertices {
                return Err(Error::Precondition(format!(
                    "edge {e} joins {s} and {t} but there are {vertices} vertices"
                )));
            }
            let a = x.algebra();
            if x.mode() != DerMode::Quotient
                || a.letters() != out.algebra.letters()
                || a.depth() != out.algebra.depth()
                || !a.ideal().same_spans(out.algebra.ideal())
            {
                return Err(Error::Incompatible(format!(
                    "edge {e} carries a derivation of a different algebra"
                )));
            }
            out.edges.push((s, t));
            out.values.push(x);
        }
        Ok(out)
    }

    pub fn algebra(&self) -> &Arc<QuotientLie> {
        &self.algebra
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn value(&self, e: usize) -> &Derivation {
        &self.values[e]
    }
}

/// A closed edge path: `(edge, forward)` pairs, a backward edge contributing `−η(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCell {
    pub boundary: Vec<(usize, bool)>,
}

impl TwoCell {
    pub fn new(boundary: Vec<(usize, bool)>) -> Self {
        TwoCell { boundary }
    }
}

fn check_cycle(eta: &EdgeCochain, index: usize, cell: &TwoCell) -> Result<()> {
    let unmatched = |detail: String| Error::UnmatchedEdge { cell: index, detail };
    if cell.boundary.is_empty() {
        return Err(unmatched("empty boundary".into()));
    }
    let mut ends = Vec::with_capacity(cell.boundary.len());
    for &(e, forward) in &cell.boundary {
        let &(s, t) = eta
            .edges
            .get(e)
            .ok_or_else(|| unmatched(format!("no edge {e}")))?;
        ends.push(if forward { (s, t) } else { (t, s) });
    }
    for i in 0..ends.len() {
        let next = (i + 1) % ends.len();
        if ends[i].1 != ends[next].0 {
            return Err(unmatched(format!(
                "edge {} ends at vertex {} but edge {} starts at vertex {}",
                cell.boundary[i].0, ends[i].1, cell.boundary[next].0, ends[next].0
            )));
        }
    }
    Ok(())
}

fn tensor_derivation(x: &Derivation) -> TensorDerivation {
    let lie = x.algebra().lie();
    TensorDerivation::new(x.values().iter().map(|v| lie.tensor_embed(v)).collect())
}

/// `exp(±η(e₁)) ∘ exp(±η(e₂)) ∘ …` around the cell, on the tensor algebra.
pub fn holonomy(eta: &EdgeCochain, index: usize, cell: &TwoCell) -> Result<Substitution> {
    check_cycle(eta, index, cell)?;
    let lie = eta.algebra.lie();
    let mut h = Substitution::identity(lie.letters(), lie.depth());
    for &(e, forward) in &cell.boundary {
        let mut d = tensor_derivation(&eta.values[e]);
        if !forward {
            d = d.scale(&crate::rational::rat(-1));
        }
        h = h.compose(&d.exp()?);
    }
    Ok(h)
}

/// For each 2-cell, `log` of the composed holonomy as a derivation of `L/I`
/// (the BCH product of the boundary values); zero means the cell is flat.
pub fn mc_defect(eta: &EdgeCochain, cells: &[TwoCell]) -> Result<Vec<Derivation>> {
    let lie = eta.algebra.lie();
    cells
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let log = holonomy(eta, i, cell)?.log()?;
            let values = log
                .images()
                .iter()
                .map(|t| lie.lie_coords_all(t))
                .collect::<Result<Vec<_>>>()?;
            Ok(Derivation::raw(eta.algebra.clone(), DerMode::Quotient, values))
        })
        .collect()
}
