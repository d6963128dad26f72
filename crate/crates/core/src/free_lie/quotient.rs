//! The truncated quotient `L/I` of a free Lie algebra by a homogeneous ideal.

use std::sync::Arc;

use super::{FreeLie, HomogeneousIdeal, LieElement};
use crate::error::{Error, Result};
use crate::linalg::Vector;

/// `L/I` through the truncation degree. Elements are free-Lie representatives in
/// normal form: coordinates at the ideal's pivot indices are zero.
#[derive(Clone, Debug)]
pub struct QuotientLie {
    lie: Arc<FreeLie>,
    ideal: HomogeneousIdeal,
}

impl QuotientLie {
    pub fn new(lie: Arc<FreeLie>, ideal: HomogeneousIdeal) -> Result<Self> {
        if ideal.letters() != lie.letters() || ideal.depth() != lie.depth() {
            return Err(Error::DimensionMismatch(format!(
                "ideal on {} letters through {} in an algebra on {} letters through {}",
                ideal.letters(),
                ideal.depth(),
                lie.letters(),
                lie.depth()
            )));
        }
        Ok(QuotientLie { lie, ideal })
    }

    /// The free Lie algebra itself (zero ideal).
    pub fn free(lie: Arc<FreeLie>) -> Self {
        let ideal = HomogeneousIdeal::zero(&lie);
        QuotientLie { lie, ideal }
    }

    /// `L(H)/(ω)` for the genus-`g` surface.
    pub fn surface(g: usize, depth: usize) -> Self {
        let lie = Arc::new(FreeLie::new(2 * g, depth));
        let mut omega = lie.zero();
        for i in 0..g {
            omega += &lie
                .bracket(&lie.letter(i), &lie.letter(i + g))
                .expect("truncation at least 2");
        }
        let ideal = HomogeneousIdeal::generated_by(&lie, vec![omega], depth)
            .expect("ω is homogeneous of degree 2");
        QuotientLie { lie, ideal }
    }

    pub fn lie(&self) -> &Arc<FreeLie> {
        &self.lie
    }

    pub fn ideal(&self) -> &HomogeneousIdeal {
        &self.ideal
    }

    pub fn letters(&self) -> usize {
        self.lie.letters()
    }

    pub fn depth(&self) -> usize {
        self.lie.depth()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.ideal.quotient_dim(k)
    }

    /// Lyndon indices representing a basis of `(L/I)_k`.
    pub fn basis_indices(&self, k: usize) -> Vec<usize> {
        self.ideal.quotient_basis(k)
    }

    pub fn reduce(&self, a: &LieElement) -> LieElement {
        self.ideal.reduce(&self.lie, a)
    }

    pub fn is_zero(&self, a: &LieElement) -> bool {
        self.ideal.contains(&self.lie, a)
    }

    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        Ok(self.reduce(&self.lie.bracket(a, b)?))
    }

    /// Coordinates of the degree-`k` part over [`QuotientLie::basis_indices`].
    pub fn coords(&self, a: &LieElement, k: usize) -> Vector {
        let v = self.reduce(&a.homogeneous(k)).component(k, self.lie.dim(k));
        self.basis_indices(k).into_iter().map(|i| v[i].clone()).collect()
    }

    pub fn from_coords(&self, k: usize, v: &[crate::Rational]) -> LieElement {
        let mut out = self.lie.zero();
        for (&i, c) in self.basis_indices(k).iter().zip(v) {
            out.add_coeff(k, i, c.clone());
        }
        out
    }
}
