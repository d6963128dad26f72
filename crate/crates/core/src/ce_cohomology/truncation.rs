//! Finite truncations `⊕_{k ≤ w} ODer^k` (or `Der^k`) as Lie algebra data.

use std::sync::Arc;

use super::FiniteLieData;
use crate::derivations::{gl_action, DerMode, DerSpace, Derivation};
use crate::error::{Error, Result};
use crate::free_lie::QuotientLie;
use crate::linalg::{Matrix, Vector};
use crate::rational::{rat, Rational};

/// The positive derivations of `L/I` in degrees `1..=w`, or their outer classes,
/// modulo everything of degree `> w`, with a basis labelled `D{k}.{j}`.
#[derive(Clone, Debug)]
pub struct DerivationTruncation {
    algebra: Arc<QuotientLie>,
    outer: bool,
    spaces: Vec<DerSpace>,
    /// Start of each degree block in the flattened basis.
    offsets: Vec<usize>,
    data: FiniteLieData,
}

impl DerivationTruncation {
    /// Needs the truncation of `L/I` to reach `w + 1` plus the degree of the ideal's
    /// generators minus one.
    pub fn new(algebra: Arc<QuotientLie>, max_weight: usize, outer: bool) -> Result<Self> {
        if max_weight == 0 {
            return Err(Error::Precondition("weight bound must be positive".into()));
        }
        let spaces: Vec<DerSpace> = (1..=max_weight)
            .map(|k| DerSpace::new(algebra.clone(), DerMode::Quotient, k))
            .collect::<Result<_>>()?;
        let block_dim = |s: &DerSpace| if outer { s.outer_dim() } else { s.dim() };
        let mut offsets = Vec::with_capacity(spaces.len() + 1);
        let mut labels = Vec::new();
        let mut weights = Vec::new();
        let mut total = 0;
        for (k, s) in spaces.iter().enumerate() {
            offsets.push(total);
            for j in 0..block_dim(s) {
                labels.push(format!("D{}.{}", k + 1, j + 1));
                weights.push(k as i64 + 1);
            }
            total += block_dim(s);
        }
        offsets.push(total);
        let mut partial = DerivationTruncation {
            algebra,
            outer,
            spaces,
            offsets,
            data: FiniteLieData::abelian(0),
        };
        let mut brackets = Vec::new();
        for a in 0..total {
            for b in a + 1..total {
                let (ka, kb) = (partial.weight_of(a), partial.weight_of(b));
                if ka + kb > max_weight {
                    continue;
                }
                let z = partial.element(a).bracket(&partial.element(b))?;
                let coords = partial.block_coords(ka + kb, &z)?;
                let off = partial.offsets[ka + kb - 1];
                let terms: Vec<(usize, Rational)> = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| *c != rat(0))
                    .map(|(j, c)| (off + j, c))
                    .collect();
                if !terms.is_empty() {
                    brackets.push(((a, b), terms));
                }
            }
        }
        partial.data = FiniteLieData::new(labels, weights, &brackets)?;
        Ok(partial)
    }

    pub fn data(&self) -> &FiniteLieData {
        &self.data
    }

    pub fn into_data(self) -> FiniteLieData {
        self.data
    }

    pub fn algebra(&self) -> &Arc<QuotientLie> {
        &self.algebra
    }

    pub fn is_outer(&self) -> bool {
        self.outer
    }

    pub fn max_weight(&self) -> usize {
        self.spaces.len()
    }

    pub fn space(&self, k: usize) -> &DerSpace {
        &self.spaces[k - 1]
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().expect("at least one block")
    }

    fn weight_of(&self, a: usize) -> usize {
        self.offsets.partition_point(|&o| o <= a)
    }

    /// A derivation representing basis element `a`.
    pub fn element(&self, a: usize) -> Derivation {
        let k = self.weight_of(a);
        let j = a - self.offsets[k - 1];
        let s = &self.spaces[k - 1];
        if self.outer {
            s.outer_representative(j)
        } else {
            s.basis_derivation(j)
        }
    }

    fn block_coords(&self, k: usize, x: &Derivation) -> Result<Vector> {
        let s = &self.spaces[k - 1];
        if self.outer {
            s.oder_coords(x)
        } else {
            s.der_coords(x)
        }
    }

    /// Coordinates of a derivation in the truncation (degrees above `w` dropped).
    pub fn coords(&self, x: &Derivation) -> Result<Vector> {
        let mut out = Vec::with_capacity(self.dim());
        for k in 1..=self.max_weight() {
            out.extend(self.block_coords(k, &x.block(k))?);
        }
        Ok(out)
    }

    /// The matrix of `X ↦ M ∘ X ∘ M⁻¹` for a linear automorphism `M` of `H` that
    /// preserves the ideal.
    pub fn action_matrix(&self, m: &Matrix) -> Result<Matrix> {
        let columns: Vec<Vector> = (0..self.dim())
            .map(|a| self.coords(&gl_action(m, &self.element(a))?))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(&columns, self.dim()))
    }
}
