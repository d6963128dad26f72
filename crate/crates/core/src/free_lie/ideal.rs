//! Lie ideals generated by homogeneous elements of degree at least two.

use std::fmt;

use super::{FreeLie, LieElement};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, RowSpace};

/// Per-degree row-reduced spans of `I ∩ L_k` for `k ≤ depth`.
///
/// Pivots are chosen greedily on the smallest Lyndon index, so the quotient
/// basis of `L_k / (I ∩ L_k)` is the set of non-pivot indices.
#[derive(Clone, Debug)]
pub struct HomogeneousIdeal {
    letters: usize,
    depth: usize,
    generators: Vec<LieElement>,
    /// `spans[k]` for `k` in `0..=depth`; entries 0 and 1 are always zero.
    spans: Vec<RowSpace>,
}

impl HomogeneousIdeal {
    /// The zero ideal.
    pub fn zero(lie: &FreeLie) -> Self {
        Self::generated_by(lie, Vec::new(), lie.depth()).expect("zero ideal is always valid")
    }

    /// Saturates the generators under bracketing with letters, degree by degree up to `depth`.
    pub fn generated_by(lie: &FreeLie, generators: Vec<LieElement>, depth: usize) -> Result<Self> {
        if depth > lie.depth() {
            return Err(Error::TruncationOverflow {
                degree: depth,
                truncation: lie.depth(),
            });
        }
        let mut spans: Vec<RowSpace> = (0..=depth)
            .map(|k| RowSpace::new(if k == 0 { 0 } else { lie.dim(k) }))
            .collect();
        for g in &generators {
            let d = match g.homogeneous_degree() {
                Some(d) => d,
                None if g.is_zero() => continue,
                None => {
                    return Err(Error::Precondition(
                        "ideal generators must be homogeneous".into(),
                    ))
                }
            };
            if d < 2 {
                return Err(Error::Decomposability { degree: d });
            }
            if d <= depth {
                spans[d].insert(g.component(d, lie.dim(d)));
            }
        }
        for k in 2..depth {
            let maps: Vec<Matrix> = (0..lie.letters())
                .map(|h| lie.right_letter_matrix(k, h))
                .collect();
            let basis: Vec<_> = spans[k].basis().to_vec();
            for v in &basis {
                for m in &maps {
                    let image = m.mul_vec(v);
                    spans[k + 1].insert(image);
                }
            }
        }
        Ok(HomogeneousIdeal {
            letters: lie.letters(),
            depth,
            generators,
            spans,
        })
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn generators(&self) -> &[LieElement] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.spans.iter().all(|s| s.dim() == 0)
    }

    /// `I ∩ L_k` as a row space in Lyndon coordinates.
    pub fn span(&self, k: usize) -> &RowSpace {
        &self.spans[k]
    }

    pub fn dim(&self, k: usize) -> usize {
        self.spans.get(k).map_or(0, RowSpace::dim)
    }

    /// Lyndon indices spanning `L_k / (I ∩ L_k)`.
    pub fn quotient_basis(&self, k: usize) -> Vec<usize> {
        self.spans[k].free_columns()
    }

    pub fn quotient_dim(&self, k: usize) -> usize {
        self.spans[k].ambient() - self.spans[k].dim()
    }

    /// Normal form modulo `I`: pivot coordinates are cleared degree by degree.
    pub fn reduce(&self, lie: &FreeLie, a: &LieElement) -> LieElement {
        let mut out = lie.zero();
        let top = a.max_degree().unwrap_or(0);
        for k in 1..=top {
            let v = a.component(k, lie.dim(k));
            let r = if k <= self.depth { self.spans[k].reduce(&v) } else { v };
            out += &lie.from_component(k, &r);
        }
        out
    }

    pub fn contains(&self, lie: &FreeLie, a: &LieElement) -> bool {
        self.reduce(lie, a).is_zero()
    }

    /// Checks that each stored degree-`k` span brackets into the degree-`k+1` span.
    pub fn closure_certificate(&self, lie: &FreeLie) -> bool {
        for k in 2..self.depth {
            for v in self.spans[k].basis() {
                let a = lie.from_component(k, v);
                for h in 0..self.letters {
                    let b = lie.bracket_truncated(&a, &lie.letter(h));
                    if !self.spans[k + 1].contains(&b.component(k + 1, lie.dim(k + 1))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether the linear substitution `m` on letters maps the ideal into itself.
    ///
    /// Images of generators landing in `I` suffice, since `m` is a Lie automorphism
    /// and is invertible on each graded piece.
    pub fn is_preserved_by(&self, lie: &FreeLie, m: &Matrix) -> bool {
        self.generators
            .iter()
            .filter(|g| g.max_degree().is_some_and(|d| d <= self.depth))
            .all(|g| self.contains(lie, &lie.apply_linear(m, g)))
    }

    /// Per-degree equality of spans with another ideal.
    pub fn same_spans(&self, other: &HomogeneousIdeal) -> bool {
        self.letters == other.letters
            && self.depth == other.depth
            && (0..=self.depth).all(|k| self.spans[k].basis() == other.spans[k].basis())
    }

    /// A text form: generators and a per-degree dimension table.
    pub fn describe(&self, lie: &FreeLie) -> String {
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&format!("gen {}\n", lie.format(g)));
        }
        for k in 1..=self.depth {
            out.push_str(&format!(
                "dim {k} {} {}\n",
                self.dim(k),
                self.quotient_dim(k)
            ));
        }
        out
    }
}

impl fmt::Display for HomogeneousIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = (1..=self.depth).map(|k| self.dim(k).to_string()).collect();
        write!(
            f,
            "ideal(n={}, N={}, gens={}, dims=[{}])",
            self.letters,
            self.depth,
            self.generators.len(),
            dims.join(",")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega(lie: &FreeLie, g: usize) -> LieElement {
        let mut w = lie.zero();
        for i in 0..g {
            w += &lie.bracket(&lie.letter(i), &lie.letter(i + g)).unwrap();
        }
        w
    }

    #[test]
    fn torus_ideal_fills_everything() {
        let lie = FreeLie::new(2, 5);
        let ideal = HomogeneousIdeal::generated_by(&lie, vec![omega(&lie, 1)], 5).unwrap();
        assert_eq!(ideal.dim(2), 1);
        assert_eq!(ideal.dim(3), 2);
        for k in 2..=5 {
            assert_eq!(ideal.quotient_dim(k), 0);
        }
        assert!(ideal.closure_certificate(&lie));
    }

    #[test]
    fn zero_ideal_leaves_the_free_algebra() {
        let lie = FreeLie::new(3, 4);
        let ideal = HomogeneousIdeal::zero(&lie);
        assert!(ideal.is_zero());
        for k in 1..=4 {
            assert_eq!(ideal.quotient_dim(k), lie.dim(k));
        }
    }

    #[test]
    fn genus_two_degree_three_piece() {
        let lie = FreeLie::new(4, 3);
        let w = omega(&lie, 2);
        let ideal = HomogeneousIdeal::generated_by(&lie, vec![w.clone()], 3).unwrap();
        assert_eq!(lie.dim(3), 20);
        // oracle: rank of the four brackets [ω, x_i] computed directly
        let mut rs = RowSpace::new(20);
        for i in 0..4 {
            let b = lie.bracket(&w, &lie.letter(i)).unwrap();
            rs.insert(b.component(3, 20));
        }
        assert_eq!(rs.dim(), 4);
        assert_eq!(ideal.dim(3), 4);
        assert!(ideal.closure_certificate(&lie));
    }

    #[test]
    fn low_degree_generators_are_rejected() {
        let lie = FreeLie::new(2, 3);
        assert!(matches!(
            HomogeneousIdeal::generated_by(&lie, vec![lie.letter(0)], 3),
            Err(Error::Decomposability { degree: 1 })
        ));
    }
}
