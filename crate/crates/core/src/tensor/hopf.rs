//! Coproduct and the group-like / primitive predicates.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{TruncatedTensor, Word};
use crate::rational::{format_linear_combination, one, Rational};

/// An element of the truncated tensor square, as a sparse map on word pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorPair {
    depth: usize,
    terms: BTreeMap<(Word, Word), Rational>,
}

impl TensorPair {
    pub fn zero(depth: usize) -> Self {
        TensorPair {
            depth,
            terms: BTreeMap::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, left: &Word, right: &Word) -> Rational {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, left: Word, right: Word, c: Rational) {
        if c.is_zero() || left.len() > self.depth || right.len() > self.depth {
            return;
        }
        let key = (left, right);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `a ⊗ b`, keeping only pairs of total length at most `depth`.
    pub fn tensor(a: &TruncatedTensor, b: &TruncatedTensor) -> Self {
        let depth = a.depth();
        let mut out = TensorPair::zero(depth);
        for (u, x) in a.terms() {
            for (v, y) in b.terms() {
                if u.len() + v.len() <= depth {
                    out.add_term(u.clone(), v.clone(), x * y);
                }
            }
        }
        out
    }

    /// Componentwise product `(u⊗v)(u'⊗v') = uu' ⊗ vv'`, truncated by total length.
    pub fn mul(&self, other: &TensorPair) -> TensorPair {
        let mut out = TensorPair::zero(self.depth);
        for ((u, v), x) in &self.terms {
            for ((u2, v2), y) in &other.terms {
                if u.len() + v.len() + u2.len() + v2.len() <= self.depth {
                    out.add_term(u.concat(u2), v.concat(v2), x * y);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &TensorPair) -> TensorPair {
        let mut out = self.clone();
        for ((u, v), c) in &other.terms {
            out.add_term(u.clone(), v.clone(), -c.clone());
        }
        out
    }

    /// Drops pairs whose total length exceeds `depth`.
    pub fn total_truncate(&self) -> TensorPair {
        TensorPair {
            depth: self.depth,
            terms: self
                .terms
                .iter()
                .filter(|((u, v), _)| u.len() + v.len() <= self.depth)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for TensorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |w: &Word| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.to_string()
            }
        };
        let s = format_linear_combination(
            self.terms
                .iter()
                .map(|((u, v), c)| (c, format!("({}) ⊗ ({})", side(u), side(v)))),
        );
        write!(f, "{}", s)
    }
}

impl fmt::Debug for TensorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl TruncatedTensor {
    /// The unshuffle coproduct: letters are primitive and Δ is multiplicative.
    pub fn coproduct(&self) -> TensorPair {
        let mut out = TensorPair::zero(self.depth());
        for (w, c) in self.terms() {
            let k = w.len();
            for mask in 0u32..(1u32 << k) {
                let mut left = Vec::with_capacity(k);
                let mut right = Vec::with_capacity(k);
                for (pos, &l) in w.letters().iter().enumerate() {
                    if mask & (1 << pos) != 0 {
                        left.push(l);
                    } else {
                        right.push(l);
                    }
                }
                out.add_term(Word(left), Word(right), c.clone());
            }
        }
        out
    }

    pub fn counit(&self) -> Rational {
        self.constant_term()
    }

    /// `Δa − a⊗a` on pairs of total length at most the truncation.
    pub fn grouplike_defect(&self) -> TensorPair {
        self.coproduct()
            .total_truncate()
            .sub(&TensorPair::tensor(self, self))
    }

    pub fn is_grouplike(&self) -> bool {
        self.counit().is_one() && self.grouplike_defect().is_zero()
    }

    /// `Δa − a⊗1 − 1⊗a`.
    pub fn primitive_defect(&self) -> TensorPair {
        let unit = TruncatedTensor::one(self.letters(), self.depth());
        self.coproduct()
            .sub(&TensorPair::tensor(self, &unit))
            .sub(&TensorPair::tensor(&unit, self))
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_defect().is_zero()
    }
}

/// `(Δ⊗1)Δa` and `(1⊗Δ)Δa`, as maps on word triples; equal by coassociativity.
pub fn coassociativity_sides(
    a: &TruncatedTensor,
) -> (
    BTreeMap<(Word, Word, Word), Rational>,
    BTreeMap<(Word, Word, Word), Rational>,
) {
    let delta = a.coproduct();
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    let single = |w: &Word, c: &Rational| {
        TruncatedTensor::from_terms(a.letters(), a.depth(), [(w.clone(), c.clone())])
    };
    for ((u, v), c) in delta.terms() {
        for ((u1, u2), c1) in single(u, &one()).coproduct().terms() {
            let e: &mut Rational = left
                .entry((u1.clone(), u2.clone(), v.clone()))
                .or_insert_with(Rational::zero);
            *e += c * c1;
        }
        for ((v1, v2), c2) in single(v, &one()).coproduct().terms() {
            let e: &mut Rational = right
                .entry((u.clone(), v1.clone(), v2.clone()))
                .or_insert_with(Rational::zero);
            *e += c * c2;
        }
    }
    left.retain(|_, c| !c.is_zero());
    right.retain(|_, c| !c.is_zero());
    (left, right)
}
