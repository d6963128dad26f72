//! The completed tensor algebra on `n` letters, truncated at a fixed degree.
//!
//! Elements are sparse maps from words to rational coefficients. Every
//! binary operation checks that both operands agree on the letter count and
//! the truncation degree, and discards words longer than the truncation.

mod endo;
mod hopf;
mod series;
mod text;

pub use endo::{Substitution, TensorDerivation};
pub use hopf::TensorPair;
pub use hopf::coassociativity_sides;
pub use series::bch;
pub use text::parse_tensor;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{one, Rational};

/// A word over letters `0..n`; letter `i` prints as `x{i+1}`.
///
/// Words order by length first, then lexicographically, so that sums print
/// degree by degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i as u8])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|&l| format!("x{}", l + 1)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// An element of the tensor algebra modulo words of length greater than `depth`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedTensor {
    letters: usize,
    depth: usize,
    terms: BTreeMap<Word, Rational>,
}

impl TruncatedTensor {
    pub fn zero(letters: usize, depth: usize) -> Self {
        TruncatedTensor {
            letters,
            depth,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(letters: usize, depth: usize) -> Self {
        Self::constant(letters, depth, one())
    }

    pub fn constant(letters: usize, depth: usize, c: Rational) -> Self {
        let mut t = Self::zero(letters, depth);
        t.add_term(Word::empty(), c);
        t
    }

    /// The basis letter `X_i` (zero-based).
    pub fn letter(letters: usize, depth: usize, i: usize) -> Self {
        assert!(i < letters, "letter index out of range");
        let mut t = Self::zero(letters, depth);
        t.add_term(Word::letter(i), one());
        t
    }

    pub fn from_terms<I>(letters: usize, depth: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Word, Rational)>,
    {
        let mut t = Self::zero(letters, depth);
        for (w, c) in terms {
            t.add_term(w, c);
        }
        t
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Word::empty())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest word length carrying a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::len)
    }

    /// Adds `c * w`; words beyond the truncation are dropped.
    pub fn add_term(&mut self, w: Word, c: Rational) {
        debug_assert!(w.0.iter().all(|&l| (l as usize) < self.letters));
        if w.len() > self.depth || c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.letters != other.letters || self.depth != other.depth {
            return Err(Error::DimensionMismatch(format!(
                "(n={}, N={}) vs (n={}, N={})",
                self.letters, self.depth, other.letters, other.depth
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.letters, self.depth);
        }
        TruncatedTensor {
            letters: self.letters,
            depth: self.depth,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    /// Concatenation product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.letters, self.depth);
        let Some(min_b) = other.min_degree() else {
            return out;
        };
        for (u, a) in &self.terms {
            if u.len() + min_b > self.depth {
                break;
            }
            for (v, b) in &other.terms {
                if u.len() + v.len() > self.depth {
                    break;
                }
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    /// Degree-`k` homogeneous component.
    pub fn homogeneous(&self, k: usize) -> Self {
        TruncatedTensor {
            letters: self.letters,
            depth: self.depth,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Components of degree at most `k`, keeping the truncation degree.
    pub fn up_to_degree(&self, k: usize) -> Self {
        TruncatedTensor {
            letters: self.letters,
            depth: self.depth,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-truncates at `depth` (may lower or raise the nominal truncation).
    pub fn with_depth(&self, depth: usize) -> Self {
        TruncatedTensor {
            letters: self.letters,
            depth,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= depth)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies a linear map on letters: letter `i` goes to `sum_j m[j][i] x_j`.
    pub fn linear_substitute(&self, m: &crate::linalg::Matrix) -> Self {
        Substitution::linear(m, self.depth).apply(self)
    }
}

impl fmt::Debug for TruncatedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<'a> Mul<&'a TruncatedTensor> for &'a TruncatedTensor {
    type Output = TruncatedTensor;

    /// Panics on mismatched shapes; use [`TruncatedTensor::try_mul`] for a checked product.
    fn mul(self, rhs: &'a TruncatedTensor) -> TruncatedTensor {
        self.try_mul(rhs).expect("tensor product of mismatched shapes")
    }
}

impl<'a> Mul<&'a TruncatedTensor> for TruncatedTensor {
    type Output = TruncatedTensor;

    fn mul(self, rhs: &'a TruncatedTensor) -> TruncatedTensor {
        &self * rhs
    }
}

impl Mul for TruncatedTensor {
    type Output = TruncatedTensor;

    fn mul(self, rhs: TruncatedTensor) -> TruncatedTensor {
        &self * &rhs
    }
}

impl<'a> Add<&'a TruncatedTensor> for &'a TruncatedTensor {
    type Output = TruncatedTensor;

    fn add(self, rhs: &'a TruncatedTensor) -> TruncatedTensor {
        self.try_add(rhs).expect("tensor sum of mismatched shapes")
    }
}

impl Add for TruncatedTensor {
    type Output = TruncatedTensor;

    fn add(mut self, rhs: TruncatedTensor) -> TruncatedTensor {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a TruncatedTensor> for TruncatedTensor {
    fn add_assign(&mut self, rhs: &'a TruncatedTensor) {
        self.check_compatible(rhs)
            .expect("tensor sum of mismatched shapes");
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a TruncatedTensor> for TruncatedTensor {
    fn sub_assign(&mut self, rhs: &'a TruncatedTensor) {
        self.check_compatible(rhs)
            .expect("tensor difference of mismatched shapes");
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c.clone());
        }
    }
}

impl<'a> Sub<&'a TruncatedTensor> for &'a TruncatedTensor {
    type Output = TruncatedTensor;

    fn sub(self, rhs: &'a TruncatedTensor) -> TruncatedTensor {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for TruncatedTensor {
    type Output = TruncatedTensor;

    fn sub(mut self, rhs: TruncatedTensor) -> TruncatedTensor {
        self -= &rhs;
        self
    }
}

impl Neg for &TruncatedTensor {
    type Output = TruncatedTensor;

    fn neg(self) -> TruncatedTensor {
        self.scale(&-Rational::one())
    }
}

impl Neg for TruncatedTensor {
    type Output = TruncatedTensor;

    fn neg(self) -> TruncatedTensor {
        (&self).neg()
    }
}
