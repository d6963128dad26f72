//! Continuous algebra endomorphisms and derivations of the truncated tensor algebra,
//! both determined by their values on letters.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{TruncatedTensor, Word};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

/// Groups the terms of `t` by first letter: `t = c + Σ_i x_i · quotient_i`.
fn split_first_letter(t: &TruncatedTensor) -> (Rational, BTreeMap<u8, TruncatedTensor>) {
    let mut quotients: BTreeMap<u8, TruncatedTensor> = BTreeMap::new();
    let mut constant = Rational::zero();
    for (w, c) in t.terms() {
        match w.letters().split_first() {
            None => constant = c.clone(),
            Some((&first, rest)) => quotients
                .entry(first)
                .or_insert_with(|| TruncatedTensor::zero(t.letters(), t.depth()))
                .add_term(Word(rest.to_vec()), c.clone()),
        }
    }
    (constant, quotients)
}

/// An algebra endomorphism `x_i ↦ images[i]`, with every image in the augmentation ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Substitution {
    images: Vec<TruncatedTensor>,
}

impl Substitution {
    /// Panics if an image has a constant term; such maps do not extend to the completion.
    pub fn new(images: Vec<TruncatedTensor>) -> Self {
        assert!(!images.is_empty(), "substitution needs at least one letter");
        for im in &images {
            assert!(
                im.constant_term().is_zero(),
                "substitution images must lie in the augmentation ideal"
            );
        }
        Substitution { images }
    }

    pub fn try_new(images: Vec<TruncatedTensor>) -> Result<Self> {
        if images.iter().any(|im| !im.constant_term().is_zero()) {
            return Err(Error::Precondition(
                "substitution images must have zero constant term".into(),
            ));
        }
        Ok(Self::new(images))
    }

    pub fn identity(letters: usize, depth: usize) -> Self {
        Substitution {
            images: (0..letters)
                .map(|i| TruncatedTensor::letter(letters, depth, i))
                .collect(),
        }
    }

    /// Letter `i` goes to `Σ_j m[j][i] x_j`.
    pub fn linear(m: &Matrix, depth: usize) -> Self {
        let n = m.rows();
        Substitution {
            images: (0..n)
                .map(|i| {
                    TruncatedTensor::from_terms(
                        n,
                        depth,
                        (0..n).map(|j| (Word::letter(j), m.get(j, i).clone())),
                    )
                })
                .collect(),
        }
    }

    pub fn letters(&self) -> usize {
        self.images.len()
    }

    pub fn depth(&self) -> usize {
        self.images[0].depth()
    }

    pub fn images(&self) -> &[TruncatedTensor] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &TruncatedTensor {
        &self.images[i]
    }

    pub fn apply(&self, t: &TruncatedTensor) -> TruncatedTensor {
        let (c, quotients) = split_first_letter(t);
        let mut out = TruncatedTensor::constant(t.letters(), t.depth(), c);
        for (i, q) in quotients {
            let rest = self.apply(&q);
            out += &(&self.images[i as usize] * &rest);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        Substitution {
            images: other.images.iter().map(|im| self.apply(im)).collect(),
        }
    }

    /// Degree-one part as a matrix whose column `i` holds the letter coefficients of image `i`.
    pub fn linear_part(&self) -> Matrix {
        let n = self.letters();
        let mut m = Matrix::zeros(n, n);
        for (i, im) in self.images.iter().enumerate() {
            for j in 0..n {
                m.set(j, i, im.coeff(&Word::letter(j)));
            }
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        *self == Substitution::identity(self.letters(), self.depth())
    }

    /// Two-sided inverse, computed as `U⁻¹ ∘ L⁻¹` for `self = L ∘ U` with `L` linear and `U` unipotent.
    pub fn inverse(&self) -> Result<Substitution> {
        let depth = self.depth();
        let lin = self.linear_part();
        let lin_inv = lin
            .inverse()
            .ok_or_else(|| Error::Precondition("linear part is singular".into()))?;
        let l_inv = Substitution::linear(&lin_inv, depth);
        let unipotent = l_inv.compose(self);
        // fixed point V = id − (U − id)∘V converges one degree per step
        let id = Substitution::identity(self.letters(), depth);
        let mut v = id.clone();
        for _ in 0..depth {
            let uv = unipotent.compose(&v);
            v = Substitution {
                images: (0..self.letters())
                    .map(|i| &(&id.images[i] - &uv.images[i]) + &v.images[i])
                    .collect(),
            };
        }
        let inv = v.compose(&l_inv);
        if !self.compose(&inv).is_identity() || !inv.compose(self).is_identity() {
            return Err(Error::InverseVerification(
                "substitution inverse failed to compose to the identity".into(),
            ));
        }
        Ok(inv)
    }
}

/// A derivation `x_i ↦ images[i]` of the tensor algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorDerivation {
    images: Vec<TruncatedTensor>,
}

impl TensorDerivation {
    pub fn new(images: Vec<TruncatedTensor>) -> Self {
        assert!(!images.is_empty(), "derivation needs at least one letter");
        TensorDerivation { images }
    }

    pub fn zero(letters: usize, depth: usize) -> Self {
        TensorDerivation {
            images: vec![TruncatedTensor::zero(letters, depth); letters],
        }
    }

    pub fn letters(&self) -> usize {
        self.images.len()
    }

    pub fn depth(&self) -> usize {
        self.images[0].depth()
    }

    pub fn images(&self) -> &[TruncatedTensor] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(TruncatedTensor::is_zero)
    }

    /// `D(x_i q) = D(x_i) q + x_i D(q)`.
    pub fn apply(&self, t: &TruncatedTensor) -> TruncatedTensor {
        let (_, quotients) = split_first_letter(t);
        let mut out = TruncatedTensor::zero(t.letters(), t.depth());
        for (i, q) in quotients {
            let x = TruncatedTensor::letter(t.letters(), t.depth(), i as usize);
            out += &(&self.images[i as usize] * &q);
            let dq = self.apply(&q);
            out += &(&x * &dq);
        }
        out
    }

    /// `[D, E] = D∘E − E∘D`.
    pub fn bracket(&self, other: &TensorDerivation) -> TensorDerivation {
        TensorDerivation {
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| &self.apply(b) - &other.apply(a))
                .collect(),
        }
    }

    pub fn add(&self, other: &TensorDerivation) -> TensorDerivation {
        TensorDerivation {
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> TensorDerivation {
        TensorDerivation {
            images: self.images.iter().map(|a| a.scale(c)).collect(),
        }
    }

    fn raises_degree(&self) -> bool {
        self.images
            .iter()
            .all(|im| im.min_degree().is_none_or(|d| d >= 2))
    }

    /// The automorphism `Σ_k D^k / k!`; `D` must raise degrees so the series is finite.
    pub fn exp(&self) -> Result<Substitution> {
        if !self.raises_degree() {
            return Err(Error::Precondition(
                "exp of a derivation needs values of degree at least 2".into(),
            ));
        }
        let n = self.letters();
        let depth = self.depth();
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let mut term = TruncatedTensor::letter(n, depth, i);
            let mut sum = term.clone();
            for k in 1..=depth {
                term = self
                    .apply(&term)
                    .scale(&Rational::new(1.into(), (k as i64).into()));
                if term.is_zero() {
                    break;
                }
                sum += &term;
            }
            images.push(sum);
        }
        Ok(Substitution::new(images))
    }
}

impl Substitution {
    /// The derivation `log(self) = Σ (−1)^{k+1} (self − id)^k / k`; `self` must be unipotent.
    pub fn log(&self) -> Result<TensorDerivation> {
        if !self.linear_part().sub(&Matrix::identity(self.letters())).is_zero() {
            return Err(Error::Precondition(
                "log of a substitution needs identity linear part".into(),
            ));
        }
        let n = self.letters();
        let depth = self.depth();
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let mut power = TruncatedTensor::letter(n, depth, i);
            let mut sum = TruncatedTensor::zero(n, depth);
            for k in 1..=depth {
                power = &self.apply(&power) - &power;
                if power.is_zero() {
                    break;
                }
                let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
                sum += &power.scale(&Rational::new(sign.into(), (k as i64).into()));
            }
            images.push(sum);
        }
        Ok(TensorDerivation::new(images))
    }
}
