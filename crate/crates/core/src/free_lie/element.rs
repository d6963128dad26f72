//! Elements of the truncated free Lie algebra in Lyndon coordinates.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::linalg::Vector;
use crate::rational::Rational;

/// A sparse combination of Lyndon basis elements, keyed by `(degree, index)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LieElement {
    letters: usize,
    depth: usize,
    coords: BTreeMap<(usize, usize), Rational>,
}

impl LieElement {
    pub fn zero(letters: usize, depth: usize) -> Self {
        LieElement {
            letters,
            depth,
            coords: BTreeMap::new(),
        }
    }

    pub fn basis(letters: usize, depth: usize, degree: usize, index: usize) -> Self {
        let mut e = Self::zero(letters, depth);
        e.add_coeff(degree, index, Rational::one());
        e
    }

    /// The generator `x_i`, which is basis element `i` of degree one.
    pub fn letter(letters: usize, depth: usize, i: usize) -> Self {
        Self::basis(letters, depth, 1, i)
    }

    /// Builds the degree-`k` element with dense coordinates `v`.
    pub fn from_component(letters: usize, depth: usize, k: usize, v: &[Rational]) -> Self {
        let mut e = Self::zero(letters, depth);
        for (i, c) in v.iter().enumerate() {
            e.add_coeff(k, i, c.clone());
        }
        e
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn coords(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.coords.iter()
    }

    pub fn coeff(&self, degree: usize, index: usize) -> Rational {
        self.coords
            .get(&(degree, index))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Adds `c` to coordinate `(degree, index)`; degrees above the truncation are dropped.
    pub fn add_coeff(&mut self, degree: usize, index: usize, c: Rational) {
        assert!(degree >= 1, "Lie elements have no degree-0 part");
        if degree > self.depth || c.is_zero() {
            return;
        }
        let slot = self.coords.entry((degree, index)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coords.remove(&(degree, index));
        }
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.coords.keys().next().map(|k| k.0)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.coords.keys().next_back().map(|k| k.0)
    }

    /// The single degree carrying nonzero coordinates, if there is exactly one.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match (self.min_degree(), self.max_degree()) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn homogeneous(&self, k: usize) -> Self {
        LieElement {
            letters: self.letters,
            depth: self.depth,
            coords: self
                .coords
                .range((k, 0)..(k + 1, 0))
                .map(|(key, c)| (*key, c.clone()))
                .collect(),
        }
    }

    /// Dense coordinates of the degree-`k` part in a space of dimension `dim`.
    pub fn component(&self, k: usize, dim: usize) -> Vector {
        let mut v = vec![Rational::zero(); dim];
        for (&(_, i), c) in self.coords.range((k, 0)..(k + 1, 0)) {
            v[i] = c.clone();
        }
        v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.letters, self.depth);
        }
        LieElement {
            letters: self.letters,
            depth: self.depth,
            coords: self.coords.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    /// Re-truncates at `depth`.
    pub fn with_depth(&self, depth: usize) -> Self {
        LieElement {
            letters: self.letters,
            depth,
            coords: self
                .coords
                .iter()
                .filter(|(k, _)| k.0 <= depth)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.letters == other.letters && self.depth == other.depth
    }
}

impl std::fmt::Debug for LieElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|((d, i), c)| format!("{}@({},{})", crate::rational::format_rational(c), d, i))
            .collect();
        write!(f, "Lie[{}]", parts.join(", "))
    }
}

impl<'a> AddAssign<&'a LieElement> for LieElement {
    fn add_assign(&mut self, rhs: &'a LieElement) {
        assert!(self.compatible(rhs), "Lie sum of mismatched shapes");
        for (&(d, i), c) in &rhs.coords {
            self.add_coeff(d, i, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a LieElement> for LieElement {
    fn sub_assign(&mut self, rhs: &'a LieElement) {
        assert!(self.compatible(rhs), "Lie difference of mismatched shapes");
        for (&(d, i), c) in &rhs.coords {
            self.add_coeff(d, i, -c.clone());
        }
    }
}

impl<'a> Add<&'a LieElement> for &'a LieElement {
    type Output = LieElement;

    fn add(self, rhs: &'a LieElement) -> LieElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a LieElement> for &'a LieElement {
    type Output = LieElement;

    fn sub(self, rhs: &'a LieElement) -> LieElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for LieElement {
    type Output = LieElement;

    fn add(mut self, rhs: LieElement) -> LieElement {
        self += &rhs;
        self
    }
}

impl Sub for LieElement {
    type Output = LieElement;

    fn sub(mut self, rhs: LieElement) -> LieElement {
        self -= &rhs;
        self
    }
}

impl Neg for &LieElement {
    type Output = LieElement;

    fn neg(self) -> LieElement {
        self.scale(&-Rational::one())
    }
}

impl Neg for LieElement {
    type Output = LieElement;

    fn neg(self) -> LieElement {
        (&self).neg()
    }
}
