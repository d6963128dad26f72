//! The free Lie algebra on `n` letters in the Lyndon basis, truncated at a fixed degree,
//! and homogeneous ideals of it.
//!
//! Basis element `(k, i)` is the standard bracketing of the `i`-th Lyndon word of
//! length `k`. Its tensor expansion is that word plus lexicographically larger
//! words, which makes conversion from tensors a triangular elimination.

mod element;
mod ideal;
mod lyndon;
mod quotient;
mod text;

pub use element::LieElement;
pub use ideal::HomogeneousIdeal;
pub use quotient::QuotientLie;
pub use lyndon::{
    is_lyndon, lyndon_basis, lyndon_words, standard_factorization, witt_dim, LyndonBasis,
};

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;
use crate::tensor::{TruncatedTensor, Word};

struct DegreeData {
    basis: LyndonBasis,
    /// Tensor expansion of each basis element, as sorted word/coefficient lists.
    polys: Vec<Vec<(Word, Rational)>>,
    index: HashMap<Word, usize>,
}

type BracketKey = (usize, usize, usize, usize);

/// Context for the free Lie algebra on `letters` generators through degree `depth`.
///
/// Bases are built lazily per degree; basis brackets are memoized. Both caches
/// are deterministic, so sharing a context between threads is safe.
pub struct FreeLie {
    letters: usize,
    depth: usize,
    degrees: Vec<OnceLock<DegreeData>>,
    bracket_cache: RwLock<HashMap<BracketKey, Vec<(usize, Rational)>>>,
}

impl std::fmt::Debug for FreeLie {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FreeLie(n={}, N={})", self.letters, self.depth)
    }
}

impl FreeLie {
    pub fn new(letters: usize, depth: usize) -> Self {
        assert!(letters >= 1, "free Lie algebra needs at least one letter");
        FreeLie {
            letters,
            depth,
            degrees: (0..=depth).map(|_| OnceLock::new()).collect(),
            bracket_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn degree(&self, k: usize) -> &DegreeData {
        assert!(
            (1..=self.depth).contains(&k),
            "degree {k} outside 1..={}",
            self.depth
        );
        self.degrees[k].get_or_init(|| self.build_degree(k))
    }

    fn build_degree(&self, k: usize) -> DegreeData {
        let basis = lyndon_basis(self.letters, k);
        let index: HashMap<Word, usize> = basis
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let polys = basis
            .words
            .iter()
            .map(|w| {
                let t = self.lyndon_polynomial(w);
                t.terms().map(|(u, c)| (u.clone(), c.clone())).collect()
            })
            .collect();
        DegreeData {
            basis,
            polys,
            index,
        }
    }

    fn lyndon_polynomial(&self, w: &Word) -> TruncatedTensor {
        match standard_factorization(w) {
            None => TruncatedTensor::letter(self.letters, self.depth, w.letters()[0] as usize),
            Some((u, v)) => {
                let pu = self.basis_tensor(u.len(), self.degree(u.len()).index[&u]);
                let pv = self.basis_tensor(v.len(), self.degree(v.len()).index[&v]);
                pu.commutator(&pv)
            }
        }
    }

    pub fn dim(&self, k: usize) -> usize {
        self.degree(k).basis.len()
    }

    /// Basis indices `((|u|, u), (|v|, v))` of the standard factors of basis element `(k, i)`,
    /// or `None` for a letter.
    pub fn standard_factors(&self, k: usize, i: usize) -> Option<((usize, usize), (usize, usize))> {
        let w = &self.degree(k).basis.words[i];
        standard_factorization(w).map(|(u, v)| {
            let iu = self.degree(u.len()).index[&u];
            let iv = self.degree(v.len()).index[&v];
            ((u.len(), iu), (v.len(), iv))
        })
    }

    pub fn basis(&self, k: usize) -> &LyndonBasis {
        &self.degree(k).basis
    }

    pub fn zero(&self) -> LieElement {
        LieElement::zero(self.letters, self.depth)
    }

    pub fn letter(&self, i: usize) -> LieElement {
        LieElement::letter(self.letters, self.depth, i)
    }

    pub fn basis_element(&self, k: usize, i: usize) -> LieElement {
        LieElement::basis(self.letters, self.depth, k, i)
    }

    pub fn from_component(&self, k: usize, v: &[Rational]) -> LieElement {
        LieElement::from_component(self.letters, self.depth, k, v)
    }

    /// The tensor expansion of basis element `(k, i)`.
    pub fn basis_tensor(&self, k: usize, i: usize) -> TruncatedTensor {
        TruncatedTensor::from_terms(
            self.letters,
            self.depth,
            self.degree(k).polys[i].iter().cloned(),
        )
    }

    fn check(&self, a: &LieElement) -> Result<()> {
        if a.letters() != self.letters || a.depth() != self.depth {
            return Err(Error::DimensionMismatch(format!(
                "Lie element (n={}, N={}) in algebra (n={}, N={})",
                a.letters(),
                a.depth(),
                self.letters,
                self.depth
            )));
        }
        Ok(())
    }

    /// The primitive tensor represented by `a`.
    pub fn tensor_embed(&self, a: &LieElement) -> TruncatedTensor {
        let mut out = TruncatedTensor::zero(self.letters, self.depth);
        for (&(k, i), c) in a.coords() {
            for (w, p) in &self.degree(k).polys[i] {
                out.add_term(w.clone(), c * p);
            }
        }
        out
    }

    /// Lyndon coordinates of the degree-`k` part of `t`, which must be a Lie polynomial.
    pub fn lie_coords(&self, t: &TruncatedTensor, k: usize) -> Result<LieElement> {
        if t.letters() != self.letters || t.depth() != self.depth {
            return Err(Error::DimensionMismatch(format!(
                "tensor (n={}, N={}) in algebra (n={}, N={})",
                t.letters(),
                t.depth(),
                self.letters,
                self.depth
            )));
        }
        let part = t.homogeneous(k);
        if part.is_zero() {
            return Ok(self.zero());
        }
        if k == 0 {
            return Err(Error::NotLieElement {
                defect: part.primitive_defect().to_string(),
            });
        }
        let mut residue: BTreeMap<Word, Rational> =
            part.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        self.eliminate(k, &mut residue)
            .ok_or_else(|| Error::NotLieElement {
                defect: part.primitive_defect().to_string(),
            })
    }

    // Peels off the lexicographically smallest word, which for a Lie polynomial is
    // always Lyndon, until nothing is left. Fails when a non-Lyndon word surfaces.
    fn eliminate(&self, k: usize, residue: &mut BTreeMap<Word, Rational>) -> Option<LieElement> {
        let data = self.degree(k);
        let mut out = self.zero();
        while let Some((w, c)) = residue.pop_first() {
            let &i = data.index.get(&w)?;
            for (u, p) in data.polys[i].iter().skip(1) {
                let slot = residue.entry(u.clone()).or_insert_with(Rational::zero);
                *slot -= &c * p;
                if slot.is_zero() {
                    residue.remove(u);
                }
            }
            out.add_coeff(k, i, c);
        }
        Some(out)
    }

    /// Lyndon coordinates of all positive-degree parts of `t` (constant term must vanish).
    pub fn lie_coords_all(&self, t: &TruncatedTensor) -> Result<LieElement> {
        if !t.constant_term().is_zero() {
            return Err(Error::NotLieElement {
                defect: format!(
                    "constant term {}",
                    crate::rational::format_rational(&t.constant_term())
                ),
            });
        }
        let mut out = self.zero();
        for k in 1..=self.depth {
            out += &self.lie_coords(t, k)?;
        }
        Ok(out)
    }

    fn basis_bracket(&self, d1: usize, i1: usize, d2: usize, i2: usize) -> Vec<(usize, Rational)> {
        if (d1, i1) == (d2, i2) {
            return Vec::new();
        }
        if (d1, i1) > (d2, i2) {
            return self
                .basis_bracket(d2, i2, d1, i1)
                .into_iter()
                .map(|(i, c)| (i, -c))
                .collect();
        }
        let key = (d1, i1, d2, i2);
        if let Some(v) = self.bracket_cache.read().unwrap().get(&key) {
            return v.clone();
        }
        let t = self
            .basis_tensor(d1, i1)
            .commutator(&self.basis_tensor(d2, i2));
        let coords = self
            .lie_coords(&t, d1 + d2)
            .expect("commutator of Lie polynomials is a Lie polynomial");
        let v: Vec<(usize, Rational)> = coords.coords().map(|(&(_, i), c)| (i, c.clone())).collect();
        self.bracket_cache
            .write()
            .unwrap()
            .insert(key, v.clone());
        v
    }

    /// `[a, b]`; fails if a nonzero contribution would exceed the truncation degree.
    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        self.check(a)?;
        self.check(b)?;
        if let (Some(da), Some(db)) = (a.max_degree(), b.max_degree()) {
            if da + db > self.depth {
                return Err(Error::TruncationOverflow {
                    degree: da + db,
                    truncation: self.depth,
                });
            }
        }
        Ok(self.bracket_truncated(a, b))
    }

    /// `[a, b]` with contributions above the truncation degree discarded.
    pub fn bracket_truncated(&self, a: &LieElement, b: &LieElement) -> LieElement {
        let mut out = self.zero();
        for (&(d1, i1), c1) in a.coords() {
            for (&(d2, i2), c2) in b.coords() {
                if d1 + d2 > self.depth {
                    continue;
                }
                let prod = c1 * c2;
                for (i, c) in self.basis_bracket(d1, i1, d2, i2) {
                    out.add_coeff(d1 + d2, i, &prod * c);
                }
            }
        }
        out
    }

    /// Matrix of `ad(x_letter)`-from-the-right, `v ↦ [v, x_letter]`, from degree `k` to `k+1`.
    pub fn right_letter_matrix(&self, k: usize, letter: usize) -> Matrix {
        let (rows, cols) = (self.dim(k + 1), self.dim(k));
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..cols {
            for (j, c) in self.basis_bracket(k, i, 1, letter) {
                m.set(j, i, c);
            }
        }
        m
    }

    /// Applies the linear substitution `x_i ↦ Σ_j m[j][i] x_j` to a Lie element.
    pub fn apply_linear(&self, m: &Matrix, a: &LieElement) -> LieElement {
        let t = self.tensor_embed(a).linear_substitute(m);
        self.lie_coords_all(&t)
            .expect("linear substitution preserves Lie polynomials")
    }

    /// The Dynkin projector `w ↦ [..[[a1,a2],a3],..,ak] / k` applied degreewise.
    ///
    /// On Lie polynomials it is the identity, which gives an elimination-free
    /// check of [`FreeLie::lie_coords`].
    pub fn dynkin_projection(&self, t: &TruncatedTensor) -> TruncatedTensor {
        let mut out = TruncatedTensor::zero(self.letters, self.depth);
        for (w, c) in t.terms() {
            let k = w.len();
            if k == 0 {
                continue;
            }
            let letters = w.letters();
            let mut acc = TruncatedTensor::letter(self.letters, self.depth, letters[0] as usize);
            for &l in &letters[1..] {
                let x = TruncatedTensor::letter(self.letters, self.depth, l as usize);
                acc = acc.commutator(&x);
            }
            out += &acc.scale(&(c / Rational::from_integer((k as i64).into())));
        }
        out
    }
}
