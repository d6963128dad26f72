//! Positive derivations of `L/I`, their graded spaces, inner and outer parts,
//! the symplectic action, scaling endomorphisms and the identification `Der¹ ≅ Λ³H`.

mod morita;

pub use morita::{
    is_symplectic, symplectic_form, symplectic_generators, transvection, Lambda3Element, MoritaMap,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::free_lie::{FreeLie, LieElement, QuotientLie};
use crate::linalg::{Matrix, RowSpace, Vector};
use crate::rational::{rat, Rational};

/// Whether derivations live on the quotient `L/I` (values reduced modulo `I`) or
/// on the free algebra subject to preserving `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerMode {
    Quotient,
    Upstairs,
}

/// A positive derivation, determined by its values on the letters.
#[derive(Clone, Debug)]
pub struct Derivation {
    algebra: Arc<QuotientLie>,
    mode: DerMode,
    values: Vec<LieElement>,
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode && self.values == other.values
    }
}

impl Derivation {
    /// Builds a derivation from values on letters, checking positivity and that it
    /// preserves the ideal wherever the truncation can see it.
    pub fn new(algebra: Arc<QuotientLie>, mode: DerMode, values: Vec<LieElement>) -> Result<Self> {
        if values.len() != algebra.letters() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} letters",
                values.len(),
                algebra.letters()
            )));
        }
        if let Some((i, _)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| v.min_degree().is_some_and(|d| d < 2))
        {
            return Err(Error::Precondition(format!(
                "value on X{} has a degree-one part; derivation is not positive",
                i + 1
            )));
        }
        let x = Self::raw(algebra, mode, values);
        for g in x.algebra.ideal().generators() {
            if !x.algebra.is_zero(&x.apply_truncated(g)) {
                return Err(Error::Precondition(format!(
                    "derivation does not preserve the ideal: generator {} is not mapped into it",
                    x.algebra.lie().format(g)
                )));
            }
        }
        Ok(x)
    }

    pub(crate) fn raw(algebra: Arc<QuotientLie>, mode: DerMode, values: Vec<LieElement>) -> Self {
        let values = match mode {
            DerMode::Quotient => values.iter().map(|v| algebra.reduce(v)).collect(),
            DerMode::Upstairs => values,
        };
        Derivation {
            algebra,
            mode,
            values,
        }
    }

    pub fn zero(algebra: Arc<QuotientLie>, mode: DerMode) -> Self {
        let values = vec![algebra.lie().zero(); algebra.letters()];
        Derivation {
            algebra,
            mode,
            values,
        }
    }

    pub fn algebra(&self) -> &Arc<QuotientLie> {
        &self.algebra
    }

    pub fn mode(&self) -> DerMode {
        self.mode
    }

    pub fn values(&self) -> &[LieElement] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(LieElement::is_zero)
    }

    /// Degrees `k` with a nonzero block `H → L_{k+1}`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = self
            .values
            .iter()
            .flat_map(|v| v.coords().map(|(&(d, _), _)| d - 1))
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// The degree-`k` block as a derivation.
    pub fn block(&self, k: usize) -> Derivation {
        Derivation {
            algebra: self.algebra.clone(),
            mode: self.mode,
            values: self.values.iter().map(|v| v.homogeneous(k + 1)).collect(),
        }
    }

    fn lie(&self) -> &FreeLie {
        self.algebra.lie()
    }

    fn apply_basis(
        &self,
        k: usize,
        i: usize,
        memo: &mut HashMap<(usize, usize), LieElement>,
    ) -> LieElement {
        if k == 1 {
            return self.values[i].clone();
        }
        if let Some(v) = memo.get(&(k, i)) {
            return v.clone();
        }
        let lie = self.lie();
        let ((du, iu), (dv, iv)) = lie
            .standard_factors(k, i)
            .expect("non-letters have a standard factorization");
        let xu = self.apply_basis(du, iu, memo);
        let xv = self.apply_basis(dv, iv, memo);
        let mut out = lie.bracket_truncated(&xu, &lie.basis_element(dv, iv));
        out += &lie.bracket_truncated(&lie.basis_element(du, iu), &xv);
        memo.insert((k, i), out.clone());
        out
    }

    /// `X(a)`, dropping contributions above the truncation degree.
    pub fn apply_truncated(&self, a: &LieElement) -> LieElement {
        let mut memo = HashMap::new();
        let mut out = self.lie().zero();
        for (&(k, i), c) in a.coords() {
            out += &self.apply_basis(k, i, &mut memo).scale(c);
        }
        match self.mode {
            DerMode::Quotient => self.algebra.reduce(&out),
            DerMode::Upstairs => out,
        }
    }

    fn top_shift(&self) -> usize {
        self.values
            .iter()
            .filter_map(LieElement::max_degree)
            .max()
            .map_or(0, |d| d - 1)
    }

    /// `X(a)`; fails if some contribution would exceed the truncation degree.
    pub fn apply(&self, a: &LieElement) -> Result<LieElement> {
        let need = a.max_degree().unwrap_or(0) + self.top_shift();
        if !self.is_zero() && !a.is_zero() && need > self.algebra.depth() {
            return Err(Error::TruncationOverflow {
                degree: need,
                truncation: self.algebra.depth(),
            });
        }
        Ok(self.apply_truncated(a))
    }

    fn check_compatible(&self, other: &Derivation) -> Result<()> {
        if self.mode != other.mode
            || self.algebra.letters() != other.algebra.letters()
            || self.algebra.depth() != other.algebra.depth()
            || !self.algebra.ideal().same_spans(other.algebra.ideal())
        {
            return Err(Error::Incompatible(
                "derivations live on different algebras".into(),
            ));
        }
        Ok(())
    }

    /// `[X, Y] = XY − YX`, truncated.
    pub fn bracket_truncated(&self, other: &Derivation) -> Derivation {
        let values = (0..self.values.len())
            .map(|i| {
                &self.apply_truncated(&other.values[i]) - &other.apply_truncated(&self.values[i])
            })
            .collect();
        Derivation::raw(self.algebra.clone(), self.mode, values)
    }

    /// `[X, Y]`; fails if the bracket of the top blocks would exceed the truncation.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        self.check_compatible(other)?;
        if !self.is_zero() && !other.is_zero() {
            let need = self.top_shift() + other.top_shift() + 1;
            if need > self.algebra.depth() {
                return Err(Error::TruncationOverflow {
                    degree: need,
                    truncation: self.algebra.depth(),
                });
            }
        }
        Ok(self.bracket_truncated(other))
    }

    fn map_values(&self, f: impl Fn(usize, &LieElement) -> LieElement) -> Derivation {
        let values = self.values.iter().enumerate().map(|(i, v)| f(i, v)).collect();
        Derivation::raw(self.algebra.clone(), self.mode, values)
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        self.map_values(|i, v| v + &other.values[i])
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        self.map_values(|i, v| v - &other.values[i])
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        self.map_values(|_, v| v.scale(c))
    }

    /// Passes from a derivation of the free algebra preserving `I` to the induced
    /// derivation of `L/I`.
    pub fn project(&self) -> Derivation {
        Derivation::raw(self.algebra.clone(), DerMode::Quotient, self.values.clone())
    }

    /// Equality as derivations of `L/I` (values compared modulo the ideal).
    pub fn agrees_mod_ideal(&self, other: &Derivation) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| self.algebra.is_zero(&(a - b)))
    }

    /// Text form `X1 -> ..., X2 -> ...`.
    pub fn describe(&self) -> String {
        let lie = self.lie();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("x{} -> {}", i + 1, lie.format(v)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// `ad(a) = [a, ·]`.
pub fn inner_der(algebra: Arc<QuotientLie>, mode: DerMode, a: &LieElement) -> Result<Derivation> {
    let lie = algebra.lie().clone();
    let values = (0..algebra.letters())
        .map(|i| lie.bracket(a, &lie.letter(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Derivation::raw(algebra, mode, values))
}

/// `w_t`: multiplies the degree-`k` block by `t^k`.
pub fn scaling_endo(t: &Rational, x: &Derivation) -> Derivation {
    let lie = x.algebra.lie().clone();
    x.map_values(|_, v| {
        let mut out = lie.zero();
        for (&(d, i), c) in v.coords() {
            let mut f = rat(1);
            for _ in 0..d - 1 {
                f *= t;
            }
            out.add_coeff(d, i, c * &f);
        }
        out
    })
}

/// `M·X = M ∘ X ∘ M⁻¹` for a symplectic `M` acting on the letters
/// (column `i` is the image of `X_i`).
pub fn sp_action(m: &Matrix, x: &Derivation) -> Result<Derivation> {
    let n = x.algebra.letters();
    if !n.is_multiple_of(2) || m.rows() != n || m.cols() != n {
        return Err(Error::Precondition(format!(
            "need a {n}×{n} matrix on an even number of letters"
        )));
    }
    if !is_symplectic(m) {
        return Err(Error::Precondition("matrix is not symplectic".into()));
    }
    gl_action(m, x)
}

/// `M·X = M ∘ X ∘ M⁻¹` for any invertible `M` preserving the ideal.
pub fn gl_action(m: &Matrix, x: &Derivation) -> Result<Derivation> {
    let n = x.algebra.letters();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!("need a {n}×{n} matrix")));
    }
    let minv = m
        .inverse()
        .ok_or_else(|| Error::Precondition("matrix is singular".into()))?;
    let lie = x.algebra.lie().clone();
    if !x.algebra.ideal().is_preserved_by(&lie, m) {
        return Err(Error::Precondition(
            "matrix does not preserve the ideal".into(),
        ));
    }
    let moved: Vec<LieElement> = x.values.iter().map(|v| lie.apply_linear(m, v)).collect();
    Ok(x.map_values(|i, _| {
        let mut out = lie.zero();
        for (j, mv) in moved.iter().enumerate() {
            let c = minv.get(j, i);
            if *c != rat(0) {
                out += &mv.scale(c);
            }
        }
        out
    }))
}

/// `Der^k` of an algebra in a chosen mode, with its inner subspace.
///
/// Coordinates of a degree-`k` derivation are its values `X(X_i)` read off at the
/// column indices of `L_{k+1}`, letter-major: in quotient mode the columns are the
/// quotient basis, upstairs they are all Lyndon indices.
#[derive(Clone, Debug)]
pub struct DerSpace {
    algebra: Arc<QuotientLie>,
    mode: DerMode,
    degree: usize,
    columns: Vec<usize>,
    basis: Vec<Vector>,
    span: RowSpace,
    inner: RowSpace,
    outer: RowSpace,
    ad_kernel: usize,
}

impl DerSpace {
    /// Solves the ideal-preservation constraints `X(g) ∈ I` for degree-`k`
    /// derivations. Each generator of degree `d` needs the truncation to reach `k + d`.
    pub fn new(algebra: Arc<QuotientLie>, mode: DerMode, k: usize) -> Result<Self> {
        let depth = algebra.depth();
        let lie = algebra.lie().clone();
        if k == 0 || k + 1 > depth {
            return Err(Error::TruncationOverflow {
                degree: k + 1,
                truncation: depth,
            });
        }
        let gens: Vec<LieElement> = algebra
            .ideal()
            .generators()
            .iter()
            .filter(|g| !g.is_zero())
            .cloned()
            .collect();
        for g in &gens {
            let d = g.max_degree().expect("nonzero");
            if k + d > depth {
                return Err(Error::TruncationOverflow {
                    degree: k + d,
                    truncation: depth,
                });
            }
        }
        let n = algebra.letters();
        let columns: Vec<usize> = match mode {
            DerMode::Quotient => algebra.basis_indices(k + 1),
            DerMode::Upstairs => (0..lie.dim(k + 1)).collect(),
        };
        let unknowns = n * columns.len();
        let unit = |i: usize, col: usize| {
            let mut values = vec![lie.zero(); n];
            values[i] = LieElement::basis(n, depth, k + 1, col);
            Derivation::raw(algebra.clone(), mode, values)
        };
        let basis: Vec<Vector> = if gens.is_empty() {
            (0..unknowns)
                .map(|u| {
                    let mut v = vec![rat(0); unknowns];
                    v[u] = rat(1);
                    v
                })
                .collect()
        } else {
            let mut cols: Vec<Vector> = Vec::with_capacity(unknowns);
            for i in 0..n {
                for &c in &columns {
                    let x = unit(i, c);
                    let mut col = Vec::new();
                    for g in &gens {
                        let d = g.max_degree().expect("nonzero");
                        let r = algebra.reduce(&x.apply_truncated(g));
                        col.extend(r.component(k + d, lie.dim(k + d)));
                    }
                    cols.push(col);
                }
            }
            let rows = cols.first().map_or(0, Vec::len);
            Matrix::from_columns(&cols, rows).nullspace()
        };
        let span = RowSpace::from_vectors(unknowns, basis);
        let basis = span.basis().to_vec();
        let mut space = DerSpace {
            algebra: algebra.clone(),
            mode,
            degree: k,
            columns,
            basis,
            span,
            inner: RowSpace::new(unknowns),
            outer: RowSpace::new(unknowns),
            ad_kernel: 0,
        };
        let sources = match mode {
            DerMode::Quotient => algebra.basis_indices(k),
            DerMode::Upstairs => (0..lie.dim(k)).collect(),
        };
        let mut inner = RowSpace::new(unknowns);
        for &b in &sources {
            let ad = inner_der(algebra.clone(), mode, &lie.basis_element(k, b))?;
            inner.insert(space.raw_coords(&ad));
        }
        space.ad_kernel = sources.len() - inner.dim();
        let outer = RowSpace::from_vectors(unknowns, space.basis.iter().map(|v| inner.reduce(v)));
        space.inner = inner;
        space.outer = outer;
        Ok(space)
    }

    pub fn algebra(&self) -> &Arc<QuotientLie> {
        &self.algebra
    }

    pub fn mode(&self) -> DerMode {
        self.mode
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn inner_dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn outer_dim(&self) -> usize {
        self.outer.dim()
    }

    /// Dimension of the kernel of `ad` on degree-`k` elements (central elements).
    pub fn ad_kernel_dim(&self) -> usize {
        self.ad_kernel
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn inner_span(&self) -> &RowSpace {
        &self.inner
    }

    fn raw_coords(&self, x: &Derivation) -> Vector {
        let lie = self.algebra.lie();
        let k1 = self.degree + 1;
        let mut out = Vec::with_capacity(self.columns.len() * x.values.len());
        for v in &x.values {
            let v = match self.mode {
                DerMode::Quotient => self.algebra.reduce(&v.homogeneous(k1)),
                DerMode::Upstairs => v.homogeneous(k1),
            };
            let comp = v.component(k1, lie.dim(k1));
            out.extend(self.columns.iter().map(|&c| comp[c].clone()));
        }
        out
    }

    /// Coordinates of the degree-`k` block of `x` with respect to [`DerSpace::basis`].
    pub fn der_coords(&self, x: &Derivation) -> Result<Vector> {
        self.span.coordinates(&self.raw_coords(x)).ok_or_else(|| {
            Error::Precondition(format!(
                "derivation is not in Der^{} of this algebra",
                self.degree
            ))
        })
    }

    /// Raw coordinates (values at the column indices) of the degree-`k` block of `x`;
    /// fails if it is not in the space.
    pub fn coords(&self, x: &Derivation) -> Result<Vector> {
        let v = self.raw_coords(x);
        if !self.span.contains(&v) {
            return Err(Error::Precondition(format!(
                "derivation is not in Der^{} of this algebra",
                self.degree
            )));
        }
        Ok(v)
    }

    pub fn contains(&self, x: &Derivation) -> bool {
        self.span.contains(&self.raw_coords(x))
    }

    /// The derivation with the given coordinates.
    pub fn derivation(&self, v: &[Rational]) -> Derivation {
        let lie = self.algebra.lie();
        let n = self.algebra.letters();
        let c = self.columns.len();
        let mut values = vec![lie.zero(); n];
        for (i, value) in values.iter_mut().enumerate() {
            for (j, &col) in self.columns.iter().enumerate() {
                let x = &v[i * c + j];
                if *x != rat(0) {
                    value.add_coeff(self.degree + 1, col, x.clone());
                }
            }
        }
        Derivation::raw(self.algebra.clone(), self.mode, values)
    }

    pub fn basis_derivation(&self, j: usize) -> Derivation {
        self.derivation(&self.basis[j])
    }

    pub fn is_inner(&self, x: &Derivation) -> bool {
        self.inner.contains(&self.raw_coords(x))
    }

    /// Coordinates of the class of `x` in `ODer^k = Der^k / IDer^k`.
    pub fn oder_coords(&self, x: &Derivation) -> Result<Vector> {
        let v = self.coords(x)?;
        Ok(self
            .outer
            .coordinates(&self.inner.reduce(&v))
            .expect("normal forms of Der^k lie in the outer span"))
    }

    /// A derivation representing the `j`-th basis class of `ODer^k`.
    pub fn outer_representative(&self, j: usize) -> Derivation {
        self.derivation(&self.outer.basis()[j])
    }
}

/// Rank of the reduction map from `I`-preserving derivations of the free algebra
/// onto derivations of the quotient, in one degree.
pub fn surjection_rank(upstairs: &DerSpace, quotient: &DerSpace) -> Result<usize> {
    if upstairs.mode != DerMode::Upstairs || quotient.mode != DerMode::Quotient {
        return Err(Error::Precondition("expected an upstairs and a quotient space".into()));
    }
    if upstairs.degree != quotient.degree {
        return Err(Error::Incompatible("spaces of different degree".into()));
    }
    let mut image = RowSpace::new(quotient.columns.len() * quotient.algebra.letters());
    for j in 0..upstairs.dim() {
        let x = upstairs.basis_derivation(j).project();
        image.insert(quotient.coords(&x)?);
    }
    Ok(image.dim())
}

/// One row of a dimension table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimRow {
    pub degree: usize,
    pub der: usize,
    pub inner: usize,
    pub outer: usize,
    pub ad_kernel: usize,
}

impl fmt::Display for DimRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "degree={} der={} ider={} oder={} ad_kernel={}",
            self.degree, self.der, self.inner, self.outer, self.ad_kernel
        )
    }
}

pub fn dimension_table(algebra: Arc<QuotientLie>, mode: DerMode, degrees: &[usize]) -> Result<Vec<DimRow>> {
    degrees
        .iter()
        .map(|&k| {
            let s = DerSpace::new(algebra.clone(), mode, k)?;
            Ok(DimRow {
                degree: k,
                der: s.dim(),
                inner: s.inner_dim(),
                outer: s.outer_dim(),
                ad_kernel: s.ad_kernel_dim(),
            })
        })
        .collect()
}

/// Right-aligned text table of dimension rows.
pub fn format_dimension_table(rows: &[DimRow]) -> String {
    let mut out = format!("{:>6} {:>8} {:>8} {:>8} {:>9}\n", "degree", "Der", "IDer", "ODer", "ker ad");
    for r in rows {
        out.push_str(&format!(
            "{:>6} {:>8} {:>8} {:>8} {:>9}\n",
            r.degree, r.der, r.inner, r.outer, r.ad_kernel
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_lie::witt_dim;

    #[test]
    fn free_derivation_dimensions() {
        for n in 2..=3 {
            let q = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(n, 4))));
            for k in 1..=3 {
                let s = DerSpace::new(q.clone(), DerMode::Quotient, k).unwrap();
                assert_eq!(s.dim() as u64, n as u64 * witt_dim(n, k + 1));
                // ad is injective on a free Lie algebra with at least two letters
                assert_eq!(s.inner_dim() as u64, witt_dim(n, k));
                assert_eq!(s.ad_kernel_dim(), 0);
            }
        }
    }

    #[test]
    fn torus_has_no_degree_one_derivations() {
        let q = Arc::new(QuotientLie::surface(1, 3));
        let s = DerSpace::new(q, DerMode::Quotient, 1).unwrap();
        assert_eq!(s.dim(), 0);
        // the quotient is abelian, so every letter is central
        assert_eq!(s.ad_kernel_dim(), 2);
    }

    #[test]
    fn inner_derivation_of_omega_vanishes() {
        let q = Arc::new(QuotientLie::surface(2, 3));
        let omega = q.ideal().generators()[0].clone();
        let x = inner_der(q, DerMode::Quotient, &omega).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn leibniz_on_a_bracket() {
        let q = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(2, 4))));
        let lie = q.lie().clone();
        let x = Derivation::new(
            q,
            DerMode::Quotient,
            vec![lie.parse("[x1,x2]").unwrap(), lie.parse("-2 * [x1,x2]").unwrap()],
        )
        .unwrap();
        let (a, b) = (lie.letter(0), lie.parse("[x1,x2]").unwrap());
        let lhs = x.apply(&lie.bracket(&a, &b).unwrap()).unwrap();
        let rhs = &lie.bracket_truncated(&x.apply(&a).unwrap(), &b)
            + &lie.bracket_truncated(&a, &x.apply(&b).unwrap());
        assert_eq!(lhs, rhs);
        assert!(x.apply(&lie.parse("[x1,[x1,[x1,x2]]]").unwrap()).is_err());
    }

    #[test]
    fn non_preserving_values_are_rejected() {
        let q = Arc::new(QuotientLie::surface(2, 3));
        let lie = q.lie().clone();
        let mut values = vec![lie.zero(); 4];
        values[0] = lie.parse("[x1,x2]").unwrap();
        assert!(Derivation::new(q, DerMode::Quotient, values).is_err());
    }

    #[test]
    fn degree_one_values_are_rejected() {
        let q = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(2, 3))));
        let lie = q.lie().clone();
        assert!(Derivation::new(q, DerMode::Quotient, vec![lie.letter(1), lie.zero()]).is_err());
    }
}
