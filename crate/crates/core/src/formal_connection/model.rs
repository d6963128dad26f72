//! Finite CDGA models with Hodge-type decomposition data.

use crate::error::{Error, Result};
use crate::linalg::{add_vectors, is_zero_vector, scaled, zero_vector, Matrix, RowSpace, Vector};
use crate::rational::{rat, Rational};
use num_traits::Zero;

/// Sparse structure constants: `e_a · e_b = Σ c e_k`.
pub type ProductTable = Vec<Vec<Vec<(usize, Rational)>>>;

/// A finite-dimensional commutative differential graded algebra together with a
/// homotopy `h` of degree `−1`. The harmonic projection is `P = 1 − dh − hd`.
#[derive(Clone, Debug, PartialEq)]
pub struct CDGAModel {
    labels: Vec<String>,
    degrees: Vec<usize>,
    d: Matrix,
    products: ProductTable,
    h: Matrix,
    harmonic_projection: Matrix,
    /// Positive-degree harmonic basis, ordered by degree then echelon pivot.
    harmonic_basis: Vec<Vector>,
    harmonic_degrees: Vec<usize>,
    harmonic_space: Vec<RowSpace>,
}

/// Which of the usual side conditions `h² = 0`, `hP = 0`, `Ph = 0` the homotopy meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideConditions {
    pub h_squared_zero: bool,
    pub h_kills_harmonics: bool,
    pub h_image_has_no_harmonic_part: bool,
}

impl SideConditions {
    pub fn all(&self) -> bool {
        self.h_squared_zero && self.h_kills_harmonics && self.h_image_has_no_harmonic_part
    }
}

fn inconsistent(msg: String) -> Error {
    Error::ModelInconsistency(msg)
}

impl CDGAModel {
    /// Validates `d² = 0`, degree bookkeeping, graded commutativity, associativity,
    /// the Leibniz rule, and that `P = 1 − dh − hd` is a projection onto a
    /// complement of the coboundaries inside the cocycles.
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<usize>,
        d: Matrix,
        products: ProductTable,
        h: Matrix,
    ) -> Result<Self> {
        let n = degrees.len();
        if labels.len() != n
            || d.rows() != n
            || d.cols() != n
            || h.rows() != n
            || h.cols() != n
            || products.len() != n
            || products.iter().any(|row| row.len() != n)
        {
            return Err(Error::DimensionMismatch(format!(
                "model with {n} basis elements has inconsistent table sizes"
            )));
        }
        for a in 0..n {
            for b in 0..n {
                if !d.get(b, a).is_zero() && degrees[b] != degrees[a] + 1 {
                    return Err(inconsistent(format!(
                        "d({}) has a component on {} of the wrong degree",
                        labels[a], labels[b]
                    )));
                }
                if !h.get(b, a).is_zero() && degrees[b] + 1 != degrees[a] {
                    return Err(inconsistent(format!(
                        "h({}) has a component on {} of the wrong degree",
                        labels[a], labels[b]
                    )));
                }
                for (k, c) in &products[a][b] {
                    if *k >= n {
                        return Err(Error::DimensionMismatch(format!(
                            "product index {k} out of range"
                        )));
                    }
                    if !c.is_zero() && degrees[*k] != degrees[a] + degrees[b] {
                        return Err(inconsistent(format!(
                            "{}·{} has a component on {} of the wrong degree",
                            labels[a], labels[b], labels[*k]
                        )));
                    }
                }
            }
        }
        let products = products
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|entries| {
                        let mut merged: std::collections::BTreeMap<usize, Rational> = Default::default();
                        for (k, c) in entries {
                            *merged.entry(k).or_insert_with(Rational::zero) += c;
                        }
                        merged.into_iter().filter(|(_, c)| !c.is_zero()).collect()
                    })
                    .collect()
            })
            .collect();
        let mut model = CDGAModel {
            labels,
            degrees,
            d,
            products,
            h,
            harmonic_projection: Matrix::zeros(n, n),
            harmonic_basis: Vec::new(),
            harmonic_degrees: Vec::new(),
            harmonic_space: Vec::new(),
        };
        model.check_algebra()?;
        model.build_decomposition()?;
        Ok(model)
    }

    fn check_algebra(&self) -> Result<()> {
        let n = self.dim();
        if !self.d.mul(&self.d).is_zero() {
            return Err(inconsistent("d² ≠ 0".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.product(&self.basis_vector(a), &self.basis_vector(b));
                let ba = self.product(&self.basis_vector(b), &self.basis_vector(a));
                let sign = rat(if (self.degrees[a] * self.degrees[b]).is_multiple_of(2) { 1 } else { -1 });
                if ab != scaled(&ba, &sign) {
                    return Err(inconsistent(format!(
                        "{}·{} violates graded commutativity",
                        self.labels[a], self.labels[b]
                    )));
                }
                let dab = self.d.mul_vec(&ab);
                let leibniz = add_vectors(
                    &self.product(&self.d.column(a), &self.basis_vector(b)),
                    &scaled(
                        &self.product(&self.basis_vector(a), &self.d.column(b)),
                        &self.sign(a),
                    ),
                );
                if dab != leibniz {
                    return Err(inconsistent(format!(
                        "d({}·{}) violates the Leibniz rule",
                        self.labels[a], self.labels[b]
                    )));
                }
                for c in 0..n {
                    let left = self.product(&ab, &self.basis_vector(c));
                    let right = self.product(
                        &self.basis_vector(a),
                        &self.product(&self.basis_vector(b), &self.basis_vector(c)),
                    );
                    if left != right {
                        return Err(inconsistent(format!(
                            "({0}·{1})·{2} ≠ {0}·({1}·{2})",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn build_decomposition(&mut self) -> Result<()> {
        let n = self.dim();
        let p = Matrix::identity(n)
            .sub(&self.d.mul(&self.h))
            .sub(&self.h.mul(&self.d));
        if p.mul(&p) != p {
            return Err(inconsistent("1 − dh − hd is not a projection".into()));
        }
        if !self.d.mul(&p).is_zero() || !p.mul(&self.d).is_zero() {
            return Err(inconsistent(
                "harmonic projection does not annihilate d on either side".into(),
            ));
        }
        let top = self.degrees.iter().copied().max().unwrap_or(0);
        let mut spaces = Vec::with_capacity(top + 1);
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        for deg in 0..=top {
            let space = RowSpace::from_vectors(
                n,
                (0..n).filter(|&a| self.degrees[a] == deg).map(|a| p.column(a)),
            );
            if deg > 0 {
                let mut rows: Vec<(usize, Vector)> = space
                    .pivots()
                    .iter()
                    .copied()
                    .zip(space.basis().iter().cloned())
                    .collect();
                rows.sort_by_key(|(pivot, _)| *pivot);
                for (_, v) in rows {
                    basis.push(v);
                    degrees.push(deg);
                }
            }
            spaces.push(space);
        }
        self.harmonic_projection = p;
        self.harmonic_basis = basis;
        self.harmonic_degrees = degrees;
        self.harmonic_space = spaces;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn differential(&self) -> &Matrix {
        &self.d
    }

    pub fn homotopy(&self) -> &Matrix {
        &self.h
    }

    pub fn products(&self) -> &ProductTable {
        &self.products
    }

    pub fn harmonic_projection(&self) -> &Matrix {
        &self.harmonic_projection
    }

    /// The positive-degree harmonic forms dual to the suspended homology basis.
    pub fn harmonic_basis(&self) -> &[Vector] {
        &self.harmonic_basis
    }

    pub fn harmonic_degrees(&self) -> &[usize] {
        &self.harmonic_degrees
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn basis_vector(&self, a: usize) -> Vector {
        let mut v = zero_vector(self.dim());
        v[a] = rat(1);
        v
    }

    /// `(−1)^{|e_a|}`.
    pub fn sign(&self, a: usize) -> Rational {
        rat(if self.degrees[a].is_multiple_of(2) { 1 } else { -1 })
    }

    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = zero_vector(self.dim());
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let c = xa * yb;
                for (k, s) in &self.products[a][b] {
                    out[*k] += &c * s;
                }
            }
        }
        out
    }

    pub fn d(&self, x: &[Rational]) -> Vector {
        self.d.mul_vec(x)
    }

    pub fn h(&self, x: &[Rational]) -> Vector {
        self.h.mul_vec(x)
    }

    pub fn project(&self, x: &[Rational]) -> Vector {
        self.harmonic_projection.mul_vec(x)
    }

    /// `ε(x) = Σ (−1)^{|e_a|} x_a e_a`.
    pub fn epsilon(&self, x: &[Rational]) -> Vector {
        x.iter()
            .enumerate()
            .map(|(a, c)| if self.degrees[a].is_multiple_of(2) { c.clone() } else { -c.clone() })
            .collect()
    }

    /// Whether every nonzero component of `x` has degree `deg`.
    pub fn is_homogeneous(&self, x: &[Rational], deg: usize) -> bool {
        x.iter()
            .enumerate()
            .all(|(a, c)| c.is_zero() || self.degrees[a] == deg)
    }

    /// Coordinates of the class of a cocycle in the harmonic basis.
    pub fn cohomology_coords(&self, z: &[Rational]) -> Result<Vector> {
        if !is_zero_vector(&self.d(z)) {
            return Err(Error::Precondition("element is not closed".into()));
        }
        let pz = self.project(z);
        let mut out = Vec::with_capacity(self.harmonic_basis.len());
        for deg in 1..self.harmonic_space.len() {
            let part: Vector = pz
                .iter()
                .enumerate()
                .map(|(a, c)| if self.degrees[a] == deg { c.clone() } else { Rational::zero() })
                .collect();
            let space = &self.harmonic_space[deg];
            let coords = space
                .coordinates(&part)
                .ok_or_else(|| inconsistent("projection left the harmonic space".into()))?;
            let mut by_pivot: Vec<(usize, Rational)> =
                space.pivots().iter().copied().zip(coords).collect();
            by_pivot.sort_by_key(|(p, _)| *p);
            out.extend(by_pivot.into_iter().map(|(_, c)| c));
        }
        Ok(out)
    }

    pub fn side_conditions(&self) -> SideConditions {
        SideConditions {
            h_squared_zero: self.h.mul(&self.h).is_zero(),
            h_kills_harmonics: self.h.mul(&self.harmonic_projection).is_zero(),
            h_image_has_no_harmonic_part: self.harmonic_projection.mul(&self.h).is_zero(),
        }
    }

    /// Rank of the pairing `H^p × H^{top−p} → H^top` on harmonic representatives.
    pub fn duality_rank(&self, p: usize) -> usize {
        let top = self.top_degree();
        if p > top {
            return 0;
        }
        let (left, right) = (&self.harmonic_space[p], &self.harmonic_space[top - p]);
        let rows: Vec<Vector> = left
            .basis()
            .iter()
            .map(|x| {
                let mut row = Vec::new();
                for y in right.basis() {
                    row.extend(self.project(&self.product(x, y)));
                }
                row
            })
            .collect();
        let cols = right.dim() * self.dim();
        Matrix::from_rows(rows, cols).rank()
    }

    /// The same model in new coordinates `y = F x`. `F` must be invertible and send
    /// each basis vector to a combination of new basis vectors of its degree.
    pub fn change_coordinates(&self, f: &Matrix, new_labels: Vec<String>, new_degrees: Vec<usize>) -> Result<Self> {
        let n = self.dim();
        if f.rows() != n || f.cols() != n || new_degrees.len() != n || new_labels.len() != n {
            return Err(Error::DimensionMismatch("coordinate change has the wrong size".into()));
        }
        let finv = f
            .inverse()
            .ok_or_else(|| Error::Precondition("coordinate change is singular".into()))?;
        for a in 0..n {
            for b in 0..n {
                if !f.get(b, a).is_zero() && new_degrees[b] != self.degrees[a] {
                    return Err(Error::Precondition(format!(
                        "coordinate change mixes degrees at ({b}, {a})"
                    )));
                }
            }
        }
        let d = f.mul(&self.d).mul(&finv);
        let h = f.mul(&self.h).mul(&finv);
        let mut products: ProductTable = vec![vec![Vec::new(); n]; n];
        for (a, row) in products.iter_mut().enumerate() {
            let x = finv.column(a);
            for (b, slot) in row.iter_mut().enumerate() {
                let y = finv.column(b);
                let z = f.mul_vec(&self.product(&x, &y));
                *slot = z
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
            }
        }
        CDGAModel::new(new_labels, new_degrees, d, products, h)
    }

    /// Transport along a degree-preserving algebra automorphism `F`: same algebra,
    /// homotopy `F h F⁻¹`.
    pub fn pushforward(&self, f: &Matrix) -> Result<Self> {
        let pushed = self.change_coordinates(f, self.labels.clone(), self.degrees.clone())?;
        if pushed.d != self.d || pushed.products != self.products {
            return Err(Error::Precondition(
                "map is not a differential graded algebra automorphism".into(),
            ));
        }
        Ok(pushed)
    }

    /// Reorders the basis: new element `j` is old element `perm[j]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dim();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Precondition("not a permutation of the basis".into()));
        }
        let mut f = Matrix::zeros(n, n);
        for (j, &p) in perm.iter().enumerate() {
            f.set(j, p, rat(1));
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let degrees = perm.iter().map(|&p| self.degrees[p]).collect();
        self.change_coordinates(&f, labels, degrees)
    }

    /// Matrix of the map on suspended homology induced by a coordinate change `F`
    /// to `target`: column `i` is `F_* X_i` in the target's basis.
    pub fn homology_map(&self, f: &Matrix, target: &CDGAModel) -> Result<Matrix> {
        let finv = f
            .inverse()
            .ok_or_else(|| Error::Precondition("coordinate change is singular".into()))?;
        let m = self.harmonic_basis.len();
        if target.harmonic_basis.len() != m {
            return Err(Error::Incompatible("models have different cohomology".into()));
        }
        let mut k = Matrix::zeros(m, m);
        for (j, hj) in target.harmonic_basis.iter().enumerate() {
            let coords = self.cohomology_coords(&finv.mul_vec(hj))?;
            for (i, c) in coords.into_iter().enumerate() {
                k.set(j, i, c);
            }
        }
        Ok(k)
    }
}

fn product_entry(table: &mut ProductTable, a: usize, b: usize, k: usize, c: i64) {
    table[a][b].push((k, rat(c)));
}

/// The cohomology ring of the closed genus-`g` surface with zero differential and
/// zero homotopy: basis `1, a_1..a_g, b_1..b_g, t` with `a_i b_i = t = −b_i a_i`.
pub fn surface_model(g: usize) -> Result<CDGAModel> {
    if g == 0 {
        return Err(Error::Precondition("genus must be at least 1".into()));
    }
    let n = 2 * g + 2;
    let top = n - 1;
    let mut labels = vec!["1".to_string()];
    labels.extend((1..=g).map(|i| format!("a{i}")));
    labels.extend((1..=g).map(|i| format!("b{i}")));
    labels.push("t".into());
    let mut degrees = vec![0];
    degrees.extend(std::iter::repeat_n(1, 2 * g));
    degrees.push(2);
    let mut products: ProductTable = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        product_entry(&mut products, 0, a, a, 1);
        if a != 0 {
            product_entry(&mut products, a, 0, a, 1);
        }
    }
    for i in 1..=g {
        product_entry(&mut products, i, i + g, top, 1);
        product_entry(&mut products, i + g, i, top, -1);
    }
    CDGAModel::new(labels, degrees, Matrix::zeros(n, n), products, Matrix::zeros(n, n))
}

/// A six-dimensional model with a nontrivial triple Massey product: the exterior
/// algebra on `x, y, u` (degree 1) with `du = xy`, modulo the ideal `(yu)`.
/// Basis `1, x, y, u, xy, xu`; the homotopy sends `xy ↦ u + c·x`, which for
/// `c ≠ 0` moves the harmonic projection of `u` to `−c·x`.
pub fn massey_model(c: &Rational) -> CDGAModel {
    let labels: Vec<String> = ["1", "x", "y", "u", "xy", "xu"].iter().map(|s| s.to_string()).collect();
    let degrees = vec![0, 1, 1, 1, 2, 2];
    let n = 6;
    let mut d = Matrix::zeros(n, n);
    d.set(4, 3, rat(1));
    let mut h = Matrix::zeros(n, n);
    h.set(3, 4, rat(1));
    h.set(1, 4, c.clone());
    let mut products: ProductTable = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        product_entry(&mut products, 0, a, a, 1);
        if a != 0 {
            product_entry(&mut products, a, 0, a, 1);
        }
    }
    for (a, b, k) in [(1, 2, 4), (1, 3, 5)] {
        product_entry(&mut products, a, b, k, 1);
        product_entry(&mut products, b, a, k, -1);
    }
    CDGAModel::new(labels, degrees, d, products, h).expect("the Massey model is consistent")
}

/// Model with zero differential, zero homotopy and zero products in positive
/// degrees (only the unit acts): basis `1` plus the given positive degrees.
pub fn trivial_model(positive_degrees: &[usize]) -> Result<CDGAModel> {
    if positive_degrees.contains(&0) {
        return Err(Error::Precondition("extra basis elements need positive degree".into()));
    }
    let n = positive_degrees.len() + 1;
    let mut labels = vec!["1".to_string()];
    labels.extend((1..n).map(|i| format!("e{i}")));
    let mut degrees = vec![0];
    degrees.extend_from_slice(positive_degrees);
    let mut products: ProductTable = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        product_entry(&mut products, 0, a, a, 1);
        if a != 0 {
            product_entry(&mut products, a, 0, a, 1);
        }
    }
    CDGAModel::new(labels, degrees, Matrix::zeros(n, n), products, Matrix::zeros(n, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_ring() {
        let m = surface_model(1).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(m.product(&m.basis_vector(1), &m.basis_vector(2)), m.basis_vector(3));
        assert_eq!(m.harmonic_basis().len(), 3);
        assert!(m.side_conditions().all());
    }

    #[test]
    fn genus_two_duality_is_nondegenerate() {
        let m = surface_model(2).unwrap();
        assert_eq!(m.duality_rank(1), 4);
        assert_eq!(m.duality_rank(0), 1);
    }

    #[test]
    fn massey_model_cohomology() {
        let m = massey_model(&rat(0));
        assert_eq!(m.harmonic_degrees(), &[1, 1, 2]);
        assert!(m.side_conditions().all());
        let skewed = massey_model(&rat(3));
        assert_eq!(skewed.harmonic_degrees(), &[1, 1, 2]);
        assert!(skewed.side_conditions().all());
        let mut expected = zero_vector(6);
        expected[1] = rat(-3);
        assert_eq!(skewed.project(&skewed.basis_vector(3)), expected);
    }

    #[test]
    fn broken_homotopy_is_rejected() {
        let m = massey_model(&rat(0));
        let mut h = m.homotopy().clone();
        h.set(3, 4, rat(2));
        let err = CDGAModel::new(
            m.labels().to_vec(),
            m.degrees().to_vec(),
            m.differential().clone(),
            m.products().clone(),
            h,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ModelInconsistency(_)));
    }

    #[test]
    fn commutativity_violation_is_rejected() {
        let m = surface_model(1).unwrap();
        let mut p = m.products().clone();
        p[2][1] = vec![(3, rat(1))];
        let err = CDGAModel::new(
            m.labels().to_vec(),
            m.degrees().to_vec(),
            m.differential().clone(),
            p,
            m.homotopy().clone(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ModelInconsistency(_)));
    }
}
