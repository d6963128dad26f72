//! Chevalley–Eilenberg cochain complexes of finite graded Lie algebras, their
//! cohomology and invariant subcomplexes, crossed homomorphisms with cup-power
//! cochains, and the discrete Maurer–Cartan defect.

mod crossed;
mod exterior;
mod mc;
mod text;
mod truncation;

pub use crossed::{
    cup_power_cochain, group_coboundary, CompositionTable, CrossedHom, CoboundaryFailure,
};
pub use exterior::{exterior_power, wedge_vectors};
pub use mc::{holonomy, mc_defect, EdgeCochain, TwoCell};
pub use text::{SerializedComplex, SparseMatrix, SIGN_CONVENTION};
pub use truncation::DerivationTruncation;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, RowSpace, Vector};
use crate::rational::{rat, Rational};

/// A finite-dimensional Lie algebra with a weight grading, given by structure
/// constants `[e_i, e_j] = Σ_k c_{ij}^k e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLieData {
    labels: Vec<String>,
    weights: Vec<i64>,
    /// `brackets[i][j]` is `[e_i, e_j]` in sparse form, for all ordered pairs.
    brackets: Vec<Vec<BTreeMap<usize, Rational>>>,
}

impl FiniteLieData {
    /// Builds the algebra from the brackets `[e_i, e_j]` with `i < j`; missing pairs
    /// bracket to zero. Checks weights and the Jacobi identity.
    pub fn new(
        labels: Vec<String>,
        weights: Vec<i64>,
        brackets: &[((usize, usize), Vec<(usize, Rational)>)],
    ) -> Result<Self> {
        let d = labels.len();
        if weights.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {d} basis elements",
                weights.len()
            )));
        }
        let mut table = vec![vec![BTreeMap::new(); d]; d];
        for ((i, j), terms) in brackets {
            let (i, j) = (*i, *j);
            if i >= d || j >= d || terms.iter().any(|(k, _)| *k >= d) {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket [{i},{j}] refers to a basis element beyond {d}"
                )));
            }
            if i == j {
                if terms.iter().any(|(_, c)| *c != rat(0)) {
                    return Err(Error::InvalidAlgebra(format!(
                        "[{}, {}] must vanish",
                        labels[i], labels[i]
                    )));
                }
                continue;
            }
            for (k, c) in terms {
                if *c == rat(0) {
                    continue;
                }
                if weights[*k] != weights[i] + weights[j] {
                    return Err(Error::InvalidAlgebra(format!(
                        "[{}, {}] has a {} component of weight {}, expected {}",
                        labels[i],
                        labels[j],
                        labels[*k],
                        weights[*k],
                        weights[i] + weights[j]
                    )));
                }
                add_entry(&mut table[i][j], *k, c.clone());
                add_entry(&mut table[j][i], *k, -c.clone());
            }
        }
        let data = FiniteLieData {
            labels,
            weights,
            brackets: table,
        };
        data.check_jacobi()?;
        Ok(data)
    }

    /// The abelian algebra of dimension `d`, all weights one.
    pub fn abelian(d: usize) -> Self {
        FiniteLieData {
            labels: (1..=d).map(|i| format!("e{i}")).collect(),
            weights: vec![1; d],
            brackets: vec![vec![BTreeMap::new(); d]; d],
        }
    }

    /// `sl₂` with basis `e, f, h`, weights `1, −1, 0`.
    pub fn sl2() -> Self {
        let labels = vec!["e".to_string(), "f".to_string(), "h".to_string()];
        FiniteLieData::new(
            labels,
            vec![1, -1, 0],
            &[
                ((0, 1), vec![(2, rat(1))]),
                ((2, 0), vec![(0, rat(2))]),
                ((2, 1), vec![(1, rat(-2))]),
            ],
        )
        .expect("sl2 is a Lie algebra")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// `[e_i, e_j]` in sparse form.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &BTreeMap<usize, Rational> {
        &self.brackets[i][j]
    }

    /// `[u, v]` for coordinate vectors.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vector {
        let mut out = vec![rat(0); self.dim()];
        for (i, a) in u.iter().enumerate() {
            if *a == rat(0) {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if *b == rat(0) {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.brackets[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim();
        let unit = |i: usize| {
            let mut v = vec![rat(0); d];
            v[i] = rat(1);
            v
        };
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (a, b, c) = (unit(i), unit(j), unit(k));
                    let t1 = self.bracket(&self.bracket(&a, &b), &c);
                    let t2 = self.bracket(&self.bracket(&b, &c), &a);
                    let t3 = self.bracket(&self.bracket(&c, &a), &b);
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| x + y + z != rat(0)) {
                        return Err(Error::InvalidAlgebra(format!(
                            "Jacobi identity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that `g` (column `i` is the image of `e_i`) is a Lie algebra
    /// automorphism; the error reports the first defect found.
    pub fn check_automorphism(&self, g: &Matrix) -> Result<()> {
        let d = self.dim();
        if g.rows() != d || g.cols() != d {
            return Err(Error::Action(format!("expected a {d}×{d} matrix")));
        }
        if g.determinant() == rat(0) {
            return Err(Error::Action("action matrix is singular".into()));
        }
        for i in 0..d {
            for j in i + 1..d {
                let mut lhs = vec![rat(0); d];
                for (k, c) in &self.brackets[i][j] {
                    for (r, x) in lhs.iter_mut().enumerate() {
                        *x += c * g.get(r, *k);
                    }
                }
                let rhs = self.bracket(&g.column(i), &g.column(j));
                if lhs != rhs {
                    let defect: Vec<String> =
                        lhs.iter().zip(&rhs).map(|(a, b)| (a - b).to_string()).collect();
                    return Err(Error::Action(format!(
                        "g[{a}, {b}] − [g{a}, g{b}] = ({})",
                        defect.join(", "),
                        a = self.labels[i],
                        b = self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

fn add_entry(map: &mut BTreeMap<usize, Rational>, k: usize, c: Rational) {
    let e = map.entry(k).or_insert_with(|| rat(0));
    *e += c;
    if *e == rat(0) {
        map.remove(&k);
    }
}

/// Increasing `m`-tuples of basis indices, lexicographic, optionally restricted to
/// total weight `w`.
fn tuples(weights: &[i64], m: usize, w: Option<i64>) -> Vec<Vec<usize>> {
    fn rec(
        weights: &[i64],
        m: usize,
        w: Option<i64>,
        start: usize,
        cur: &mut Vec<usize>,
        acc: i64,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == m {
            if w.is_none_or(|w| w == acc) {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..weights.len() {
            cur.push(i);
            rec(weights, m, w, i + 1, cur, acc + weights[i], out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, m, w, 0, &mut Vec::new(), 0, &mut out);
    out
}

/// The Chevalley–Eilenberg complex `C^m = Hom(Λ^m L, ℚ)`, `m = 0..=M`, with
/// `d c(x₀,…,x_m) = Σ_{i<j} (−1)^{i+j} c([x_i,x_j], x₀,…,x̂_i,…,x̂_j,…,x_m)`.
///
/// Cochains are coordinate vectors over the dual basis of increasing index tuples.
/// An invariant subcomplex carries a chosen basis of each fixed subspace and the
/// differential in those bases.
#[derive(Clone, Debug)]
pub struct CEComplex {
    data: Arc<FiniteLieData>,
    max_degree: usize,
    weight: Option<i64>,
    /// Tuple bases for `m = 0..=M+1`.
    tuples: Vec<Vec<Vec<usize>>>,
    /// Bases of the subcomplex in tuple coordinates, `m = 0..=M+1`.
    subspaces: Option<Vec<Vec<Vector>>>,
    /// `d_m : C^m → C^{m+1}` for `m = 0..=M`, as `dim C^{m+1} × dim C^m` matrices.
    differentials: Vec<Matrix>,
}

impl CEComplex {
    /// Builds cochain degrees `0..=max_degree` (and `d` out of the top degree) and
    /// verifies `d² = 0`.
    pub fn new(data: Arc<FiniteLieData>, max_degree: usize, weight: Option<i64>) -> Result<Self> {
        let tuples: Vec<_> = (0..=max_degree + 1)
            .map(|m| tuples(&data.weights, m, weight))
            .collect();
        let differentials = (0..=max_degree)
            .map(|m| ambient_differential(&data, &tuples[m], &tuples[m + 1]))
            .collect();
        let complex = CEComplex {
            data,
            max_degree,
            weight,
            tuples,
            subspaces: None,
            differentials,
        };
        complex.verify_d_squared()?;
        Ok(complex)
    }

    fn verify_d_squared(&self) -> Result<()> {
        for m in 0..self.max_degree {
            if !is_zero_matrix(&self.differentials[m + 1].mul(&self.differentials[m])) {
                return Err(Error::InvalidAlgebra(format!(
                    "d∘d ≠ 0 from cochain degree {m}"
                )));
            }
        }
        Ok(())
    }

    pub fn data(&self) -> &Arc<FiniteLieData> {
        &self.data
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn weight(&self) -> Option<i64> {
        self.weight
    }

    /// Index tuples of the ambient cochain basis in degree `m`.
    pub fn tuples(&self, m: usize) -> &[Vec<usize>] {
        &self.tuples[m]
    }

    /// Basis of degree-`m` cochains in tuple coordinates (unit vectors for a full
    /// complex).
    pub fn cochain_basis(&self, m: usize) -> Vec<Vector> {
        match &self.subspaces {
            Some(s) => s[m].clone(),
            None => {
                let n = self.tuples[m].len();
                (0..n)
                    .map(|i| {
                        let mut v = vec![rat(0); n];
                        v[i] = rat(1);
                        v
                    })
                    .collect()
            }
        }
    }

    pub fn is_subcomplex(&self) -> bool {
        self.subspaces.is_some()
    }

    pub fn cochain_dim(&self, m: usize) -> usize {
        match &self.subspaces {
            Some(s) => s[m].len(),
            None => self.tuples[m].len(),
        }
    }

    /// `dim C^m` for `m = 0..=M`.
    pub fn cochain_dims(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|m| self.cochain_dim(m)).collect()
    }

    /// `d_m` in the complex's own bases.
    pub fn differential(&self, m: usize) -> &Matrix {
        &self.differentials[m]
    }

    /// `dim H^m = dim ker d_m − rank d_{m−1}` for `m = 0..=M`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(Matrix::rank).collect();
        (0..=self.max_degree)
            .map(|m| {
                let kernel = self.cochain_dim(m) - ranks[m];
                kernel - if m == 0 { 0 } else { ranks[m - 1] }
            })
            .collect()
    }

    /// `Σ (−1)^m dim C^m`, `m = 0..=M`.
    pub fn cochain_euler_characteristic(&self) -> i64 {
        alternating_sum(&self.cochain_dims())
    }

    /// `Σ (−1)^m dim H^m`, `m = 0..=M`.
    pub fn cohomology_euler_characteristic(&self) -> i64 {
        alternating_sum(&self.cohomology_dims())
    }

    /// Rank of `d` out of the top cochain degree: the correction term relating the
    /// two Euler characteristics of a truncated complex.
    pub fn top_rank(&self) -> usize {
        self.differentials[self.max_degree].rank()
    }

    /// Applies `d` to a degree-`m` cochain given in tuple coordinates.
    pub fn apply_d(&self, m: usize, c: &[Rational]) -> Result<Vector> {
        if c.len() != self.tuples[m].len() {
            return Err(Error::DimensionMismatch(format!(
                "cochain has {} coordinates, C^{m} has {}",
                c.len(),
                self.tuples[m].len()
            )));
        }
        Ok(ambient_differential(&self.data, &self.tuples[m], &self.tuples[m + 1]).mul_vec(c))
    }

    /// The subcomplex of cochains fixed by every generator, acting on `L` by
    /// `g·c = c ∘ Λ^m(g⁻¹)`. Each generator must be a weight-preserving Lie algebra
    /// automorphism.
    pub fn invariant_subcomplex(&self, generators: &[Matrix]) -> Result<CEComplex> {
        if generators.is_empty() {
            return Ok(self.clone());
        }
        if self.subspaces.is_some() {
            return Err(Error::Precondition(
                "invariants are taken of a full complex".into(),
            ));
        }
        for g in generators {
            self.data.check_automorphism(g)?;
            if self.weight.is_some() {
                for i in 0..self.data.dim() {
                    for r in 0..self.data.dim() {
                        if *g.get(r, i) != rat(0) && self.data.weights[r] != self.data.weights[i] {
                            return Err(Error::Action(format!(
                                "generator moves {} into weight {}",
                                self.data.labels[i], self.data.weights[r]
                            )));
                        }
                    }
                }
            }
        }
        let mut spaces = Vec::with_capacity(self.max_degree + 2);
        for m in 0..=self.max_degree + 1 {
            spaces.push(fixed_space(&self.tuples[m], generators)?);
        }
        let mut differentials = Vec::with_capacity(self.max_degree + 1);
        for m in 0..=self.max_degree {
            let d = &self.differentials[m];
            let target = &spaces[m + 1];
            let mut cols = Vec::with_capacity(spaces[m].dim());
            for v in spaces[m].basis() {
                let image = d.mul_vec(v);
                cols.push(target.coordinates(&image).ok_or_else(|| {
                    Error::Action(format!(
                        "differential does not preserve invariants in degree {m}"
                    ))
                })?);
            }
            differentials.push(Matrix::from_columns(&cols, target.dim()));
        }
        Ok(CEComplex {
            data: self.data.clone(),
            max_degree: self.max_degree,
            weight: self.weight,
            tuples: self.tuples.clone(),
            subspaces: Some(spaces.into_iter().map(|s| s.basis().to_vec()).collect()),
            differentials,
        })
    }

    /// Whether a degree-`m` cochain (tuple coordinates) is fixed by every generator.
    pub fn is_invariant(&self, m: usize, c: &[Rational], generators: &[Matrix]) -> Result<bool> {
        for g in generators {
            let images = exterior_images(&self.tuples[m], g)?;
            for (i, image) in images.iter().enumerate() {
                let mut s = rat(0);
                for (j, x) in image {
                    s += &c[*j] * x;
                }
                if s != c[i] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The exact sparse serialization; see [`SerializedComplex`].
    pub fn serialize(&self) -> String {
        SerializedComplex::from_complex(self).to_string()
    }
}

fn alternating_sum(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(m, &c)| if m % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

fn is_zero_matrix(m: &Matrix) -> bool {
    (0..m.rows()).all(|r| (0..m.cols()).all(|c| *m.get(r, c) == rat(0)))
}

/// Sign of sorting `k` into the increasing list `rest`, with the insertion position;
/// `None` if `k` already occurs.
fn insert_sorted(rest: &[usize], k: usize) -> Option<(Vec<usize>, i64)> {
    let pos = rest.partition_point(|&x| x < k);
    if rest.get(pos) == Some(&k) {
        return None;
    }
    let mut out = Vec::with_capacity(rest.len() + 1);
    out.extend_from_slice(&rest[..pos]);
    out.push(k);
    out.extend_from_slice(&rest[pos..]);
    Some((out, if pos % 2 == 0 { 1 } else { -1 }))
}

fn ambient_differential(data: &FiniteLieData, source: &[Vec<usize>], target: &[Vec<usize>]) -> Matrix {
    let index: HashMap<&[usize], usize> = source
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let mut d = Matrix::zeros(target.len(), source.len());
    for (row, t) in target.iter().enumerate() {
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                let bracket = &data.brackets[t[a]][t[b]];
                if bracket.is_empty() {
                    continue;
                }
                let rest: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != a && p != b)
                    .map(|(_, &x)| x)
                    .collect();
                let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                for (k, c) in bracket {
                    if let Some((tuple, s)) = insert_sorted(&rest, *k) {
                        if let Some(&col) = index.get(tuple.as_slice()) {
                            d.add_to(row, col, &(c * rat(sign * s)));
                        }
                    }
                }
            }
        }
    }
    d
}

/// For each basis tuple `I`, the sparse expansion of `Λ^m(g) e_I` over the same
/// tuple basis; fails if the image leaves it.
fn exterior_images(basis: &[Vec<usize>], g: &Matrix) -> Result<Vec<BTreeMap<usize, Rational>>> {
    let index: HashMap<&[usize], usize> = basis
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let mut out = Vec::with_capacity(basis.len());
    for t in basis {
        let columns: Vec<Vector> = t.iter().map(|&i| g.column(i)).collect();
        let mut image = BTreeMap::new();
        for (tuple, c) in wedge_vectors(&columns) {
            let &j = index.get(tuple.as_slice()).ok_or_else(|| {
                Error::Action("generator does not preserve the cochain basis".into())
            })?;
            add_entry(&mut image, j, c);
        }
        out.push(image);
    }
    Ok(out)
}

/// Cochains `c` with `Σ_J c_J (Λg)_{J,I} = c_I` for all generators.
fn fixed_space(basis: &[Vec<usize>], generators: &[Matrix]) -> Result<RowSpace> {
    let n = basis.len();
    let mut rows: Vec<Vector> = Vec::new();
    for g in generators {
        let images = exterior_images(basis, g)?;
        for (i, image) in images.iter().enumerate() {
            let mut row = vec![rat(0); n];
            for (j, x) in image {
                row[*j] += x;
            }
            row[i] -= rat(1);
            if row.iter().any(|x| *x != rat(0)) {
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![rat(0); n];
                v[i] = rat(1);
                v
            })
            .collect()
    } else {
        Matrix::from_rows(rows, n).nullspace()
    };
    Ok(RowSpace::from_vectors(n, kernel))
}
