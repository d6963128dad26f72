//! Dense exact linear algebra over the rationals.
//!
//! Everything downstream (ideal spans, derivation spaces, cochain complexes,
//! expansion solvers) reduces to row echelon forms computed here. Pivot
//! selection is deterministic: the first nonzero entry in the scan order.

use num_traits::{One, Zero};

use crate::rational::{zero, Rational};

pub type Vector = Vec<Rational>;

pub fn zero_vector(len: usize) -> Vector {
    vec![zero(); len]
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn axpy(y: &mut [Rational], a: &Rational, x: &[Rational]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += a * xi;
        }
    }
}

pub fn scaled(v: &[Rational], a: &Rational) -> Vector {
    v.iter().map(|x| x * a).collect()
}

pub fn add_vectors(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(zero(), |acc, (x, y)| acc + x * y)
}

/// Column scan order used when choosing pivots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotOrder {
    /// Leftmost columns become pivots first; free variables are the later ones.
    #[default]
    Forward,
    /// Rightmost columns become pivots first.
    Reverse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols,
            data,
        }
    }

    pub fn from_columns(columns: &[Vector], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rational::rat(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rational) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.rows, v.len());
        let mut out = zero_vector(self.cols);
        for (i, a) in v.iter().enumerate() {
            axpy(&mut out, a, self.row(i));
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: sub_vectors(&self.data, &other.data),
        }
    }

    pub fn rref(&self, order: PivotOrder) -> Echelon {
        Echelon::compute(self, order)
    }

    pub fn rank(&self) -> usize {
        self.rref(PivotOrder::Forward).pivots.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vector> {
        self.rref(PivotOrder::Forward).nullspace_basis()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let e = aug.rref(PivotOrder::Forward);
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, e.rows[i][n + j].clone());
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return zero();
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            for r in c + 1..n {
                let f = a.get(r, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = a.get(c, j) * &f;
                    a.data[r * n + j] -= v;
                }
            }
        }
        det
    }
}

/// Reduced row echelon form: nonzero rows only, pivot entries equal to one.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub cols: usize,
    pub rows: Vec<Vector>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    fn compute(m: &Matrix, order: PivotOrder) -> Echelon {
        let cols = m.cols;
        let mut space = RowSpace::with_order(cols, order);
        for i in 0..m.rows {
            space.insert(m.row(i).to_vec());
        }
        Echelon {
            cols,
            rows: space.rows,
            pivots: space.pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn nullspace_basis(&self) -> Vec<Vector> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = zero_vector(self.cols);
                v[f] = Rational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

/// Incrementally maintained row space in fully reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSpace {
    ambient: usize,
    order: PivotOrder,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(ambient: usize) -> Self {
        Self::with_order(ambient, PivotOrder::Forward)
    }

    pub fn with_order(ambient: usize, order: PivotOrder) -> Self {
        RowSpace {
            ambient,
            order,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<I: IntoIterator<Item = Vector>>(ambient: usize, vs: I) -> Self {
        let mut s = Self::new(ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    /// Normal form of `v` modulo the space: all pivot coordinates zero.
    pub fn reduce(&self, v: &[Rational]) -> Vector {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = -v[p].clone();
                axpy(&mut v, &f, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the space.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v` to the space; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length differs from ambient");
        let mut v = self.reduce(&v);
        let scan: Box<dyn Iterator<Item = usize>> = match self.order {
            PivotOrder::Forward => Box::new(0..self.ambient),
            PivotOrder::Reverse => Box::new((0..self.ambient).rev()),
        };
        let Some(p) = scan.into_iter().find(|&c| !v[c].is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = -row[p].clone();
                axpy(row, &f, &v);
            }
        }
        let key = |c: usize| match self.order {
            PivotOrder::Forward => c as isize,
            PivotOrder::Reverse => -(c as isize),
        };
        let pos = self.pivots.partition_point(|&q| key(q) < key(p));
        self.pivots.insert(pos, p);
        self.rows.insert(pos, v);
        true
    }
}

/// A particular solution of `A x = b` plus the dimension of the solution space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vector,
    pub nullity: usize,
}

/// Solves `A x = b` exactly. Free variables are set to zero, so with
/// `PivotOrder::Forward` the solution is supported on the leftmost
/// independent columns.
pub fn solve_affine(a: &Matrix, b: &[Rational], order: PivotOrder) -> Option<AffineSolution> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let mut aug = Matrix::zeros(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n, b[i].clone());
    }
    // the augmented column must never become a pivot ahead of real columns
    let e = match order {
        PivotOrder::Forward => aug.rref(PivotOrder::Forward),
        PivotOrder::Reverse => {
            let mut perm = Matrix::zeros(a.rows(), n + 1);
            for i in 0..a.rows() {
                for j in 0..n {
                    perm.set(i, n - 1 - j, a.get(i, j).clone());
                }
                perm.set(i, n, b[i].clone());
            }
            let e = perm.rref(PivotOrder::Forward);
            let rows = e
                .rows
                .iter()
                .map(|r| {
                    let mut out = zero_vector(n + 1);
                    for j in 0..n {
                        out[j] = r[n - 1 - j].clone();
                    }
                    out[n] = r[n].clone();
                    out
                })
                .collect();
            let pivots = e
                .pivots
                .iter()
                .map(|&p| if p == n { n } else { n - 1 - p })
                .collect();
            Echelon {
                cols: n + 1,
                rows,
                pivots,
            }
        }
    };
    if e.pivots.contains(&n) {
        return None;
    }
    let mut x = zero_vector(n);
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = row[n].clone();
    }
    Some(AffineSolution {
        particular: x,
        nullity: n - e.pivots.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vector(&m.mul_vec(&ns[0])));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_i64(&[vec![2, 1], vec![5, 3]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(m.determinant(), rat(1));
        let s = Matrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.determinant(), rat(0));
    }

    #[test]
    fn affine_solutions_for_both_pivot_orders() {
        let a = Matrix::from_i64(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let b = vec![rat(2), rat(3)];
        let f = solve_affine(&a, &b, PivotOrder::Forward).unwrap();
        let r = solve_affine(&a, &b, PivotOrder::Reverse).unwrap();
        assert_eq!(f.nullity, 1);
        assert_eq!(a.mul_vec(&f.particular), b);
        assert_eq!(a.mul_vec(&r.particular), b);
        assert_eq!(f.particular, vec![rat(-1), rat(3), rat(0)]);
        assert_eq!(r.particular, vec![rat(0), rat(2), rat(1)]);
        assert_ne!(f.particular, r.particular);

        let inconsistent = Matrix::from_i64(&[vec![1, 1], vec![2, 2]]);
        assert!(solve_affine(&inconsistent, &[rat(1), rat(3)], PivotOrder::Forward).is_none());
    }

    #[test]
    fn row_space_reduction() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(vec![rat(2), rat(0), rat(2)]));
        assert!(!s.insert(vec![rat(1), rat(0), rat(1)]));
        assert!(s.insert(vec![rat(0), rat(3), rat(3)]));
        assert_eq!(s.dim(), 2);
        assert_eq!(s.free_columns(), vec![2]);
        assert!(s.contains(&[rat(1), rat(1), rat(2)]));
        assert_eq!(
            s.reduce(&[rat(0), rat(0), ratio(1, 2)]),
            vec![rat(0), rat(0), ratio(1, 2)]
        );
    }
}
