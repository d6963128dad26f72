//! `Λ³H` and its identification with degree-one derivations of `L(H)/(ω)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{DerMode, DerSpace, Derivation};
use crate::error::{Error, Result};
use crate::free_lie::QuotientLie;
use crate::linalg::{solve_affine, Matrix, PivotOrder, Vector};
use crate::rational::{format_linear_combination, rat, Rational};

/// `J` with `J[i][j] = ω(X_i, X_j)`: `ω(X_i, X_{i+g}) = 1`.
pub fn symplectic_form(g: usize) -> Matrix {
    let mut j = Matrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        j.set(i, i + g, rat(1));
        j.set(i + g, i, rat(-1));
    }
    j
}

/// `MᵀJM = J`.
pub fn is_symplectic(m: &Matrix) -> bool {
    let n = m.rows();
    if n != m.cols() || !n.is_multiple_of(2) {
        return false;
    }
    let j = symplectic_form(n / 2);
    m.transpose().mul(&j).mul(m) == j
}

/// The symplectic transvection `x ↦ x + ω(v, x) v`.
pub fn transvection(v: &[Rational]) -> Matrix {
    let n = v.len();
    let j = symplectic_form(n / 2);
    let mut m = Matrix::identity(n);
    for col in 0..n {
        // ω(v, X_col) = Σ_r v_r J[r][col]
        let mut w = rat(0);
        for (r, vr) in v.iter().enumerate() {
            w += vr * j.get(r, col);
        }
        if w != rat(0) {
            for (row, vr) in v.iter().enumerate() {
                m.add_to(row, col, &(&w * vr));
            }
        }
    }
    m
}

/// Transvections along `X_i`, `X_{i+g}`, `X_i + X_{i+1}` and `X_{i+g} + X_{i+1+g}`;
/// enough to pin down `Sp(2g)`-invariants.
pub fn symplectic_generators(g: usize) -> Vec<Matrix> {
    let n = 2 * g;
    let unit = |i: usize| {
        let mut v = vec![rat(0); n];
        v[i] = rat(1);
        v
    };
    let mut out = Vec::new();
    for i in 0..n {
        out.push(transvection(&unit(i)));
    }
    for i in 0..g.saturating_sub(1) {
        for base in [0, g] {
            let mut v = unit(base + i);
            v[base + i + 1] = rat(1);
            out.push(transvection(&v));
        }
    }
    out
}

/// An element of `Λ³H`, `H` with basis `X_1..X_{2g}`, in strictly increasing triples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lambda3Element {
    g: usize,
    coords: BTreeMap<(usize, usize, usize), Rational>,
}

fn sort_triple(mut t: [usize; 3]) -> Option<((usize, usize, usize), i64)> {
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if t[0] == t[1] || t[1] == t[2] {
        None
    } else {
        Some(((t[0], t[1], t[2]), sign))
    }
}

impl Lambda3Element {
    pub fn zero(g: usize) -> Self {
        Lambda3Element {
            g,
            coords: BTreeMap::new(),
        }
    }

    /// `C(2g, 3)`.
    pub fn dim(g: usize) -> usize {
        Self::triples(g).len()
    }

    /// Basis triples in lexicographic order.
    pub fn triples(g: usize) -> Vec<(usize, usize, usize)> {
        let n = 2 * g;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coords(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rational)> {
        self.coords.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn add_coeff(&mut self, t: (usize, usize, usize), c: Rational) {
        let e = self.coords.entry(t).or_insert_with(|| rat(0));
        *e += c;
        if *e == rat(0) {
            self.coords.remove(&t);
        }
    }

    /// `X_a ∧ X_b ∧ X_c` for arbitrary indices.
    pub fn wedge_letters(g: usize, a: usize, b: usize, c: usize) -> Self {
        let mut out = Self::zero(g);
        if let Some((t, s)) = sort_triple([a, b, c]) {
            out.add_coeff(t, rat(s));
        }
        out
    }

    /// `u ∧ v ∧ w` for vectors in `H`.
    pub fn wedge(g: usize, u: &[Rational], v: &[Rational], w: &[Rational]) -> Self {
        let n = 2 * g;
        let mut out = Self::zero(g);
        for a in 0..n {
            if u[a] == rat(0) {
                continue;
            }
            for b in 0..n {
                if v[b] == rat(0) || b == a {
                    continue;
                }
                for c in 0..n {
                    if w[c] == rat(0) || c == a || c == b {
                        continue;
                    }
                    let (t, s) = sort_triple([a, b, c]).expect("distinct");
                    out.add_coeff(t, &u[a] * &v[b] * &w[c] * rat(s));
                }
            }
        }
        out
    }

    /// `x ∧ ω` with `ω = Σ_i X_i ∧ X_{i+g}`.
    pub fn wedge_omega(g: usize, x: &[Rational]) -> Self {
        let mut out = Self::zero(g);
        for i in 0..g {
            for (a, c) in x.iter().enumerate() {
                if *c == rat(0) {
                    continue;
                }
                if let Some((t, s)) = sort_triple([a, i, i + g]) {
                    out.add_coeff(t, c * rat(s));
                }
            }
        }
        out
    }

    pub fn to_vector(&self) -> Vector {
        Self::triples(self.g)
            .iter()
            .map(|t| self.coords.get(t).cloned().unwrap_or_else(|| rat(0)))
            .collect()
    }

    pub fn from_vector(g: usize, v: &[Rational]) -> Self {
        let mut out = Self::zero(g);
        for (t, c) in Self::triples(g).into_iter().zip(v) {
            out.add_coeff(t, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&t, c) in &other.coords {
            out.add_coeff(t, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.g);
        for (&t, x) in &self.coords {
            out.add_coeff(t, x * c);
        }
        out
    }

    /// The action of `M ∈ GL(H)` on each factor.
    pub fn act(&self, m: &Matrix) -> Self {
        let mut out = Self::zero(self.g);
        for (&(a, b, c), x) in &self.coords {
            let w = Self::wedge(self.g, &m.column(a), &m.column(b), &m.column(c));
            out = out.add(&w.scale(x));
        }
        out
    }
}

impl fmt::Display for Lambda3Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            format_linear_combination(
                self.coords
                    .iter()
                    .map(|(&(a, b, c), x)| (x, format!("x{}^x{}^x{}", a + 1, b + 1, c + 1)))
            )
        )
    }
}

/// The contraction `Λ³H → Der¹(L(H)/(ω))`,
/// `(a∧b∧c)(h) = ω(a,h)[b,c] + ω(b,h)[c,a] + ω(c,h)[a,b]`, with its verified inverse.
#[derive(Clone, Debug)]
pub struct MoritaMap {
    g: usize,
    space: DerSpace,
    /// Column `t` holds the coordinates of the image of the `t`-th basis triple.
    matrix: Matrix,
}

impl MoritaMap {
    /// Builds the map for genus `g` on `L(H)/(ω)` truncated at degree 3, and checks
    /// that it is a linear isomorphism onto `Der¹`.
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::Precondition("genus must be positive".into()));
        }
        let algebra = Arc::new(QuotientLie::surface(g, 3));
        let space = DerSpace::new(algebra, DerMode::Quotient, 1)?;
        let triples = Lambda3Element::triples(g);
        let mut columns = Vec::with_capacity(triples.len());
        let mut map = MoritaMap {
            g,
            space,
            matrix: Matrix::zeros(0, 0),
        };
        for &(a, b, c) in &triples {
            let x = map.contraction(a, b, c);
            columns.push(map.space.coords(&x).map_err(|_| {
                Error::Identification(format!(
                    "image of x{}^x{}^x{} is not a derivation of the quotient",
                    a + 1,
                    b + 1,
                    c + 1
                ))
            })?);
        }
        let rows = 2 * g * map.space.columns.len();
        map.matrix = Matrix::from_columns(&columns, rows);
        let rank = map.matrix.rank();
        if rank != triples.len() || rank != map.space.dim() {
            return Err(Error::Identification(format!(
                "rank {rank}, dim Λ³H = {}, dim Der¹ = {}",
                triples.len(),
                map.space.dim()
            )));
        }
        Ok(map)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn space(&self) -> &DerSpace {
        &self.space
    }

    pub fn algebra(&self) -> &Arc<QuotientLie> {
        self.space.algebra()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    fn contraction(&self, a: usize, b: usize, c: usize) -> Derivation {
        let algebra = self.space.algebra().clone();
        let lie = algebra.lie().clone();
        let omega = symplectic_form(self.g);
        let n = 2 * self.g;
        let br = |p: usize, q: usize| {
            lie.bracket(&lie.letter(p), &lie.letter(q))
                .expect("degree 2 fits")
        };
        let values = (0..n)
            .map(|h| {
                let mut v = lie.zero();
                for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
                    let w = omega.get(p, h);
                    if *w != rat(0) {
                        v += &br(q, r).scale(w);
                    }
                }
                v
            })
            .collect();
        Derivation::raw(algebra, DerMode::Quotient, values)
    }

    pub fn apply(&self, xi: &Lambda3Element) -> Derivation {
        let mut out = Derivation::zero(self.space.algebra().clone(), DerMode::Quotient);
        for (&(a, b, c), x) in xi.coords() {
            out = out.add(&self.contraction(a, b, c).scale(x));
        }
        out
    }

    /// The preimage of a degree-one derivation.
    pub fn inverse(&self, x: &Derivation) -> Result<Lambda3Element> {
        let v = self
            .space
            .coords(&x.block(1))
            .map_err(|e| Error::Identification(e.to_string()))?;
        let sol = solve_affine(&self.matrix, &v, PivotOrder::Forward)
            .ok_or_else(|| Error::Identification("derivation outside the image".into()))?;
        Ok(Lambda3Element::from_vector(self.g, &sol.particular))
    }
}
