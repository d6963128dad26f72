//! Crossed homomorphisms on finite composition tables and the cup-power cochains
//! `c(τ(φ₁) ∧ φ₁·τ(φ₂) ∧ … ∧ (φ₁⋯φ_{m−1})·τ(φ_m))`.

use std::fmt;

use super::{tuples, wedge_vectors};
use crate::derivations::{gl_action, DerSpace, Derivation, DerMode};
use crate::error::{Error, Result};
use crate::expansions::{johnson_map, Expansion, FreeGroupAutomorphism};
use crate::linalg::{Matrix, Vector};
use crate::rational::{rat, Rational};

/// A closed multiplication table on finitely many labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionTable {
    labels: Vec<String>,
    /// `products[a][b]` is the index of the label of `a·b`.
    products: Vec<Vec<usize>>,
}

impl CompositionTable {
    /// Every ordered pair of labels must appear exactly once among `(a, b, a·b)`.
    pub fn new(labels: Vec<String>, products: &[(&str, &str, &str)]) -> Result<Self> {
        let n = labels.len();
        let find = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::LabelMismatch(format!("unknown label {l}")))
        };
        let mut table = vec![vec![None; n]; n];
        for (a, b, c) in products {
            let (i, j, k) = (find(a)?, find(b)?, find(c)?);
            if table[i][j].replace(k).is_some() {
                return Err(Error::LabelMismatch(format!("product {a}·{b} given twice")));
            }
        }
        let mut products = Vec::with_capacity(n);
        for (i, row) in table.into_iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (j, k) in row.into_iter().enumerate() {
                out.push(k.ok_or_else(|| {
                    Error::LabelMismatch(format!("missing product {}·{}", labels[i], labels[j]))
                })?);
            }
            products.push(out);
        }
        Ok(CompositionTable { labels, products })
    }

    /// The table of a finite set of distinct matrices closed under multiplication.
    pub fn from_matrices(labels: Vec<String>, matrices: &[Matrix]) -> Result<Self> {
        if labels.len() != matrices.len() {
            return Err(Error::LabelMismatch(format!(
                "{} labels for {} matrices",
                labels.len(),
                matrices.len()
            )));
        }
        let mut products = Vec::with_capacity(labels.len());
        for (i, a) in matrices.iter().enumerate() {
            let mut row = Vec::with_capacity(labels.len());
            for (j, b) in matrices.iter().enumerate() {
                let ab = a.mul(b);
                let k = matrices.iter().position(|m| *m == ab).ok_or_else(|| {
                    Error::LabelMismatch(format!(
                        "{}·{} is not in the table",
                        labels[i], labels[j]
                    ))
                })?;
                row.push(k);
            }
            products.push(row);
        }
        Ok(CompositionTable { labels, products })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.products[a][b]
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|x| x == label)
            .ok_or_else(|| Error::LabelMismatch(format!("unknown label {label}")))
    }
}

/// Labelled values `τ(φ) ∈ U` with the linear actions `|φ|` on `U`.
#[derive(Clone, Debug)]
pub struct CrossedHom {
    dim: usize,
    labels: Vec<String>,
    values: Vec<Vector>,
    actions: Vec<Matrix>,
    table: Option<CompositionTable>,
}

impl CrossedHom {
    pub fn new(dim: usize, entries: Vec<(String, Vector, Matrix)>) -> Result<Self> {
        let mut out = CrossedHom {
            dim,
            labels: Vec::new(),
            values: Vec::new(),
            actions: Vec::new(),
            table: None,
        };
        for (label, value, action) in entries {
            if value.len() != dim || action.rows() != dim || action.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "entry {label} does not live on a {dim}-dimensional module"
                )));
            }
            if out.labels.contains(&label) {
                return Err(Error::LabelMismatch(format!("label {label} given twice")));
            }
            out.labels.push(label);
            out.values.push(value);
            out.actions.push(action);
        }
        Ok(out)
    }

    /// `τ(φ) = φ·u − u`.
    pub fn principal(labels: Vec<String>, actions: Vec<Matrix>, u: &[Rational]) -> Result<Self> {
        let entries = labels
            .into_iter()
            .zip(actions)
            .map(|(l, a)| {
                let v: Vector = a.mul_vec(u).iter().zip(u).map(|(x, y)| x - y).collect();
                (l, v, a)
            })
            .collect();
        Self::new(u.len(), entries)
    }

    /// `τ₁^θ(φ)` in the coordinates of `Der¹` (or `ODer¹` when `outer`) of the
    /// expansion's quotient, with `|φ|` acting by conjugation.
    pub fn from_johnson(
        theta: &Expansion,
        automorphisms: &[FreeGroupAutomorphism],
        space: &DerSpace,
        outer: bool,
    ) -> Result<Self> {
        if space.degree() != 1 || space.mode() != DerMode::Quotient {
            return Err(Error::Precondition(
                "values live in the degree-one quotient derivations".into(),
            ));
        }
        let algebra = space.algebra().clone();
        if algebra.letters() != theta.generators()
            || !algebra.ideal().same_spans(theta.ideal())
        {
            return Err(Error::Incompatible(
                "derivation space and expansion use different algebras".into(),
            ));
        }
        let coords = |x: &Derivation| {
            if outer {
                space.oder_coords(x)
            } else {
                space.der_coords(x)
            }
        };
        let dim = if outer { space.outer_dim() } else { space.dim() };
        let basis: Vec<Derivation> = (0..dim)
            .map(|j| {
                if outer {
                    space.outer_representative(j)
                } else {
                    space.basis_derivation(j)
                }
            })
            .collect();
        let lie = algebra.lie();
        let mut entries = Vec::with_capacity(automorphisms.len());
        for phi in automorphisms {
            let tau = johnson_map(theta, phi)?;
            let values = tau
                .graded(1)
                .into_iter()
                .map(|v| v.with_depth(lie.depth()))
                .collect();
            let d = Derivation::new(algebra.clone(), DerMode::Quotient, values)?;
            let m = phi.abelianization();
            let columns: Vec<Vector> = basis
                .iter()
                .map(|b| coords(&gl_action(&m, b)?))
                .collect::<Result<_>>()?;
            entries.push((
                phi.name().to_string(),
                coords(&d)?,
                Matrix::from_columns(&columns, dim),
            ));
        }
        Self::new(dim, entries)
    }

    /// Attaches a composition table whose labels all carry values.
    pub fn with_table(mut self, table: CompositionTable) -> Result<Self> {
        for l in table.labels() {
            self.index(l)?;
        }
        self.table = Some(table);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> Option<&CompositionTable> {
        self.table.as_ref()
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|x| x == label)
            .ok_or_else(|| Error::LabelMismatch(format!("no value for label {label}")))
    }

    pub fn value(&self, label: &str) -> Result<&Vector> {
        Ok(&self.values[self.index(label)?])
    }

    pub fn action(&self, label: &str) -> Result<&Matrix> {
        Ok(&self.actions[self.index(label)?])
    }

    /// `τ(φψ) − τ(φ) − |φ|τ(ψ)` for every pair of the table with a nonzero defect.
    pub fn cocycle_defects(&self) -> Result<Vec<(String, String, Vector)>> {
        let table = self
            .table
            .as_ref()
            .ok_or_else(|| Error::Precondition("no composition table attached".into()))?;
        let mut out = Vec::new();
        for (a, la) in table.labels().iter().enumerate() {
            for (b, lb) in table.labels().iter().enumerate() {
                let lab = &table.labels()[table.product(a, b)];
                let pushed = self.action(la)?.mul_vec(self.value(lb)?);
                let defect: Vector = self
                    .value(lab)?
                    .iter()
                    .zip(self.value(la)?)
                    .zip(&pushed)
                    .map(|((x, y), z)| x - y - z)
                    .collect();
                if defect.iter().any(|x| *x != rat(0)) {
                    out.push((la.clone(), lb.clone(), defect));
                }
            }
        }
        Ok(out)
    }

    /// Also checks that the actions multiply according to the table.
    pub fn is_cocycle(&self) -> Result<bool> {
        let table = self
            .table
            .as_ref()
            .ok_or_else(|| Error::Precondition("no composition table attached".into()))?;
        for (a, la) in table.labels().iter().enumerate() {
            for (b, lb) in table.labels().iter().enumerate() {
                let lab = &table.labels()[table.product(a, b)];
                if self.action(la)?.mul(self.action(lb)?) != *self.action(lab)? {
                    return Ok(false);
                }
            }
        }
        Ok(self.cocycle_defects()?.is_empty())
    }

    /// Evaluates the cup-power `m`-cochain of `c` at every `(m+1)`-tuple of the table
    /// through the group coboundary and returns the failures.
    pub fn cup_power_coboundary(&self, c: &[Rational], m: usize) -> Result<Vec<CoboundaryFailure>> {
        let table = self
            .table
            .as_ref()
            .ok_or_else(|| Error::Precondition("no composition table attached".into()))?;
        let f = |idx: &[usize]| {
            let labels: Vec<&str> = idx.iter().map(|&i| table.labels()[i].as_str()).collect();
            cup_power_cochain(c, self, &labels)
        };
        group_coboundary(&f, table, m)
    }
}

/// `c(τ(φ₁) ∧ φ₁·τ(φ₂) ∧ … ∧ (φ₁⋯φ_{m−1})·τ(φ_m))` for an `m`-cochain `c` in
/// coordinates over increasing `m`-tuples of `U`'s basis.
pub fn cup_power_cochain(c: &[Rational], tau: &CrossedHom, labels: &[&str]) -> Result<Rational> {
    let m = labels.len();
    let basis = tuples(&vec![0; tau.dim], m, None);
    if c.len() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "an {m}-cochain on a {}-dimensional module has {} coordinates, got {}",
            tau.dim,
            basis.len(),
            c.len()
        )));
    }
    let mut acting = Matrix::identity(tau.dim);
    let mut vectors = Vec::with_capacity(m);
    for l in labels {
        vectors.push(acting.mul_vec(tau.value(l)?));
        acting = acting.mul(tau.action(l)?);
    }
    let mut out = rat(0);
    for (t, x) in wedge_vectors(&vectors) {
        let i = basis.binary_search(&t).expect("tuples are sorted");
        out += &c[i] * x;
    }
    Ok(out)
}

/// A tuple on which a group cochain's coboundary does not vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct CoboundaryFailure {
    pub labels: Vec<String>,
    pub value: Rational,
}

impl fmt::Display for CoboundaryFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δf({}) = {}", self.labels.join(", "), self.value)
    }
}

/// `(δf)(g₁,…,g_{m+1}) = f(g₂,…) + Σ_i (−1)^i f(…, g_i g_{i+1}, …) + (−1)^{m+1} f(g₁,…,g_m)`
/// with trivial coefficients, on every `(m+1)`-tuple of the table; returns the
/// nonzero values.
pub fn group_coboundary(
    f: &dyn Fn(&[usize]) -> Result<Rational>,
    table: &CompositionTable,
    m: usize,
) -> Result<Vec<CoboundaryFailure>> {
    let n = table.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; m + 1];
    if n == 0 {
        return Ok(out);
    }
    loop {
        let mut total = f(&idx[1..])?;
        for i in 0..m {
            let mut merged = Vec::with_capacity(m);
            merged.extend_from_slice(&idx[..i]);
            merged.push(table.product(idx[i], idx[i + 1]));
            merged.extend_from_slice(&idx[i + 2..]);
            let v = f(&merged)?;
            if i % 2 == 0 {
                total -= v;
            } else {
                total += v;
            }
        }
        let last = f(&idx[..m])?;
        if m.is_multiple_of(2) {
            total -= last;
        } else {
            total += last;
        }
        if total != rat(0) {
            out.push(CoboundaryFailure {
                labels: idx.iter().map(|&i| table.labels()[i].clone()).collect(),
                value: total,
            });
        }
        // next tuple in lexicographic order
        let mut p = m + 1;
        loop {
            if p == 0 {
                return Ok(out);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < n {
                break;
            }
            idx[p] = 0;
        }
    }
}
