//! Formal homology connections `(ω, δ)` on a finite model, their flatness defect,
//! the homotopy-transfer construction, and transport along model isomorphisms.
//!
//! Sign conventions on `A ⊗ T`: letters are formal coefficients, so
//! `(α ⊗ u)(β ⊗ v) = αβ ⊗ uv`, `δ(α ⊗ u) = α ⊗ δu` and `d(α ⊗ u) = dα ⊗ u`; all
//! form signs come from `ε(α) = (−1)^p α` on `p`-forms. (The Koszul-signed reading
//! of `ε(ω)∧ω` is not integrable once letters of odd degree multiply; this one is
//! the Koszul Maurer–Cartan equation after rescaling degree-`q` terms by
//! `(−1)^{q(q−1)/2}`.)

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::model::CDGAModel;
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, is_zero_vector, scaled, sub_vectors, zero_vector, Matrix, RowSpace, Vector};
use crate::rational::{format_rational, parse_rational, rat, Rational};

/// A word `X_{i₁}⋯X_{i_k}` in the suspended homology basis (0-based letters).
pub type Word = Vec<usize>;

/// An element of the truncated tensor algebra `T` on the suspended basis.
pub type Series = BTreeMap<Word, Rational>;

/// An element of `A ⊗ T`: word ↦ model element.
pub type FormSeries = BTreeMap<Word, Vector>;

fn malformed(msg: String) -> Error {
    Error::MalformedConnection(msg)
}

fn add_series(acc: &mut Series, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(w.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&w);
    }
}

fn add_form(acc: &mut FormSeries, w: Word, x: &[Rational]) {
    if is_zero_vector(x) {
        return;
    }
    let sum = match acc.get(&w) {
        Some(y) => add_vectors(y, x),
        None => x.to_vec(),
    };
    if is_zero_vector(&sum) {
        acc.remove(&w);
    } else {
        acc.insert(w, sum);
    }
}

fn concat(u: &[usize], v: &[usize]) -> Word {
    let mut w = u.to_vec();
    w.extend_from_slice(v);
    w
}

/// The pair `(ω, δ)` truncated at word length `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalConnection {
    letter_degrees: Vec<usize>,
    truncation: usize,
    model_dim: usize,
    omega: FormSeries,
    delta: Vec<Series>,
}

impl FormalConnection {
    /// Checks shapes, `δ(X_i)` of length `≥ 2` and of degree `|X_i| − 1`, and word
    /// lengths within the truncation. Zero entries are dropped.
    pub fn new(
        letter_degrees: Vec<usize>,
        truncation: usize,
        model_dim: usize,
        omega: FormSeries,
        delta: Vec<Series>,
    ) -> Result<Self> {
        let m = letter_degrees.len();
        if delta.len() != m {
            return Err(malformed(format!("δ given on {} of {m} generators", delta.len())));
        }
        let check_word = |w: &Word, what: &str| -> Result<()> {
            if w.is_empty() || w.len() > truncation {
                return Err(malformed(format!(
                    "{what} word of length {} outside 1..={truncation}",
                    w.len()
                )));
            }
            if let Some(&i) = w.iter().find(|&&i| i >= m) {
                return Err(malformed(format!("{what} word uses letter {} of {m}", i + 1)));
            }
            Ok(())
        };
        let mut clean_omega = FormSeries::new();
        for (w, x) in omega {
            check_word(&w, "ω")?;
            if x.len() != model_dim {
                return Err(Error::DimensionMismatch(format!(
                    "ω coefficient of length {} in a model of dimension {model_dim}",
                    x.len()
                )));
            }
            add_form(&mut clean_omega, w, &x);
        }
        let mut clean_delta = Vec::with_capacity(m);
        for (i, s) in delta.into_iter().enumerate() {
            let mut out = Series::new();
            for (w, c) in s {
                check_word(&w, "δ")?;
                if c.is_zero() {
                    continue;
                }
                if w.len() < 2 {
                    return Err(malformed(format!("δ(X{}) has a term of length {}", i + 1, w.len())));
                }
                let deg: usize = w.iter().map(|&j| letter_degrees[j]).sum();
                if deg + 1 != letter_degrees[i] {
                    return Err(malformed(format!(
                        "δ(X{}) has a term of degree {deg}, expected {}",
                        i + 1,
                        letter_degrees[i] as i64 - 1
                    )));
                }
                add_series(&mut out, w, c);
            }
            clean_delta.push(out);
        }
        Ok(FormalConnection {
            letter_degrees,
            truncation,
            model_dim,
            omega: clean_omega,
            delta: clean_delta,
        })
    }

    pub fn letters(&self) -> usize {
        self.letter_degrees.len()
    }

    pub fn letter_degrees(&self) -> &[usize] {
        &self.letter_degrees
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn model_dim(&self) -> usize {
        self.model_dim
    }

    pub fn omega(&self) -> &FormSeries {
        &self.omega
    }

    pub fn omega_coefficient(&self, w: &[usize]) -> Vector {
        self.omega
            .get(w)
            .cloned()
            .unwrap_or_else(|| zero_vector(self.model_dim))
    }

    /// `δ(X_i)`.
    pub fn delta(&self, i: usize) -> &Series {
        &self.delta[i]
    }

    pub fn word_degree(&self, w: &[usize]) -> usize {
        w.iter().map(|&i| self.letter_degrees[i]).sum()
    }

    /// `δ` extended to `T` as a derivation of degree `−1`, truncated at `N`.
    pub fn apply_delta(&self, s: &Series) -> Series {
        let mut out = Series::new();
        for (w, c) in s {
            self.delta_word(w, c, &mut out);
        }
        out
    }

    fn delta_word(&self, w: &[usize], c: &Rational, out: &mut Series) {
        let mut prefix_degree = 0;
        for (j, &x) in w.iter().enumerate() {
            let sign = if prefix_degree % 2 == 0 { c.clone() } else { -c.clone() };
            for (v, dc) in &self.delta[x] {
                if w.len() - 1 + v.len() > self.truncation {
                    continue;
                }
                let mut word = w[..j].to_vec();
                word.extend_from_slice(v);
                word.extend_from_slice(&w[j + 1..]);
                add_series(out, word, &sign * dc);
            }
            prefix_degree += self.letter_degrees[x];
        }
    }

    /// `δ(δ(X_i))` for each generator with a nonzero value.
    pub fn delta_squared(&self) -> Vec<(usize, Series)> {
        (0..self.letters())
            .map(|i| (i, self.apply_delta(&self.delta[i])))
            .filter(|(_, s)| !s.is_empty())
            .collect()
    }

    /// Degree bookkeeping against a model: letter degrees match the suspended
    /// harmonic degrees and `ω_w` is a `(|w|+1)`-form.
    pub fn check_against(&self, model: &CDGAModel) -> Result<()> {
        if model.dim() != self.model_dim {
            return Err(Error::Incompatible(format!(
                "connection on a {}-dimensional model, model has dimension {}",
                self.model_dim,
                model.dim()
            )));
        }
        let expected: Vec<usize> = model.harmonic_degrees().iter().map(|d| d - 1).collect();
        if expected != self.letter_degrees {
            return Err(Error::Incompatible(format!(
                "letter degrees {:?} do not match the suspended cohomology {:?}",
                self.letter_degrees, expected
            )));
        }
        for (w, x) in &self.omega {
            let deg = self.word_degree(w) + 1;
            if !model.is_homogeneous(x, deg) {
                return Err(malformed(format!(
                    "ω coefficient of {} is not a {deg}-form",
                    word_label(w)
                )));
            }
        }
        Ok(())
    }

    /// `ω_i` is closed and pairs to `δ_{ij}` with the homology basis.
    pub fn check_normalization(&self, model: &CDGAModel) -> Result<()> {
        for i in 0..self.letters() {
            let wi = self.omega_coefficient(&[i]);
            let coords = model.cohomology_coords(&wi).map_err(|_| {
                malformed(format!("ω coefficient of X{} is not closed", i + 1))
            })?;
            for (j, c) in coords.iter().enumerate() {
                if *c != rat(if i == j { 1 } else { 0 }) {
                    return Err(malformed(format!(
                        "ω coefficient of X{} pairs to {} with X{}",
                        i + 1,
                        format_rational(c),
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// The side conditions of Chen's uniqueness clause on top of the normalization:
    /// leading coefficients harmonic, higher coefficients in the image of `h`.
    pub fn check_normal_form(&self, model: &CDGAModel) -> Result<()> {
        self.check_normalization(model)?;
        let image_h = RowSpace::from_vectors(
            model.dim(),
            (0..model.dim()).map(|a| model.homotopy().column(a)),
        );
        for (w, x) in &self.omega {
            let ok = if w.len() == 1 {
                model.project(x) == *x
            } else {
                image_h.contains(x)
            };
            if !ok {
                return Err(malformed(format!(
                    "ω coefficient of {} is not {}",
                    word_label(w),
                    if w.len() == 1 { "harmonic" } else { "in the image of h" }
                )));
            }
        }
        Ok(())
    }

    /// `ε(ω)∧ω + δω`, only the words of length `k` (or all lengths if `None`).
    fn quadratic_and_delta(&self, model: &CDGAModel, k: Option<usize>) -> FormSeries {
        let keep = |len: usize| len <= self.truncation && k.is_none_or(|k| k == len);
        let mut out = FormSeries::new();
        for (u, a) in &self.omega {
            let ea = model.epsilon(a);
            for (v, b) in &self.omega {
                if keep(u.len() + v.len()) {
                    add_form(&mut out, concat(u, v), &model.product(&ea, b));
                }
            }
            let mut dv = Series::new();
            self.delta_word(u, &rat(1), &mut dv);
            for (w, c) in dv {
                if keep(w.len()) {
                    add_form(&mut out, w, &scaled(a, &c));
                }
            }
        }
        out
    }

    /// The defect `δω − dω + ε(ω)∧ω` per word of length `≤ n` (zero words omitted),
    /// together with any nonzero `δ²(X_i)`.
    pub fn flatness_check(&self, model: &CDGAModel, n: usize) -> Result<DefectTable> {
        if n > self.truncation {
            return Err(Error::TruncationOverflow {
                degree: n,
                truncation: self.truncation,
            });
        }
        self.check_against(model)?;
        let mut defects = self.quadratic_and_delta(model, None);
        for (w, x) in &self.omega {
            add_form(&mut defects, w.clone(), &scaled(&model.d(x), &rat(-1)));
        }
        defects.retain(|w, _| w.len() <= n);
        let delta_squared = self
            .delta_squared()
            .into_iter()
            .map(|(i, s)| (i, s.into_iter().filter(|(w, _)| w.len() <= n).collect::<Series>()))
            .filter(|(_, s)| !s.is_empty())
            .collect();
        Ok(DefectTable {
            truncation: n,
            defects,
            delta_squared,
        })
    }

    /// Transport along a coordinate change `F` of models with induced homology map
    /// `K`: `ω' = (F ⊗ K)(ω)`, `δ' = K δ K⁻¹`.
    pub fn transport(&self, f: &Matrix, k: &Matrix) -> Result<Self> {
        let m = self.letters();
        if k.rows() != m || k.cols() != m || f.rows() != self.model_dim || f.cols() != self.model_dim {
            return Err(Error::DimensionMismatch("transport maps have the wrong size".into()));
        }
        for i in 0..m {
            for j in 0..m {
                if !k.get(j, i).is_zero() && self.letter_degrees[i] != self.letter_degrees[j] {
                    return Err(Error::Precondition("homology map mixes degrees".into()));
                }
            }
        }
        let kinv = k
            .inverse()
            .ok_or_else(|| Error::Precondition("homology map is singular".into()))?;
        let mut omega = FormSeries::new();
        for (w, x) in &self.omega {
            let fx = f.mul_vec(x);
            for (v, c) in linear_word_image(k, w) {
                add_form(&mut omega, v, &scaled(&fx, &c));
            }
        }
        let mut delta = vec![Series::new(); m];
        for (j, out) in delta.iter_mut().enumerate() {
            for i in 0..m {
                let coeff = kinv.get(i, j);
                if coeff.is_zero() {
                    continue;
                }
                for (w, c) in &self.delta[i] {
                    for (v, e) in linear_word_image(k, w) {
                        add_series(out, v, coeff * c * e);
                    }
                }
            }
        }
        FormalConnection::new(self.letter_degrees.clone(), self.truncation, self.model_dim, omega, delta)
    }
}

/// `K(X_{i₁}) ⋯ K(X_{i_k})` expanded into words.
fn linear_word_image(k: &Matrix, w: &[usize]) -> Series {
    let mut acc: Series = BTreeMap::from([(Vec::new(), rat(1))]);
    for &i in w {
        let mut next = Series::new();
        for (u, c) in &acc {
            for j in 0..k.rows() {
                let e = k.get(j, i);
                if !e.is_zero() {
                    add_series(&mut next, concat(u, &[j]), c * e);
                }
            }
        }
        acc = next;
    }
    acc
}

/// Nonzero flatness defects of a connection.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectTable {
    pub truncation: usize,
    pub defects: FormSeries,
    pub delta_squared: Vec<(usize, Series)>,
}

impl DefectTable {
    pub fn is_flat(&self) -> bool {
        self.defects.is_empty() && self.delta_squared.is_empty()
    }

    /// Word lengths carrying a nonzero defect.
    pub fn defect_lengths(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.defects.keys().map(Vec::len).collect();
        lens.sort_unstable();
        lens.dedup();
        lens
    }
}

/// Chen's construction on a model: harmonic leading coefficients, `ω_w = h R_w` and
/// `δ` absorbing the harmonic part of the obstruction `R_w`, word length by length.
pub fn transfer_connection(model: &CDGAModel, n: usize) -> Result<FormalConnection> {
    let letter_degrees: Vec<usize> = model.harmonic_degrees().iter().map(|d| d - 1).collect();
    let m = letter_degrees.len();
    let mut c = FormalConnection {
        letter_degrees,
        truncation: n,
        model_dim: model.dim(),
        omega: FormSeries::new(),
        delta: vec![Series::new(); m],
    };
    for (i, hi) in model.harmonic_basis().iter().enumerate() {
        add_form(&mut c.omega, vec![i], hi);
    }
    for k in 2..=n {
        // all contributions to length k come from strictly shorter data
        let obstruction = c.quadratic_and_delta(model, Some(k));
        for (w, r) in obstruction {
            if !is_zero_vector(&model.d(&r)) {
                return Err(Error::ModelInconsistency(format!(
                    "obstruction at {} is not closed",
                    word_label(&w)
                )));
            }
            let coords = model.cohomology_coords(&r)?;
            for (i, coord) in coords.into_iter().enumerate() {
                if coord.is_zero() {
                    continue;
                }
                add_series(&mut c.delta[i], w.clone(), -coord);
            }
            let hr = model.h(&r);
            if !model.is_homogeneous(&hr, c.word_degree(&w) + 1) {
                return Err(Error::ModelInconsistency(format!(
                    "homotopy image at {} has the wrong degree",
                    word_label(&w)
                )));
            }
            let check = sub_vectors(&sub_vectors(&r, &model.project(&r)), &model.d(&hr));
            if !is_zero_vector(&check) {
                return Err(Error::ModelInconsistency(format!(
                    "homotopy identity fails on the obstruction at {}",
                    word_label(&w)
                )));
            }
            add_form(&mut c.omega, w, &hr);
        }
    }
    FormalConnection::new(c.letter_degrees, n, c.model_dim, c.omega, c.delta)
}

pub fn word_label(w: &[usize]) -> String {
    w.iter().map(|i| format!("X{}", i + 1)).collect::<Vec<_>>().join("")
}

fn word_text(w: &[usize]) -> String {
    w.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for FormalConnection {
    /// ```text
    /// formal-connection
    /// truncation 4
    /// model_dim 6
    /// letters 0 0 1
    /// omega 1 2 : 4 -1
    /// delta 3 : 1 1 2 1/2
    /// ```
    /// Words are 1-based letter lists; after `:` come `index value` pairs (model
    /// basis, 1-based) for `omega` and `word value` groups separated by `;` for `delta`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "formal-connection")?;
        writeln!(f, "truncation {}", self.truncation)?;
        writeln!(f, "model_dim {}", self.model_dim)?;
        let degs: Vec<String> = self.letter_degrees.iter().map(usize::to_string).collect();
        writeln!(f, "letters {}", degs.join(" "))?;
        let mut words: Vec<&Word> = self.omega.keys().collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        for w in words {
            let entries: Vec<String> = self.omega[w]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(a, c)| format!("{} {}", a + 1, format_rational(c)))
                .collect();
            writeln!(f, "omega {} : {}", word_text(w), entries.join(" "))?;
        }
        for (i, s) in self.delta.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            let mut terms: Vec<(&Word, &Rational)> = s.iter().collect();
            terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));
            let body: Vec<String> = terms
                .into_iter()
                .map(|(w, c)| format!("{} {}", word_text(w), format_rational(c)))
                .collect();
            writeln!(f, "delta {} : {}", i + 1, body.join(" ; "))?;
        }
        Ok(())
    }
}

impl FormalConnection {
    pub fn parse(text: &str) -> Result<Self> {
        let mut truncation = None;
        let mut model_dim = None;
        let mut degrees: Option<Vec<usize>> = None;
        let mut omega_lines = Vec::new();
        let mut delta_lines = Vec::new();
        let mut seen_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, rest) = content.split_once(' ').unwrap_or((content, ""));
            let rest = rest.trim();
            let num = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| Error::parse(line, format!("bad number `{s}`")))
            };
            match key {
                "formal-connection" => seen_header = true,
                _ if !seen_header => return Err(Error::parse(line, "expected `formal-connection`")),
                "truncation" => truncation = Some(num(rest)?),
                "model_dim" => model_dim = Some(num(rest)?),
                "letters" => {
                    degrees = Some(rest.split_whitespace().map(num).collect::<Result<_>>()?)
                }
                "omega" => omega_lines.push((line, rest.to_string())),
                "delta" => delta_lines.push((line, rest.to_string())),
                other => return Err(Error::parse(line, format!("unknown key `{other}`"))),
            }
        }
        let missing = |what: &str| Error::parse(0, format!("missing `{what}`"));
        let truncation = truncation.ok_or_else(|| missing("truncation"))?;
        let model_dim = model_dim.ok_or_else(|| missing("model_dim"))?;
        let degrees = degrees.ok_or_else(|| missing("letters"))?;
        let parse_word = |line: usize, s: &str| -> Result<Word> {
            s.split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(Error::parse(line, format!("bad letter `{t}`"))),
                })
                .collect()
        };
        let mut omega = FormSeries::new();
        for (line, body) in omega_lines {
            let (w, vals) = body
                .split_once(':')
                .ok_or_else(|| Error::parse(line, "expected `word : entries`"))?;
            let w = parse_word(line, w)?;
            let toks: Vec<&str> = vals.split_whitespace().collect();
            if !toks.len().is_multiple_of(2) {
                return Err(Error::parse(line, "entries come in `index value` pairs"));
            }
            let mut x = zero_vector(model_dim);
            for pair in toks.chunks(2) {
                let a: usize = match pair[0].parse::<usize>() {
                    Ok(a) if (1..=model_dim).contains(&a) => a - 1,
                    _ => return Err(Error::parse(line, format!("bad basis index `{}`", pair[0]))),
                };
                x[a] = parse_rational(pair[1])
                    .ok_or_else(|| Error::parse(line, format!("bad value `{}`", pair[1])))?;
            }
            if omega.insert(w, x).is_some() {
                return Err(Error::parse(line, "word given twice"));
            }
        }
        let mut delta = vec![Series::new(); degrees.len()];
        for (line, body) in delta_lines {
            let (g, terms) = body
                .split_once(':')
                .ok_or_else(|| Error::parse(line, "expected `generator : terms`"))?;
            let g = match g.trim().parse::<usize>() {
                Ok(g) if (1..=degrees.len()).contains(&g) => g - 1,
                _ => return Err(Error::parse(line, format!("bad generator `{}`", g.trim()))),
            };
            for term in terms.split(';') {
                let toks: Vec<&str> = term.split_whitespace().collect();
                let (value, word) = toks
                    .split_last()
                    .ok_or_else(|| Error::parse(line, "empty term"))?;
                let c = parse_rational(value)
                    .ok_or_else(|| Error::parse(line, format!("bad value `{value}`")))?;
                let w = parse_word(line, &word.join(" "))?;
                add_series(&mut delta[g], w, c);
            }
        }
        FormalConnection::new(degrees, truncation, model_dim, omega, delta)
    }
}

/// Compares the transfer on the model pushed forward by `F` with the transport of
/// the transfer on the original model (both truncated at `n`).
pub fn check_transfer_equivariance(model: &CDGAModel, f: &Matrix, n: usize) -> Result<()> {
    let pushed = model.pushforward(f)?;
    let k = model.homology_map(f, &pushed)?;
    let direct = transfer_connection(&pushed, n)?;
    let transported = transfer_connection(model, n)?.transport(f, &k)?;
    if direct != transported {
        return Err(Error::Equivariance(format!(
            "transfer of the pushed-forward model differs from the transported connection\n{direct}\nvs\n{transported}"
        )));
    }
    Ok(())
}
