//! The CDGA model file format.
//!
//! ```text
//! cdga
//! basis 1:0 x:1 y:1 u:1 xy:2 xu:2
//! unit 1
//! d u = xy
//! mul x y = xy
//! mul x u = xu
//! h xy = u + 3*x
//! ```
//!
//! Unlisted entries are zero. A `mul a b` line also fixes `b·a` by graded
//! commutativity unless that product is listed separately; `unit` fills in the
//! products with the unit. Right-hand sides are `c*label` terms joined by `+`/`-`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::model::{CDGAModel, ProductTable};
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Matrix, Vector};
use crate::rational::{format_rational, parse_rational, rat, Rational};

fn parse_combination(line: usize, s: &str, index: &BTreeMap<String, usize>, n: usize) -> Result<Vector> {
    let mut out = zero_vector(n);
    let s = s.trim();
    if s == "0" && !index.contains_key("0") {
        return Ok(out);
    }
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut sign = 1;
    for ch in s.chars() {
        if ch != '+' && ch != '-' {
            current.push(ch);
        } else if current.trim().is_empty() {
            if ch == '-' {
                sign = -sign;
            }
        } else {
            tokens.push((sign, current.trim().to_string()));
            current.clear();
            sign = if ch == '-' { -1 } else { 1 };
        }
    }
    if current.trim().is_empty() {
        return Err(Error::parse(line, format!("combination `{s}` ends with an operator")));
    }
    tokens.push((sign, current.trim().to_string()));
    for (sign, term) in tokens {
        let (coeff, label) = match term.split_once('*') {
            Some((c, l)) => (
                parse_rational(c).ok_or_else(|| Error::parse(line, format!("bad coefficient `{c}`")))?,
                l.trim(),
            ),
            None => (rat(1), term.as_str()),
        };
        let &a = index
            .get(label)
            .ok_or_else(|| Error::parse(line, format!("unknown basis element `{label}`")))?;
        out[a] += coeff * rat(sign);
    }
    Ok(out)
}

fn combination_text(x: &[Rational], labels: &[String]) -> String {
    let mut out = String::new();
    for (a, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let neg = *c < Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != rat(1) {
            out.push_str(&format_rational(&mag));
            out.push('*');
        }
        out.push_str(&labels[a]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn parse_model(text: &str) -> Result<CDGAModel> {
    let mut labels: Vec<String> = Vec::new();
    let mut degrees: Vec<usize> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut header = false;
    let mut unit: Option<usize> = None;
    let mut d_lines = Vec::new();
    let mut h_lines = Vec::new();
    let mut mul_lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match key {
            "cdga" => header = true,
            _ if !header => return Err(Error::parse(line, "expected `cdga`")),
            "basis" => {
                if !labels.is_empty() {
                    return Err(Error::parse(line, "basis given twice"));
                }
                for item in rest.split_whitespace() {
                    let (l, deg) = item
                        .split_once(':')
                        .ok_or_else(|| Error::parse(line, format!("expected `label:degree`, got `{item}`")))?;
                    if l.is_empty() || l.contains(['+', '-', '*', '=']) {
                        return Err(Error::parse(line, format!("bad label `{l}`")));
                    }
                    let deg: usize = deg
                        .parse()
                        .map_err(|_| Error::parse(line, format!("bad degree `{deg}`")))?;
                    if index.insert(l.to_string(), labels.len()).is_some() {
                        return Err(Error::parse(line, format!("label `{l}` repeated")));
                    }
                    labels.push(l.to_string());
                    degrees.push(deg);
                }
            }
            "unit" => {
                let &a = index
                    .get(rest)
                    .ok_or_else(|| Error::parse(line, format!("unknown basis element `{rest}`")))?;
                unit = Some(a);
            }
            "d" => d_lines.push((line, rest.to_string())),
            "h" => h_lines.push((line, rest.to_string())),
            "mul" => mul_lines.push((line, rest.to_string())),
            other => return Err(Error::parse(line, format!("unknown key `{other}`"))),
        }
    }
    if labels.is_empty() {
        return Err(Error::parse(0, "missing `basis`"));
    }
    let n = labels.len();
    let lookup = |line: usize, l: &str| -> Result<usize> {
        index
            .get(l)
            .copied()
            .ok_or_else(|| Error::parse(line, format!("unknown basis element `{l}`")))
    };
    let linear_map = |lines: &[(usize, String)]| -> Result<Matrix> {
        let mut m = Matrix::zeros(n, n);
        let mut set = vec![false; n];
        for (line, body) in lines {
            let (lhs, rhs) = body
                .split_once('=')
                .ok_or_else(|| Error::parse(*line, "expected `label = combination`"))?;
            let a = lookup(*line, lhs.trim())?;
            if std::mem::replace(&mut set[a], true) {
                return Err(Error::parse(*line, format!("`{}` assigned twice", lhs.trim())));
            }
            for (b, c) in parse_combination(*line, rhs, &index, n)?.into_iter().enumerate() {
                m.set(b, a, c);
            }
        }
        Ok(m)
    };
    let d = linear_map(&d_lines)?;
    let h = linear_map(&h_lines)?;
    let mut explicit: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for (line, body) in &mul_lines {
        let (lhs, rhs) = body
            .split_once('=')
            .ok_or_else(|| Error::parse(*line, "expected `a b = combination`"))?;
        let parts: Vec<&str> = lhs.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::parse(*line, "expected two factors"));
        }
        let (a, b) = (lookup(*line, parts[0])?, lookup(*line, parts[1])?);
        let v = parse_combination(*line, rhs, &index, n)?;
        if explicit.insert((a, b), v).is_some() {
            return Err(Error::parse(*line, "product given twice"));
        }
    }
    let mut full = explicit.clone();
    for ((a, b), v) in &explicit {
        if !explicit.contains_key(&(*b, *a)) {
            let sign = rat(if (degrees[*a] * degrees[*b]).is_multiple_of(2) { 1 } else { -1 });
            full.insert((*b, *a), v.iter().map(|c| c * &sign).collect());
        }
    }
    if let Some(u) = unit {
        for a in 0..n {
            for key in [(u, a), (a, u)] {
                full.entry(key).or_insert_with(|| {
                    let mut v = zero_vector(n);
                    v[a] = rat(1);
                    v
                });
            }
        }
    }
    let mut products: ProductTable = vec![vec![Vec::new(); n]; n];
    for ((a, b), v) in full {
        products[a][b] = v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    }
    CDGAModel::new(labels, degrees, d, products, h)
}

/// Writes a model in the file format; products are listed for `a ≤ b` only.
pub struct ModelText<'a>(pub &'a CDGAModel);

impl fmt::Display for ModelText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        let labels = m.labels();
        writeln!(f, "cdga")?;
        let basis: Vec<String> = labels
            .iter()
            .zip(m.degrees())
            .map(|(l, d)| format!("{l}:{d}"))
            .collect();
        writeln!(f, "basis {}", basis.join(" "))?;
        for (name, mat) in [("d", m.differential()), ("h", m.homotopy())] {
            for a in 0..m.dim() {
                let col = mat.column(a);
                if col.iter().any(|c| !c.is_zero()) {
                    writeln!(f, "{name} {} = {}", labels[a], combination_text(&col, labels))?;
                }
            }
        }
        for a in 0..m.dim() {
            for b in a..m.dim() {
                let entries = &m.products()[a][b];
                if entries.iter().all(|(_, c)| c.is_zero()) {
                    continue;
                }
                let mut v = zero_vector(m.dim());
                for (k, c) in entries {
                    v[*k] += c;
                }
                writeln!(f, "mul {} {} = {}", labels[a], labels[b], combination_text(&v, labels))?;
            }
        }
        Ok(())
    }
}
