//! Plain-text serialization of a cochain complex: header, dimensions, and sparse
//! differential entries in row-major order.

use std::fmt;

use super::CEComplex;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, Rational};

/// The sign convention, written into every serialized header.
pub const SIGN_CONVENTION: &str =
    "(dc)(x0,...,xm) = sum_{i<j} (-1)^(i+j) c([xi,xj], x0,...,^xi,...,^xj,...,xm)";

/// One differential `d_m` as `(row, col, value)` triples.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Rational)>,
}

/// The exchange form of a [`CEComplex`].
#[derive(Clone, Debug, PartialEq)]
pub struct SerializedComplex {
    pub max_degree: usize,
    pub weight: Option<i64>,
    pub invariant: bool,
    /// `dim C^m` for `m = 0..=M`.
    pub dims: Vec<usize>,
    /// `d_m` for `m = 0..=M`.
    pub differentials: Vec<SparseMatrix>,
}

impl SerializedComplex {
    pub fn from_complex(c: &CEComplex) -> Self {
        let differentials = (0..=c.max_degree())
            .map(|m| {
                let d = c.differential(m);
                let mut entries = Vec::new();
                for r in 0..d.rows() {
                    for col in 0..d.cols() {
                        let x = d.get(r, col);
                        if *x != rat(0) {
                            entries.push((r, col, x.clone()));
                        }
                    }
                }
                SparseMatrix {
                    rows: d.rows(),
                    cols: d.cols(),
                    entries,
                }
            })
            .collect();
        SerializedComplex {
            max_degree: c.max_degree(),
            weight: c.weight(),
            invariant: c.is_subcomplex(),
            dims: c.cochain_dims(),
            differentials,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let content: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let mut lines = content.into_iter();
        let err = |line: usize, message: &str| Error::Parse {
            line,
            message: message.to_string(),
        };
        let field = |lines: &mut std::vec::IntoIter<(usize, &str)>, name: &str| -> Result<(usize, String)> {
            let (n, l) = lines
                .next()
                .ok_or_else(|| err(0, &format!("missing {name}")))?;
            let rest = l
                .strip_prefix(name)
                .ok_or_else(|| err(n, &format!("expected {name}")))?;
            Ok((n, rest.trim().to_string()))
        };
        let (n, tag) = field(&mut lines, "ce-complex")?;
        if !tag.is_empty() {
            return Err(err(n, "unexpected text after ce-complex"));
        }
        let (n, m) = field(&mut lines, "max_degree")?;
        let max_degree: usize = m.parse().map_err(|_| err(n, "bad max_degree"))?;
        let (n, w) = field(&mut lines, "weight")?;
        let weight = match w.as_str() {
            "none" => None,
            s => Some(s.parse().map_err(|_| err(n, "bad weight"))?),
        };
        let (n, inv) = field(&mut lines, "invariant")?;
        let invariant = match inv.as_str() {
            "yes" => true,
            "no" => false,
            _ => return Err(err(n, "invariant must be yes or no")),
        };
        let (n, d) = field(&mut lines, "dims")?;
        let dims: Vec<usize> = d
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| err(n, "bad dimension")))
            .collect::<Result<_>>()?;
        if dims.len() != max_degree + 1 {
            return Err(err(n, "wrong number of dimensions"));
        }
        let mut differentials = Vec::with_capacity(max_degree + 1);
        for m in 0..=max_degree {
            let (n, head) = field(&mut lines, "d")?;
            let nums: Vec<usize> = head
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| err(n, "bad differential header")))
                .collect::<Result<_>>()?;
            if nums.len() != 4 || nums[0] != m {
                return Err(err(n, "expected `d m rows cols entries`"));
            }
            let mut entries = Vec::with_capacity(nums[3]);
            for _ in 0..nums[3] {
                let (n, l) = lines.next().ok_or_else(|| err(0, "missing entry"))?;
                let parts: Vec<&str> = l.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(err(n, "expected `row col value`"));
                }
                let r = parts[0].parse().map_err(|_| err(n, "bad row"))?;
                let c = parts[1].parse().map_err(|_| err(n, "bad column"))?;
                let x = parse_rational(parts[2]).ok_or_else(|| err(n, "bad value"))?;
                if r >= nums[1] || c >= nums[2] {
                    return Err(err(n, "entry outside the matrix"));
                }
                entries.push((r, c, x));
            }
            differentials.push(SparseMatrix {
                rows: nums[1],
                cols: nums[2],
                entries,
            });
        }
        if let Some((n, _)) = lines.next() {
            return Err(err(n, "trailing content"));
        }
        Ok(SerializedComplex {
            max_degree,
            weight,
            invariant,
            dims,
            differentials,
        })
    }
}

impl fmt::Display for SerializedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# Chevalley-Eilenberg cochain complex, exact rational entries")?;
        writeln!(f, "# sign: {SIGN_CONVENTION}")?;
        writeln!(
            f,
            "# cochains: dual basis of increasing index tuples, lexicographic; d_m maps C^m to C^(m+1)"
        )?;
        writeln!(f, "ce-complex")?;
        writeln!(f, "max_degree {}", self.max_degree)?;
        match self.weight {
            Some(w) => writeln!(f, "weight {w}")?,
            None => writeln!(f, "weight none")?,
        }
        writeln!(f, "invariant {}", if self.invariant { "yes" } else { "no" })?;
        let dims: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        writeln!(f, "dims {}", dims.join(" "))?;
        for (m, d) in self.differentials.iter().enumerate() {
            writeln!(f, "d {m} {} {} {}", d.rows, d.cols, d.entries.len())?;
            for (r, c, x) in &d.entries {
                writeln!(f, "{r} {c} {}", format_rational(x))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::FiniteLieData;
    use super::*;
    use std::sync::Arc;

    #[test]
    fn round_trip() {
        let c = CEComplex::new(Arc::new(FiniteLieData::sl2()), 3, None).unwrap();
        let text = c.serialize();
        assert!(text.contains(SIGN_CONVENTION));
        let parsed = SerializedComplex::parse(&text).unwrap();
        assert_eq!(parsed, SerializedComplex::from_complex(&c));
        assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn malformed_input_reports_the_line() {
        let err = SerializedComplex::parse("ce-complex\nmax_degree x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
