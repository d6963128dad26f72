//! Text form: `coeff * x1 x2 + ...`, with the empty word written as a bare coefficient.

use std::fmt;

use super::{TruncatedTensor, Word};
use crate::error::{Error, Result};
use crate::rational::{format_linear_combination, split_coefficient, split_signed_terms};

impl fmt::Display for TruncatedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_linear_combination(self.terms().map(|(w, c)| (c, w.to_string())));
        write!(f, "{}", s)
    }
}

pub(crate) fn parse_letter(tok: &str, letters: usize) -> Option<u8> {
    let idx: usize = tok.strip_prefix('x')?.parse().ok()?;
    (1..=letters).contains(&idx).then(|| (idx - 1) as u8)
}

pub(crate) fn parse_word(body: &str, letters: usize) -> Option<Word> {
    body.split_whitespace()
        .map(|t| parse_letter(t, letters))
        .collect::<Option<Vec<u8>>>()
        .map(Word)
}

/// Parses the canonical text form on `letters` letters at truncation `depth`.
///
/// Words longer than `depth` are rejected rather than silently truncated.
pub fn parse_tensor(letters: usize, depth: usize, s: &str) -> Result<TruncatedTensor> {
    let mut out = TruncatedTensor::zero(letters, depth);
    if s.trim() == "0" {
        return Ok(out);
    }
    for (neg, term) in split_signed_terms(s) {
        let (mut c, body) = split_coefficient(&term)
            .ok_or_else(|| Error::parse(1, format!("bad coefficient in `{term}`")))?;
        if neg {
            c = -c;
        }
        let w = parse_word(&body, letters)
            .ok_or_else(|| Error::parse(1, format!("bad word `{body}`")))?;
        if w.len() > depth {
            return Err(Error::TruncationOverflow {
                degree: w.len(),
                truncation: depth,
            });
        }
        out.add_term(w, c);
    }
    Ok(out)
}
