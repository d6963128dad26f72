//! Nested-bracket text for Lie elements, e.g. `2 * [x1,x2] - 1/2 * [x1,[x1,x2]]`.

use super::lyndon::bracket_text;
use super::{FreeLie, LieElement};
use crate::error::{Error, Result};
use crate::rational::{format_linear_combination, split_coefficient, split_signed_terms};

impl FreeLie {
    /// Canonical text: basis elements in `(degree, index)` order, each as its standard bracketing.
    pub fn format(&self, a: &LieElement) -> String {
        format_linear_combination(
            a.coords()
                .map(|(&(k, i), c)| (c, bracket_text(&self.basis(k).words[i]))),
        )
    }

    /// Parses a signed sum of bracket expressions over `x1..xn`.
    pub fn parse(&self, s: &str) -> Result<LieElement> {
        let mut out = self.zero();
        if s.trim() == "0" {
            return Ok(out);
        }
        for (neg, term) in split_signed_terms(s) {
            let (mut c, body) = split_coefficient(&term)
                .ok_or_else(|| Error::parse(1, format!("bad coefficient in `{term}`")))?;
            if body.is_empty() {
                return Err(Error::parse(1, format!("constant `{term}` in a Lie element")));
            }
            if neg {
                c = -c;
            }
            let mut p = Parser {
                chars: body.chars().filter(|c| !c.is_whitespace()).collect(),
                pos: 0,
                lie: self,
            };
            let e = p.expr()?;
            if p.pos != p.chars.len() {
                return Err(Error::parse(1, format!("trailing input in `{body}`")));
            }
            out += &e.scale(&c);
        }
        Ok(out)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    lie: &'a FreeLie,
}

impl Parser<'_> {
    fn expect(&mut self, ch: char) -> Result<()> {
        if self.chars.get(self.pos) == Some(&ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(1, format!("expected `{ch}` at offset {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<LieElement> {
        match self.chars.get(self.pos) {
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                self.lie.bracket(&a, &b)
            }
            Some('x') => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let idx: usize = digits
                    .parse()
                    .map_err(|_| Error::parse(1, "letter without index"))?;
                if idx == 0 || idx > self.lie.letters() {
                    return Err(Error::parse(1, format!("letter x{idx} out of range")));
                }
                Ok(self.lie.letter(idx - 1))
            }
            _ => Err(Error::parse(1, format!("unexpected input at offset {}", self.pos))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn canonical_text_round_trips() {
        let lie = FreeLie::new(3, 4);
        for s in [
            "0",
            "x1",
            "[x1,x2]",
            "-2 * x3 + [x1,[x1,x2]] - 1/2 * [[x1,x2],x2]",
            "3 * [[x1,x3],x2] + [x1,[x1,[x1,x2]]]",
        ] {
            let a = lie.parse(s).unwrap();
            assert_eq!(lie.format(&a), s);
        }
    }

    #[test]
    fn non_canonical_brackets_are_rewritten() {
        let lie = FreeLie::new(2, 3);
        let a = lie.parse("[x2,x1]").unwrap();
        assert_eq!(lie.format(&a), "-[x1,x2]");
        let b = lie.parse("1/2 * [[x1,x2],x1]").unwrap();
        assert_eq!(b, lie.basis_element(3, 0).scale(&ratio(-1, 2)));
    }

    #[test]
    fn malformed_text_is_rejected() {
        let lie = FreeLie::new(2, 3);
        for s in ["[x1,x2", "x3", "[x1 x2]", "2", "y1"] {
            assert!(lie.parse(s).is_err(), "{s}");
        }
    }
}
