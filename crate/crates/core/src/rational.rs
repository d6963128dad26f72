//! Exact rational coefficients.
//!
//! Coefficients are arbitrary-precision rationals kept in canonical form
//! (reduced, positive denominator), which `num_rational::BigRational`
//! maintains after every operation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p` or `p/q` with optional sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical text: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn factorial(k: usize) -> Rational {
    (1..=k).fold(one(), |acc, i| acc * rat(i as i64))
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Writes a signed sum of terms `coeff * body` in canonical form.
///
/// Unit coefficients are elided when the body is non-empty. Used by the
/// tensor, Lie and model printers so that all text forms share one grammar.
pub(crate) fn format_linear_combination<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Rational, String)>,
{
    let mut out = String::new();
    for (i, (c, body)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if body.is_empty() {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format_rational(&mag));
            out.push_str(" * ");
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Splits `a + b - c` into signed summands, respecting bracket nesting.
pub(crate) fn split_signed_terms(s: &str) -> Vec<(bool, String)> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut negative = false;
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            '[' | '(' => {
                depth += 1;
                cur.push(ch);
            }
            ']' | ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                // a sign directly after '*' or '/' belongs to a coefficient
                let prev = cur.trim_end().chars().last();
                if matches!(prev, Some('*') | Some('/')) {
                    cur.push(ch);
                } else {
                    if !cur.trim().is_empty() {
                        terms.push((negative, cur.trim().to_string()));
                    } else if ch == '-' {
                        negative = !negative;
                        i += 1;
                        continue;
                    }
                    cur.clear();
                    negative = ch == '-';
                }
            }
            _ => cur.push(ch),
        }
        i += 1;
    }
    if !cur.trim().is_empty() {
        terms.push((negative, cur.trim().to_string()));
    }
    terms
}

/// Splits a summand into coefficient and body: `3/2 * body`, `body`, or `3/2`.
pub(crate) fn split_coefficient(term: &str) -> Option<(Rational, String)> {
    let term = term.trim();
    if let Some((c, body)) = term.split_once('*') {
        let c = parse_rational(c)?;
        return Some((c, body.trim().to_string()));
    }
    if let Some(c) = parse_rational(term) {
        return Some((c, String::new()));
    }
    Some((one(), term.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_inverse_on_canonical_forms() {
        for s in ["0", "1", "-3", "1/2", "-7/3", "120"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn rationals_stay_canonical() {
        let r = ratio(6, -4);
        assert_eq!(*r.denom(), BigInt::from(2));
        assert_eq!(*r.numer(), BigInt::from(-3));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn signed_term_split() {
        let t = split_signed_terms("-x1 x2 + 1/2 * x1 - [x1,x2]");
        assert_eq!(
            t,
            vec![
                (true, "x1 x2".to_string()),
                (false, "1/2 * x1".to_string()),
                (true, "[x1,x2]".to_string())
            ]
        );
    }
}
