//! Lyndon words, standard factorization and the Witt dimension formula.

use crate::tensor::Word;

/// True when `w` is strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// All Lyndon words of length exactly `k` over `n` letters, in lexicographic order.
///
/// Duval's successor algorithm enumerates Lyndon words of length at most `k`
/// in lexicographic order; we keep the ones of full length.
pub fn lyndon_words(n: usize, k: usize) -> Vec<Word> {
    assert!(n >= 1 && k >= 1, "need at least one letter and positive degree");
    assert!(n <= u8::MAX as usize, "too many letters");
    let top = (n - 1) as u8;
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == k {
            out.push(Word(w.clone()));
        }
        let m = w.len();
        while w.len() < k {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// `w = uv` with `v` the longest proper Lyndon suffix; `None` for single letters.
pub fn standard_factorization(w: &Word) -> Option<(Word, Word)> {
    let letters = w.letters();
    if letters.len() < 2 {
        return None;
    }
    (1..letters.len())
        .find(|&i| is_lyndon(&letters[i..]))
        .map(|i| (Word(letters[..i].to_vec()), Word(letters[i..].to_vec())))
}

fn mobius(mut d: u64) -> i64 {
    let mut result = 1i64;
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p) {
            d /= p;
            if d.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if d > 1 {
        result = -result;
    }
    result
}

/// `(1/k) Σ_{d|k} μ(d) n^{k/d}`, the dimension of the degree-`k` part of the free Lie algebra.
pub fn witt_dim(n: usize, k: usize) -> u64 {
    assert!(n >= 1 && k >= 1, "need at least one letter and positive degree");
    let n = n as i128;
    let k64 = k as u64;
    let mut total: i128 = 0;
    for d in 1..=k64 {
        if k64.is_multiple_of(d) {
            total += mobius(d) as i128 * n.pow((k64 / d) as u32);
        }
    }
    (total / k as i128) as u64
}

/// Lyndon words of one degree together with their standard factorizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LyndonBasis {
    pub letters: usize,
    pub degree: usize,
    pub words: Vec<Word>,
}

impl LyndonBasis {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Nested-bracket text of the standard bracketing, e.g. `[x1,[x1,x2]]`.
    pub fn bracketing(&self, i: usize) -> String {
        bracket_text(&self.words[i])
    }
}

pub(crate) fn bracket_text(w: &Word) -> String {
    match standard_factorization(w) {
        None => w.to_string(),
        Some((u, v)) => format!("[{},{}]", bracket_text(&u), bracket_text(&v)),
    }
}

pub fn lyndon_basis(n: usize, k: usize) -> LyndonBasis {
    LyndonBasis {
        letters: n,
        degree: k,
        words: lyndon_words(n, k),
    }
}
