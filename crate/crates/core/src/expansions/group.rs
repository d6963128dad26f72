//! Words in free groups and finite presentations.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::rational::rat;

/// A word in generators `x1..xm`, stored as (zero-based generator, ±1) letters.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GroupWord(pub Vec<(usize, i8)>);

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        GroupWord(vec![(i, 1)])
    }

    pub fn generator_inverse(i: usize) -> Self {
        GroupWord(vec![(i, -1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.0
    }

    /// Cancels adjacent inverse pairs.
    pub fn reduced(&self) -> GroupWord {
        let mut out: Vec<(usize, i8)> = Vec::with_capacity(self.0.len());
        for &(g, e) in &self.0 {
            match out.last() {
                Some(&(h, f)) if h == g && f == -e => {
                    out.pop();
                }
                _ => out.push((g, e)),
            }
        }
        GroupWord(out)
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    /// Freely reduced product.
    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v).reduced()
    }

    pub fn pow(&self, k: i32) -> GroupWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupWord::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &GroupWord, b: &GroupWord) -> GroupWord {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Cyclically reduced form (conjugate with no cancellation across the ends).
    pub fn cyclically_reduced(&self) -> GroupWord {
        let mut v = self.reduced().0;
        while v.len() >= 2 {
            let (a, b) = (v[0], v[v.len() - 1]);
            if a.0 == b.0 && a.1 == -b.1 {
                v.pop();
                v.remove(0);
            } else {
                break;
            }
        }
        GroupWord(v)
    }

    /// Whether `self` is conjugate to `other` in the free group.
    pub fn is_conjugate_to(&self, other: &GroupWord) -> bool {
        let a = self.cyclically_reduced().0;
        let b = other.cyclically_reduced().0;
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..a.len()).any(|s| (0..a.len()).all(|i| a[(i + s) % a.len()] == b[i]))
    }

    /// Exponent-sum vector, the image in the abelianization.
    pub fn abelianization(&self, generators: usize) -> Vector {
        let mut v = vec![rat(0); generators];
        for &(g, e) in &self.0 {
            v[g] += rat(e as i64);
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&(g, _)| g).max()
    }

    /// Replaces each generator `x_i` by `images[i]`.
    pub fn substitute(&self, images: &[GroupWord]) -> GroupWord {
        let mut out = Vec::new();
        for &(g, e) in &self.0 {
            if e > 0 {
                out.extend_from_slice(&images[g].0);
            } else {
                out.extend(images[g].inverse().0);
            }
        }
        GroupWord(out).reduced()
    }

    /// Parses `x1 x3 X1 X3`; capitals are inverses, `1` or nothing is the identity.
    pub fn parse(s: &str, generators: usize) -> Result<GroupWord> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (e, rest) = if let Some(r) = tok.strip_prefix('x') {
                (1i8, r)
            } else if let Some(r) = tok.strip_prefix('X') {
                (-1i8, r)
            } else {
                return Err(Error::parse(1, format!("bad group letter `{tok}`")));
            };
            let idx: usize = rest
                .parse()
                .map_err(|_| Error::parse(1, format!("bad group letter `{tok}`")))?;
            if idx == 0 || idx > generators {
                return Err(Error::parse(1, format!("generator `{tok}` out of range")));
            }
            out.push((idx - 1, e));
        }
        Ok(GroupWord(out))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(g, e)| format!("{}{}", if e > 0 { 'x' } else { 'X' }, g + 1))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationKind {
    Free,
    Surface(usize),
    General,
}

/// Generators and relators of a finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: usize,
    relators: Vec<GroupWord>,
    kind: PresentationKind,
}

/// `Π_i [x_i, x_{i+g}]`.
pub fn surface_relator(g: usize) -> GroupWord {
    let mut r = GroupWord::empty();
    for i in 0..g {
        r = r.mul(&GroupWord::commutator(
            &GroupWord::generator(i),
            &GroupWord::generator(i + g),
        ));
    }
    r
}

impl GroupPresentation {
    pub fn free(n: usize) -> Self {
        GroupPresentation {
            generators: n,
            relators: Vec::new(),
            kind: PresentationKind::Free,
        }
    }

    pub fn surface(g: usize) -> Self {
        assert!(g >= 1, "surface genus must be positive");
        GroupPresentation {
            generators: 2 * g,
            relators: vec![surface_relator(g)],
            kind: PresentationKind::Surface(g),
        }
    }

    /// Classifies the relator list as free, standard surface, or general.
    pub fn new(generators: usize, relators: Vec<GroupWord>) -> Result<Self> {
        for r in &relators {
            if r.max_generator().is_some_and(|g| g >= generators) {
                return Err(Error::Precondition(format!(
                    "relator `{r}` uses a generator beyond x{generators}"
                )));
            }
        }
        let relators: Vec<GroupWord> = relators.into_iter().map(|r| r.reduced()).collect();
        let kind = if relators.is_empty() {
            PresentationKind::Free
        } else if relators.len() == 1
            && generators.is_multiple_of(2)
            && relators[0] == surface_relator(generators / 2)
        {
            PresentationKind::Surface(generators / 2)
        } else {
            PresentationKind::General
        };
        Ok(GroupPresentation {
            generators,
            relators,
            kind,
        })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[GroupWord] {
        &self.relators
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_print_round_trip() {
        let w = GroupWord::parse("x1 x3 X1 X3", 3).unwrap();
        assert_eq!(w.to_string(), "x1 x3 X1 X3");
        assert_eq!(GroupWord::parse("1", 2).unwrap(), GroupWord::empty());
        assert!(GroupWord::parse("x4", 3).is_err());
        assert!(GroupWord::parse("y1", 3).is_err());
    }

    #[test]
    fn free_reduction_and_inverse() {
        let w = GroupWord::parse("x1 x2 X2 X1 x2", 2).unwrap();
        assert_eq!(w.reduced().to_string(), "x2");
        let a = GroupWord::parse("x1 x2", 2).unwrap();
        assert!(a.mul(&a.inverse()).is_empty());
    }

    #[test]
    fn conjugacy_by_cyclic_rotation() {
        let r = surface_relator(1);
        let rotated = GroupWord::parse("x2 X1 X2 x1", 2).unwrap();
        assert!(rotated.is_conjugate_to(&r));
        let conj = GroupWord::parse("x2 x1 x2 X1 X2 X2", 2).unwrap();
        assert!(conj.is_conjugate_to(&r));
        assert!(!r.inverse().is_conjugate_to(&r));
    }

    #[test]
    fn surface_presentation_is_recognized() {
        let r = GroupWord::parse("x1 x3 X1 X3 x2 x4 X2 X4", 4).unwrap();
        let p = GroupPresentation::new(4, vec![r]).unwrap();
        assert_eq!(p.kind(), PresentationKind::Surface(2));
        assert_eq!(p, GroupPresentation::surface(2));
        assert_eq!(GroupPresentation::new(3, vec![]).unwrap().kind(), PresentationKind::Free);
    }
}
