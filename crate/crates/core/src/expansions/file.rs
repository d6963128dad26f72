//! The flat presentation/automorphism file format.
//!
//! ```text
//! # genus-1 surface
//! gens = 2
//! rel = x1 x2 X1 X2
//! auto S: x1 -> X2, x2 -> x1
//! inverse S: x1 -> x2, x2 -> X1
//! ```
//!
//! Generators left out of an `auto` line are fixed. An `inverse` line supplies a
//! certified inverse for an earlier `auto`; without one, the inverse is searched for.

use std::fmt;

use super::automorphism::FreeGroupAutomorphism;
use super::group::{GroupPresentation, GroupWord};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: GroupPresentation,
    pub automorphisms: Vec<FreeGroupAutomorphism>,
}

fn parse_images(line: usize, body: &str, n: usize) -> Result<Vec<GroupWord>> {
    let mut images: Vec<Option<GroupWord>> = vec![None; n];
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lhs, rhs) = part
            .split_once("->")
            .ok_or_else(|| Error::parse(line, format!("expected `xi -> word` in `{part}`")))?;
        let src = GroupWord::parse(lhs.trim(), n).map_err(|e| relocate(e, line))?;
        let g = match src.letters() {
            [(g, 1)] => *g,
            _ => return Err(Error::parse(line, format!("left side `{}` is not a generator", lhs.trim()))),
        };
        if images[g].is_some() {
            return Err(Error::parse(line, format!("x{} assigned twice", g + 1)));
        }
        images[g] = Some(GroupWord::parse(rhs.trim(), n).map_err(|e| relocate(e, line))?);
    }
    Ok(images
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.unwrap_or_else(|| GroupWord::generator(i)))
        .collect())
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    }
}

fn images_line(images: &[GroupWord]) -> String {
    images
        .iter()
        .enumerate()
        .filter(|(i, w)| **w != GroupWord::generator(*i))
        .map(|(i, w)| format!("x{} -> {}", i + 1, w))
        .collect::<Vec<_>>()
        .join(", ")
}

impl PresentationFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut gens: Option<usize> = None;
        let mut relators = Vec::new();
        let mut pending: Vec<(usize, String, Vec<GroupWord>, Option<Vec<GroupWord>>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("gens") {
                let v = rest
                    .trim()
                    .strip_prefix('=')
                    .ok_or_else(|| Error::parse(line, "expected `gens = m`"))?;
                if gens.is_some() {
                    return Err(Error::parse(line, "`gens` given twice"));
                }
                let m: usize = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad generator count `{}`", v.trim())))?;
                if m == 0 {
                    return Err(Error::parse(line, "need at least one generator"));
                }
                gens = Some(m);
                continue;
            }
            let n = gens.ok_or_else(|| Error::parse(line, "`gens = m` must come first"))?;
            if let Some(rest) = content.strip_prefix("rel") {
                let v = rest
                    .trim()
                    .strip_prefix('=')
                    .ok_or_else(|| Error::parse(line, "expected `rel = word`"))?;
                relators.push(GroupWord::parse(v.trim(), n).map_err(|e| relocate(e, line))?);
            } else if let Some(rest) = content.strip_prefix("auto ") {
                let (name, body) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line, "expected `auto NAME: ...`"))?;
                let name = name.trim().to_string();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(Error::parse(line, format!("bad automorphism name `{name}`")));
                }
                if pending.iter().any(|p| p.1 == name) {
                    return Err(Error::parse(line, format!("automorphism `{name}` defined twice")));
                }
                pending.push((line, name, parse_images(line, body, n)?, None));
            } else if let Some(rest) = content.strip_prefix("inverse ") {
                let (name, body) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line, "expected `inverse NAME: ...`"))?;
                let name = name.trim();
                let images = parse_images(line, body, n)?;
                let entry = pending
                    .iter_mut()
                    .find(|p| p.1 == name)
                    .ok_or_else(|| Error::parse(line, format!("inverse for unknown `{name}`")))?;
                if entry.3.is_some() {
                    return Err(Error::parse(line, format!("inverse for `{name}` given twice")));
                }
                entry.3 = Some(images);
            } else {
                return Err(Error::parse(line, format!("unrecognized line `{content}`")));
            }
        }
        let n = gens.ok_or_else(|| Error::parse(1, "missing `gens = m`"))?;
        let presentation =
            GroupPresentation::new(n, relators).map_err(|e| Error::parse(1, e.to_string()))?;
        let automorphisms = pending
            .into_iter()
            .map(|(line, name, images, inverse)| {
                let r = match inverse {
                    Some(inv) => FreeGroupAutomorphism::with_inverse(name, images, inv),
                    None => FreeGroupAutomorphism::new(name, images),
                };
                r.map_err(|e| Error::parse(line, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PresentationFile {
            presentation,
            automorphisms,
        })
    }

    pub fn automorphism(&self, name: &str) -> Option<&FreeGroupAutomorphism> {
        self.automorphisms.iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for PresentationFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens = {}", self.presentation.generators())?;
        for r in self.presentation.relators() {
            writeln!(f, "rel = {r}")?;
        }
        for a in &self.automorphisms {
            writeln!(f, "auto {}: {}", a.name(), images_line(a.images()))?;
            writeln!(f, "inverse {}: {}", a.name(), images_line(a.inverse_images()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansions::PresentationKind;

    const TORUS: &str = "# genus one\ngens = 2\nrel = x1 x2 X1 X2\nauto S: x1 -> X2, x2 -> x1\nauto T: x2 -> x2 x1  # twist\n";

    #[test]
    fn parses_and_round_trips() {
        let file = PresentationFile::parse(TORUS).unwrap();
        assert_eq!(file.presentation.kind(), PresentationKind::Surface(1));
        assert_eq!(file.automorphisms.len(), 2);
        assert_eq!(file.automorphism("T").unwrap().images()[0], GroupWord::generator(0));
        let text = file.to_string();
        let again = PresentationFile::parse(&text).unwrap();
        assert_eq!(again, file);
        assert_eq!(again.to_string(), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("gens = 2\nrel = x1 x3\n", 2),
            ("rel = x1\n", 1),
            ("gens = 2\n\nauto A x1 -> x2\n", 3),
            ("gens = 2\nauto A: x1 -> x1 x2 x1\n", 2),
            ("gens = 2\nauto A: x1 -> x1 x2\ninverse A: x1 -> x1 x2\n", 2),
            ("gens = 2\nfoo\n", 2),
        ];
        for (text, line) in cases {
            match PresentationFile::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
