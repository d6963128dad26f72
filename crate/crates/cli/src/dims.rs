//! Dimension tables of `L/I` and its positive derivation algebra.

use std::sync::Arc;

use liexp::derivations::{dimension_table, DerMode};
use liexp::free_lie::{witt_dim, FreeLie, QuotientLie};

use crate::error::CliError;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ideal {
    Free,
    Omega,
}

#[derive(Clone, Debug)]
pub struct DimsRequest {
    pub letters: usize,
    pub ideal: Ideal,
    pub degree_max: usize,
    /// Upper bound on the unknowns of the largest derivation system.
    pub max_unknowns: u64,
}

/// One table row: `(k, dim L_k, dim Der^k, dim IDer^k, dim ODer^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Row {
    pub degree: usize,
    pub lie: usize,
    pub der: usize,
    pub inner: usize,
    pub outer: usize,
}

pub const MAX_LETTERS: usize = 8;
pub const MAX_DEGREE: usize = 8;

fn validate(req: &DimsRequest) -> Result<(), CliError> {
    if req.letters == 0 || req.letters > MAX_LETTERS {
        return Err(CliError::Limit(format!(
            "{} letters; supported range is 1..={MAX_LETTERS}",
            req.letters
        )));
    }
    if req.ideal == Ideal::Omega && req.letters % 2 == 1 {
        return Err(CliError::Usage(format!(
            "the omega ideal needs an even number of letters, got {}",
            req.letters
        )));
    }
    if req.degree_max == 0 || req.degree_max > MAX_DEGREE {
        return Err(CliError::Limit(format!(
            "degree {} outside 1..={MAX_DEGREE}",
            req.degree_max
        )));
    }
    // Der^K is solved for images of the letters in L_{K+1}.
    let unknowns = req.letters as u64 * witt_dim(req.letters, req.degree_max + 1);
    if unknowns > req.max_unknowns {
        return Err(CliError::Limit(format!(
            "degree {} on {} letters has {unknowns} unknowns (limit {})",
            req.degree_max, req.letters, req.max_unknowns
        )));
    }
    Ok(())
}

pub fn table(req: &DimsRequest) -> Result<Vec<Row>, CliError> {
    validate(req)?;
    let depth = req.degree_max + 2;
    let q = match req.ideal {
        Ideal::Free => QuotientLie::free(Arc::new(FreeLie::new(req.letters, depth))),
        Ideal::Omega => QuotientLie::surface(req.letters / 2, depth),
    };
    let q = Arc::new(q);
    let degrees: Vec<usize> = (1..=req.degree_max).collect();
    let rows = dimension_table(q.clone(), DerMode::Quotient, &degrees)
        .map_err(|e| CliError::input("derivation spaces", e))?;
    Ok(rows
        .into_iter()
        .map(|r| Row {
            degree: r.degree,
            lie: q.dim(r.degree),
            der: r.der,
            inner: r.inner,
            outer: r.outer,
        })
        .collect())
}

pub fn run(req: &DimsRequest, command: String) -> Result<Report, CliError> {
    let rows = table(req)?;
    let mut report = Report::new(command, &[]);
    let ideal = match req.ideal {
        Ideal::Free => "free".to_string(),
        Ideal::Omega => format!("omega (genus {})", req.letters / 2),
    };
    report.line(format!("letters: {}", req.letters));
    report.line(format!("ideal: {ideal}"));
    report.line(format!(
        "{:>3} {:>8} {:>8} {:>8} {:>8}",
        "k", "L_k", "Der^k", "IDer^k", "ODer^k"
    ));
    for r in rows {
        report.line(format!(
            "{:>3} {:>8} {:>8} {:>8} {:>8}",
            r.degree, r.lie, r.der, r.inner, r.outer
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(letters: usize, ideal: Ideal, degree_max: usize) -> DimsRequest {
        DimsRequest {
            letters,
            ideal,
            degree_max,
            max_unknowns: 4000,
        }
    }

    #[test]
    fn free_rank_two_lie_column() {
        let rows = table(&req(2, Ideal::Free, 3)).unwrap();
        let lie: Vec<usize> = rows.iter().map(|r| r.lie).collect();
        assert_eq!(lie, vec![2, 1, 2]);
    }

    #[test]
    fn guards() {
        assert!(matches!(table(&req(3, Ideal::Omega, 1)), Err(CliError::Usage(_))));
        assert!(matches!(table(&req(9, Ideal::Free, 1)), Err(CliError::Limit(_))));
        assert!(matches!(table(&req(6, Ideal::Free, 5)), Err(CliError::Limit(_))));
        assert!(matches!(table(&req(2, Ideal::Free, 0)), Err(CliError::Limit(_))));
    }
}
