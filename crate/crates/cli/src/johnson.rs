//! Johnson maps of automorphisms read from a presentation file.

use liexp::expansions::{
    filtration_level, free_expansion, johnson_graded_oracle, johnson_map, symplectic_expansion, Expansion,
    FreeGroupAutomorphism, PresentationFile, PresentationKind,
};
use liexp::linalg::Matrix;
use liexp::rational::format_rational;

use crate::error::CliError;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionKind {
    Free,
    Symplectic,
}

#[derive(Clone, Debug)]
pub struct JohnsonRequest {
    /// Name used in messages and in the digest.
    pub file_name: String,
    pub text: String,
    pub auto: Option<String>,
    pub truncation: usize,
    /// Defaults to symplectic on surface presentations and free otherwise.
    pub expansion: Option<ExpansionKind>,
}

pub const MAX_TRUNCATION: usize = 6;
/// Cap on the dimension of the top tensor degree, `generators^truncation`.
pub const MAX_TOP_DIMENSION: u64 = 10_000;

fn matrix_rows(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let entries: Vec<String> = m.row(i).iter().map(format_rational).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn pick<'a>(file: &'a PresentationFile, name: Option<&str>) -> Result<&'a FreeGroupAutomorphism, CliError> {
    let names: Vec<&str> = file.automorphisms.iter().map(|a| a.name()).collect();
    match name {
        Some(n) => file.automorphism(n).ok_or_else(|| {
            CliError::Usage(format!("no automorphism `{n}`; the file defines {}", names.join(", ")))
        }),
        None if file.automorphisms.len() == 1 => Ok(&file.automorphisms[0]),
        None => Err(CliError::Usage(format!(
            "choose one with --auto: {}",
            if names.is_empty() { "(none defined)".to_string() } else { names.join(", ") }
        ))),
    }
}

pub fn resolved_expansion(file: &PresentationFile, requested: Option<ExpansionKind>) -> ExpansionKind {
    requested.unwrap_or(match file.presentation.kind() {
        PresentationKind::Surface(_) => ExpansionKind::Symplectic,
        _ => ExpansionKind::Free,
    })
}

pub fn parse(req: &JohnsonRequest) -> Result<PresentationFile, CliError> {
    PresentationFile::parse(&req.text).map_err(|e| CliError::input(req.file_name.clone(), e))
}

pub fn run(req: &JohnsonRequest, command: String) -> Result<Report, CliError> {
    if !(2..=MAX_TRUNCATION).contains(&req.truncation) {
        return Err(CliError::Limit(format!(
            "truncation {} outside 2..={MAX_TRUNCATION}",
            req.truncation
        )));
    }
    let file = parse(req)?;
    let phi = pick(&file, req.auto.as_deref())?;
    let n = file.presentation.generators();
    let top = (n as u64).saturating_pow(req.truncation as u32);
    if top > MAX_TOP_DIMENSION {
        return Err(CliError::Limit(format!(
            "{n} generators at truncation {} give a top degree of dimension {top} (limit {MAX_TOP_DIMENSION})",
            req.truncation
        )));
    }
    let kind = resolved_expansion(&file, req.expansion);
    for r in file.presentation.relators() {
        if !phi.fixes_up_to_conjugacy(r) {
            return Err(CliError::Usage(format!(
                "`{}` does not preserve the relator `{r}` up to conjugacy",
                phi.name()
            )));
        }
    }
    let (theta, label): (Expansion, String) = match kind {
        ExpansionKind::Free => (free_expansion(n, req.truncation), "free (exponential Magnus)".into()),
        ExpansionKind::Symplectic => {
            let PresentationKind::Surface(g) = file.presentation.kind() else {
                return Err(CliError::Usage(
                    "the symplectic expansion needs a surface presentation `rel = x1 x{g+1} X1 X{g+1} ...`".into(),
                ));
            };
            let theta = symplectic_expansion(g, req.truncation)
                .map_err(|e| CliError::input("symplectic expansion", e))?;
            (theta, format!("symplectic (genus {g})"))
        }
    };
    let context = format!("Johnson map of `{}`", phi.name());
    let tau = johnson_map(&theta, phi).map_err(|e| CliError::input(context.clone(), e))?;
    let level = filtration_level(&theta, phi).map_err(|e| CliError::input(context, e))?;
    let lie = theta.lie().clone();

    let mut report = Report::new(command, &[(req.file_name.clone(), req.text.clone())]);
    report.line(format!("generators: {n}"));
    report.line(format!("relators: {}", file.presentation.relators().len()));
    report.line(format!("automorphism: {phi}"));
    report.line(format!("expansion: {label}"));
    report.line(format!("truncation: {}", req.truncation));
    report.line(format!("abelianization: {}", matrix_rows(&phi.abelianization())));
    report.line(format!("acts trivially on homology: {}", phi.acts_trivially_on_homology()));
    for p in 1..req.truncation {
        let block = tau.graded(p);
        report.line(format!("tau_{p}: values in L_{} (dim {})", p + 1, lie.dim(p + 1)));
        for (i, v) in block.iter().enumerate() {
            let coords: Vec<String> = v.component(p + 1, lie.dim(p + 1)).iter().map(format_rational).collect();
            report.line(format!("  X{} -> ({})  = {}", i + 1, coords.join(", "), lie.format(v)));
        }
    }
    match level {
        Some(0) => report.line("filtration: 0 (outside IA: nontrivial action on homology)"),
        Some(m) => {
            report.line(format!("filtration: {m}"));
            // the first nonzero block does not depend on the expansion
            let oracle = johnson_graded_oracle(&lie, phi, m)
                .map_err(|e| CliError::input("Magnus oracle", e))?;
            let ideal = theta.ideal();
            let agrees = oracle
                .iter()
                .zip(tau.graded(m))
                .all(|(a, b)| ideal.reduce(&lie, &(a - &b)).is_zero());
            if agrees {
                report.line(format!("oracle: tau_{m} agrees with the Magnus oracle"));
            } else {
                report.fail(format!("oracle: tau_{m} DISAGREES with the Magnus oracle"));
            }
        }
        None => report.line(format!("filtration: >={} (no nonzero block below the truncation)", req.truncation)),
    }
    Ok(report)
}
