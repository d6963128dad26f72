use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use liexp_cli::dims::{self, DimsRequest, Ideal};
use liexp_cli::johnson::{self, ExpansionKind, JohnsonRequest};
use liexp_cli::verify::{self, Suite, VerifyRequest};
use liexp_cli::{CliError, Report};

/// Relative input paths are resolved against this directory when it is set.
const WORKDIR_ENV: &str = "LIEXP_WORKDIR";

#[derive(Parser)]
#[command(name = "liexp", version, about = "Exact reports on free Lie algebras, expansions, Johnson maps and formal connections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdealArg {
    Free,
    Omega,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Props,
    Johnson,
    Flatness,
    Ce,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpansionArg {
    Free,
    Symplectic,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of L_k, Der^k, IDer^k and ODer^k.
    Dims {
        /// Number of generators of H.
        #[arg(long, conflicts_with = "genus", required_unless_present = "genus")]
        letters: Option<usize>,
        /// Surface genus; H has 2g generators.
        #[arg(long)]
        genus: Option<usize>,
        #[arg(long, value_enum, default_value = "omega")]
        ideal: IdealArg,
        #[arg(long, default_value_t = 3)]
        degree_max: usize,
        /// Refuse tables whose largest linear system has more unknowns.
        #[arg(long, default_value_t = 4000)]
        max_unknowns: u64,
    },
    /// Run seeded verification suites; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = verify::DEFAULT_TRUNCATION)]
        truncation: usize,
    },
    /// Johnson map of an automorphism from a presentation file.
    Johnson {
        #[arg(long)]
        presentation: PathBuf,
        /// Automorphism name; optional when the file defines exactly one.
        #[arg(long)]
        auto: Option<String>,
        #[arg(long, default_value_t = 4)]
        truncation: usize,
        /// Defaults to symplectic for surface presentations, free otherwise.
        #[arg(long, value_enum)]
        expansion: Option<ExpansionArg>,
    },
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(WORKDIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn execute(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Dims {
            letters,
            genus,
            ideal,
            degree_max,
            max_unknowns,
        } => {
            let ideal = match ideal {
                IdealArg::Free => Ideal::Free,
                IdealArg::Omega => Ideal::Omega,
            };
            let ideal_name = match ideal {
                Ideal::Free => "free",
                Ideal::Omega => "omega",
            };
            let (letters, size) = match (letters, genus) {
                (_, Some(g)) => (2 * g, format!("--genus {g}")),
                (Some(n), None) => (n, format!("--letters {n}")),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let echo = format!(
                "liexp dims {size} --ideal {ideal_name} --degree-max {degree_max} --max-unknowns {max_unknowns}"
            );
            let req = DimsRequest {
                letters,
                ideal,
                degree_max,
                max_unknowns,
            };
            dims::run(&req, echo)
        }
        Command::Verify {
            suite,
            seed,
            truncation,
        } => {
            let suite = match suite {
                SuiteArg::Props => Suite::Props,
                SuiteArg::Johnson => Suite::Johnson,
                SuiteArg::Flatness => Suite::Flatness,
                SuiteArg::Ce => Suite::Ce,
                SuiteArg::All => Suite::All,
            };
            let echo = format!(
                "liexp verify --suite {} --seed {seed} --truncation {truncation}",
                suite.name()
            );
            verify::run(&VerifyRequest { suite, seed, truncation }, echo)
        }
        Command::Johnson {
            presentation,
            auto,
            truncation,
            expansion,
        } => {
            let path = resolve(&presentation);
            let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            // the digest covers the contents, so the echo names the file only
            let file_name = presentation
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| presentation.display().to_string());
            let mut req = JohnsonRequest {
                file_name: file_name.clone(),
                text,
                auto,
                truncation,
                expansion: expansion.map(|e| match e {
                    ExpansionArg::Free => ExpansionKind::Free,
                    ExpansionArg::Symplectic => ExpansionKind::Symplectic,
                }),
            };
            let file = johnson::parse(&req)?;
            let kind = johnson::resolved_expansion(&file, req.expansion);
            req.expansion = Some(kind);
            let mut echo = format!("liexp johnson --presentation {file_name}");
            if let Some(a) = &req.auto {
                echo.push_str(&format!(" --auto {a}"));
            }
            let kind_name = match kind {
                ExpansionKind::Free => "free",
                ExpansionKind::Symplectic => "symplectic",
            };
            echo.push_str(&format!(" --truncation {truncation} --expansion {kind_name}"));
            johnson::run(&req, echo)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(report) => {
            print!("{report}");
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::EXIT_CODE as u8)
        }
    }
}
