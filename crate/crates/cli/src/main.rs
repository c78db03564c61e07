use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eikonal_helix::catalog;
use eikonal_helix::classify::SampleError;
use eikonal_helix::dsl::{parse_curve_spec, CurveSpec};
use eikonal_helix::report::{classification_report, verification_report, VerifyOptions};

/// Classify curves as f-eikonal helices or slant helices and check the
/// harmonic-curvature characterizations numerically.
#[derive(Parser)]
#[command(name = "ehelix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the curve and report eikonal, helix and slant flags.
    Classify {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Classify, then compute theorem residuals and verdicts.
    Verify {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
        /// Include the per-sample table.
        #[arg(long)]
        table: bool,
        /// Verdict threshold; defaults to the document's tol_const.
        #[arg(long, value_name = "X")]
        tol: Option<f64>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// List the built-in documents, or write one to a file.
    Catalog {
        #[arg(long, num_args = 2, value_names = ["NAME", "PATH"])]
        emit: Option<Vec<String>>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: String) -> Self {
        Failure { code: 2, message }
    }
}

impl From<SampleError> for Failure {
    fn from(e: SampleError) -> Self {
        // evaluation failures share the degenerate-curve code
        Failure {
            code: 3,
            message: e.to_string(),
        }
    }
}

fn load(path: &Path) -> Result<CurveSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_curve_spec(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { spec, json, out } => {
            let report = classification_report(&load(&spec)?)?;
            let text = if json { report.to_json() } else { report.to_text() };
            emit(&with_newline(text), out.as_deref())
        }
        Command::Verify {
            spec,
            json,
            table,
            tol,
            out,
        } => {
            if let Some(t) = tol {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Failure::input(format!(
                        "--tol must be a finite positive number, got {t}"
                    )));
                }
            }
            let options = VerifyOptions {
                tolerance: tol,
                include_samples: table,
            };
            let report = verification_report(&load(&spec)?, options)?;
            let text = if json { report.to_json() } else { report.to_text() };
            emit(&with_newline(text), out.as_deref())
        }
        Command::Catalog { emit: None } => {
            for entry in catalog::builtin_catalog() {
                println!("{:<20} {}", entry.name, entry.description);
            }
            Ok(())
        }
        Command::Catalog { emit: Some(args) } => {
            let (name, path) = (&args[0], Path::new(&args[1]));
            let entry = catalog::find(name).ok_or_else(|| Failure::input(format!("unknown catalog entry `{name}`")))?;
            emit(&entry.document, Some(path))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
