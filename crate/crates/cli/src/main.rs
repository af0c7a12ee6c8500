//! `nccalc`: command-line front end for the differential calculus engine.

mod commands;
mod session;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nccalc::Error;
use serde_json::json;

use session::Source;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Internal(_)) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

/// What a command produced: text for people, a key/value tree for tools,
/// and whether every requested check passed.
pub struct Outcome {
    pub text: String,
    pub data: serde_json::Value,
    pub passed: bool,
}

impl Outcome {
    pub fn value(text: impl Into<String>, data: serde_json::Value) -> Self {
        Outcome {
            text: text.into(),
            data,
            passed: true,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Structured,
}

#[derive(Parser, Debug)]
#[command(name = "nccalc", version, about = "Differential calculi on finitely presented algebras")]
struct Cli {
    /// output format
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// worker threads for independent checks
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bring an expression to normal form
    Normalize {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        expr: String,
    },
    /// Exterior derivative of an expression
    D {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        expr: String,
    },
    /// Move an algebra element to the left of a θ-word
    Commute {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        expr: String,
        /// direction labels of the θ-word, comma separated
        #[arg(long)]
        word: String,
    },
    /// θ-commutation relations and differentials of the generators
    Relations {
        #[command(flatten)]
        src: Source,
    },
    /// 2-form relations, basis, Δ, ζ and dθ
    TwoForms {
        #[command(flatten)]
        src: Source,
    },
    /// Run verification suites
    Verify {
        #[command(flatten)]
        src: Source,
        /// inner, leibniz, d2, differentiability, twisted-2forms, properties, fixtures
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// run on every catalog preset
        #[arg(long, conflicts_with_all = ["preset", "file"])]
        all_presets: bool,
        #[arg(long, default_value_t = nccalc::properties::DEFAULT_INSTANCES)]
        instances: usize,
        #[arg(long, default_value_t = nccalc::properties::DEFAULT_SEED)]
        seed: u64,
    },
    /// Express θ^s through differentials of coordinates
    ThetaSolve {
        #[command(flatten)]
        src: Source,
        /// coordinates, comma separated (defaults to the preset's)
        #[arg(long)]
        coords: Option<String>,
    },
    /// Torsion of a connection on every θ^s
    Torsion {
        #[command(flatten)]
        src: Source,
        /// connection file with lines `V[s',s,s''] = expr`
        #[arg(long)]
        conn: PathBuf,
    },
    /// Linear conditions for a torsion-free connection with constant coefficients
    TorsionConditions {
        #[command(flatten)]
        src: Source,
    },
    /// Curvature of a connection on every θ^s
    Curvature {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        conn: PathBuf,
    },
    /// Invariance of a metric, and compatibility with a connection
    MetricCheck {
        #[command(flatten)]
        src: Source,
        /// metric file with lines `g[s,s'] = expr`
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        conn: Option<PathBuf>,
        /// search integer connection coefficients in [-bound, bound]
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Check a connection for Levi-Civita, or search a bounded grid
    LeviCivita {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        symmetric: bool,
        #[arg(long, conflicts_with = "search")]
        conn: Option<PathBuf>,
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 1)]
        bound: i64,
    },
    /// The preset catalog
    Preset {
        #[command(subcommand)]
        action: PresetCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum PresetCmd {
    /// List preset ids
    List,
    /// Describe a preset and print it in the calculus file format
    Show { id: String },
    /// Run a preset's fixtures and differentiability checks
    Run { id: String },
}

fn source_of(cmd: &Command) -> Option<&Source> {
    use Command::*;
    match cmd {
        Normalize { src, .. }
        | D { src, .. }
        | Commute { src, .. }
        | Relations { src }
        | TwoForms { src }
        | Verify { src, .. }
        | ThetaSolve { src, .. }
        | Torsion { src, .. }
        | TorsionConditions { src }
        | Curvature { src, .. }
        | MetricCheck { src, .. }
        | LeviCivita { src, .. } => Some(src),
        Preset { .. } => None,
    }
}

fn command_name(cmd: &Command) -> &'static str {
    use Command::*;
    match cmd {
        Normalize { .. } => "normalize",
        D { .. } => "d",
        Commute { .. } => "commute",
        Relations { .. } => "relations",
        TwoForms { .. } => "two-forms",
        Verify { .. } => "verify",
        ThetaSolve { .. } => "theta-solve",
        Torsion { .. } => "torsion",
        TorsionConditions { .. } => "torsion-conditions",
        Curvature { .. } => "curvature",
        MetricCheck { .. } => "metric-check",
        LeviCivita { .. } => "levi-civita",
        Preset { .. } => "preset",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let name = command_name(&cli.cmd);
    let result = nccalc::par::with_jobs(cli.jobs, || commands::run(&cli.cmd));
    let mut out = std::io::stdout().lock();
    match result {
        Ok((session, o)) => {
            let side = session.map(|s| s.side_conditions).unwrap_or_default();
            match format {
                Format::Text => {
                    if !side.is_empty() {
                        eprintln!("assuming: {}", side.join("; "));
                    }
                    let _ = write!(out, "{}", o.text);
                    if !o.text.ends_with('\n') {
                        let _ = writeln!(out);
                    }
                }
                Format::Structured => {
                    let doc = json!({
                        "command": name,
                        "source": source_of(&cli.cmd).map(|s| json!({
                            "preset": s.preset,
                            "file": s.file.as_ref().map(|p| p.display().to_string()),
                        })),
                        "side_conditions": side,
                        "passed": o.passed,
                        "result": o.data,
                    });
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializes"));
                }
            }
            if o.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let code = e.exit_code();
            match format {
                Format::Text => eprintln!("error: {e}"),
                Format::Structured => {
                    let doc = json!({
                        "command": name,
                        "error": e.to_string(),
                        "exit_code": code,
                    });
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializes"));
                }
            }
            ExitCode::from(code)
        }
    }
}
