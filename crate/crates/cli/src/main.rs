//! `osp21`: verification suites, spectra and picture comparisons for the
//! two-boson one-fermion osp(2,1) toolkit.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use osp21_core::json::to_pretty_string;
use osp21_core::spectra::Model;

use commands::Outcome;
use config::{Format, Method, Settings};

/// Environment variable naming the directory for reports when `--output` is
/// absent.
const OUTPUT_DIR_VAR: &str = "OSP21_OUTPUT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Usage(String),
    /// Exit code 1.
    Failure(String),
}

#[derive(Parser, Debug)]
#[command(name = "osp21", version, about = "osp(2,1) realizations, QES transforms and Jaynes-Cummings spectra")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Flat `key = value` file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Report path; defaults to `$OSP21_OUTPUT_DIR/<name>` or stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Override the command's default tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Treat audit findings as failures (exit 1).
    #[arg(long, global = true)]
    strict: bool,
    /// Boson cutoffs for modes 1 and 2.
    #[arg(long, global = true, num_args = 2, value_names = ["N1", "N2"])]
    cutoffs: Option<Vec<usize>>,
    /// Sector label, the fixed value of `a2^+ a2`.
    #[arg(long, global = true)]
    j: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the structure relations in the Fock and transformed pictures.
    VerifyAlgebra {
        /// `ferma` or `fermb`; repeatable.
        #[arg(long)]
        realization: Vec<String>,
        /// `s+1`, `s-1`, `t+1` or `t-1`; repeatable.
        #[arg(long)]
        tag: Vec<String>,
        /// States this far below the cutoffs are checked.
        #[arg(long)]
        margin: Option<usize>,
    },
    /// Sector spectrum of one of the two models.
    Spectrum(ModelArgs),
    /// Sector spectrum against the full Hamiltonian.
    Compare(ModelArgs),
    /// Gamma-operator actions against matrix powers.
    Gamma {
        /// Largest `n1 + n2` tabulated.
        #[arg(long)]
        max_total: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Jck,
    Mjc,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(value_enum)]
    model: ModelArg,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    l1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    l2: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<Method>,
}

impl ModelArgs {
    fn model(&self) -> Model {
        match self.model {
            ModelArg::Jck => Model::Jck,
            ModelArg::Mjc => Model::Mjc,
        }
    }

    fn settings(&self) -> Settings {
        Settings {
            omega: self.omega,
            omega0: self.omega0,
            kappa: self.kappa,
            lambda: self.lambda,
            l1: self.l1,
            l2: self.l2,
            method: self.method,
            ..Settings::default()
        }
    }
}

fn flag_settings(cli: &Cli) -> Settings {
    let c = &cli.common;
    let base = Settings {
        cutoffs: c.cutoffs.as_ref().map(|v| (v[0], v[1])),
        j: c.j,
        format: c.format,
        output: c.output.clone(),
        tol: c.tol,
        strict: c.strict.then_some(true),
        ..Settings::default()
    };
    match &cli.command {
        Command::VerifyAlgebra { realization, tag, margin } => Settings {
            realizations: realization.clone(),
            tags: tag.clone(),
            margin: *margin,
            ..base
        },
        Command::Spectrum(m) | Command::Compare(m) => m.settings().over(base),
        Command::Gamma { max_total } => Settings { max_total: *max_total, ..base },
    }
}

fn settings_json(s: &Settings) -> Value {
    json!({
        "realization": s.realizations,
        "tag": s.tags,
        "cutoffs": s.cutoffs.map(|(a, b)| [a, b]),
        "j": s.j,
        "margin": s.margin,
        "omega": s.omega,
        "omega0": s.omega0,
        "kappa": s.kappa,
        "lambda": s.lambda,
        "l1": s.l1,
        "l2": s.l2,
        "method": s.method.map(|m| format!("{m:?}").to_lowercase()),
        "tol": s.tol,
        "strict": s.strict.unwrap_or(false),
        "max_total": s.max_total,
    })
}

fn render(outcome: &Outcome, format: Format, header: Value) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut doc = json!({ "header": header });
            if let (Value::Object(target), Value::Object(body)) = (&mut doc, &outcome.body) {
                target.extend(body.clone());
            }
            Ok(to_pretty_string(&doc) + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &outcome.rows {
                w.write_record(row).map_err(|e| CliError::Failure(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Failure(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Failure(e.to_string()))
        }
        Format::Table => {
            let cols = outcome.rows.first().map_or(0, Vec::len);
            let widths: Vec<usize> =
                (0..cols).map(|c| outcome.rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
            let mut out = String::new();
            for row in &outcome.rows {
                let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
                out.push_str(cells.join("  ").trim_end());
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn emit(outcome: &Outcome, settings: &Settings, command: &str) -> Result<(), CliError> {
    let format = settings.format.unwrap_or(Format::Json);
    let header = json!({
        "tool": "osp21",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "settings": settings_json(settings),
    });
    let text = render(outcome, format, header)?;
    let target = settings.output.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_VAR).map(|dir| PathBuf::from(dir).join(format!("{}.{}", outcome.name, format.extension())))
    });
    match target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| CliError::Failure(format!("{}: {e}", parent.display())))?;
            }
            std::fs::write(&path, text).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
            eprintln!("{} -> {}", outcome.summary, path.display());
        }
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Failure(e.to_string()))?;
            eprintln!("{}", outcome.summary);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let file = match &cli.common.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let settings = flag_settings(&cli).over(file);
    let (outcome, command, gate) = match &cli.command {
        Command::VerifyAlgebra { .. } => (commands::verify(&settings)?, "verify-algebra", true),
        Command::Spectrum(m) => (commands::spectrum(m.model(), &settings)?, "spectrum", true),
        Command::Compare(m) => (commands::compare(m.model(), &settings)?, "compare", settings.strict.unwrap_or(false)),
        Command::Gamma { .. } => (commands::gamma(&settings)?, "gamma", true),
    };
    emit(&outcome, &settings, command)?;
    Ok(outcome.passed || !gate)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
