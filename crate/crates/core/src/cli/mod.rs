//! Configuration-driven experiment runner behind the `hnm` binary.
//!
//! | exit | meaning |
//! |------|---------|
//! | 0    | success |
//! | 1    | validation error (bad parameters, grid, I/O) |
//! | 2    | numerical error (backend failure or disagreement) |
//! | 64   | usage error or unknown subcommand |
//! | 65   | unparsable configuration |
//!
//! Every failure also prints one JSON object on standard error:
//! `{"error":"<Kind>","category":"validation","message":"..."}`.
//! `HM_THREADS=n` limits the worker pool to `n` threads.

pub mod config;
pub mod csv;
pub mod figures;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::amplitude::{AmplitudeTrace, Backend};
use crate::channel::extract_rates;
use crate::error::{Error, ErrorCategory, Result};
use crate::markovianity::{bound_state_check, defect_report};

pub use config::ExperimentConfig;
pub use csv::{format_float, render_csv, rows_from_trace, write_csv, OutputRow};
pub use figures::{figure_series, write_figure, Figure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_CONFIG: i32 = 65;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "HM_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "hnm",
    version,
    about = "Qubit decay in a periodically structured bath"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a(t) and write it as CSV.
    Amplitude(RunArgs),
    /// Compute a(t) with the extracted rates gamma(t), eps(t).
    Rates(RunArgs),
    /// Compare backends on the same config.
    Crosscheck {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated backend names.
        #[arg(long, value_delimiter = ',', default_value = "series,volterra")]
        backends: Vec<Backend>,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// Semigroup-defect witness and hidden horizon.
    Witness {
        #[command(flatten)]
        run: RunArgs,
        /// Defect tolerance; defaults to the backend's accuracy.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write figure data.
    Figures {
        #[arg(long)]
        which: Figure,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse and validate a config without computing anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the backend named in the config.
    #[arg(long)]
    backend: Option<Backend>,
    /// Output path; overrides `outputs.csv_path`. Without either, CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = thread_pool().and_then(|pool| match pool {
        Some(pool) => pool.install(|| dispatch(cli.command)),
        None => dispatch(cli.command),
    });
    match outcome {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{}", error_line(&e));
            exit_code(&e)
        }
    }
}

pub fn exit_code(error: &Error) -> i32 {
    match (error, error.category()) {
        (Error::ConfigParse(_), _) => EXIT_CONFIG,
        (_, ErrorCategory::Validation) => EXIT_VALIDATION,
        (_, ErrorCategory::Numerical) => EXIT_NUMERICAL,
    }
}

/// Single-line JSON description of `error`.
pub fn error_line(error: &Error) -> String {
    let category = match error.category() {
        ErrorCategory::Validation => "validation",
        ErrorCategory::Numerical => "numerical",
    };
    serde_json::json!({"error": error.kind(), "category": category, "message": error.to_string()})
        .to_string()
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        Error::BadParameter(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| Error::BadParameter(format!("cannot start {threads} threads: {e}")))
}

fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Amplitude(args) => amplitude(&args, false),
        Command::Rates(args) => amplitude(&args, true),
        Command::Crosscheck {
            config,
            backends,
            tol,
        } => crosscheck(&config, &backends, tol),
        Command::Witness { run, tol } => witness(&run, tol),
        Command::Figures { which, out } => {
            let files = write_figure(which, &out)?;
            let mut text = String::new();
            for f in files {
                let _ = writeln!(text, "{}", f.display());
            }
            Ok(text)
        }
        Command::Validate { config } => {
            let c = ExperimentConfig::load(&config)?;
            Ok(format!(
                "ok: {} coupling, backend {}\n",
                c.model.coupling.kind_name(),
                c.backend
            ))
        }
    }
}

fn output_path(args: &RunArgs, config: &ExperimentConfig) -> Option<PathBuf> {
    args.out.clone().or_else(|| config.outputs.csv_path.clone())
}

fn amplitude(args: &RunArgs, force_rates: bool) -> Result<String> {
    let config = ExperimentConfig::load(&args.config)?;
    let trace = config.compute(args.backend.unwrap_or(config.backend))?;
    let rates = if force_rates || config.outputs.include_rates {
        Some(extract_rates(&trace)?)
    } else {
        None
    };
    let rows = rows_from_trace(&trace, rates.as_ref());

    let mut text = String::new();
    match output_path(args, &config) {
        Some(path) => {
            write_csv(&rows, &path)?;
            let _ = writeln!(text, "wrote {} rows to {}", rows.len(), path.display());
            if config.outputs.include_defect {
                let (defect_path, horizon) = write_defect(&trace, None, &path)?;
                let _ = writeln!(
                    text,
                    "hidden horizon {}; defects in {}",
                    format_float(horizon),
                    defect_path.display()
                );
            }
        }
        None => text = render_csv(&rows)?,
    }
    Ok(text)
}

/// Writes `tau,t,s,defect` next to `csv_path` and returns its path and the horizon.
fn write_defect(
    trace: &AmplitudeTrace,
    tol: Option<f64>,
    csv_path: &Path,
) -> Result<(PathBuf, f64)> {
    let report = defect_report(trace, tol)?;
    let stem = csv_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("output");
    let path = csv_path.with_file_name(format!("{stem}_defect.csv"));
    let mut text = String::from("tau,t,s,defect\n");
    for (t, s, d) in &report.pairs {
        let _ = writeln!(
            text,
            "{},{},{},{}",
            format_float(t + s),
            format_float(*t),
            format_float(*s),
            format_float(*d)
        );
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&path, text)?;
    Ok((path, report.horizon_estimate))
}

fn crosscheck(config_path: &Path, backends: &[Backend], tol: f64) -> Result<String> {
    if backends.len() < 2 {
        return Err(Error::BadParameter(
            "crosscheck needs at least two backends".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::BadParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let config = ExperimentConfig::load(config_path)?;
    let traces = backends
        .iter()
        .map(|b| config.compute(*b))
        .collect::<Result<Vec<_>>>()?;
    let mut text = String::new();
    let mut worst = 0.0f64;
    for (b, trace) in backends.iter().zip(&traces).skip(1) {
        let diff = traces[0].max_deviation(trace)?;
        worst = worst.max(diff);
        let _ = writeln!(
            text,
            "max |delta a| {} vs {}: {}",
            backends[0],
            b,
            format_float(diff)
        );
    }
    if worst > tol {
        print!("{text}");
        return Err(Error::BackendMismatch {
            max_diff: worst,
            tol,
        });
    }
    let _ = writeln!(text, "agreement within {}", format_float(tol));
    Ok(text)
}

fn witness(args: &RunArgs, tol: Option<f64>) -> Result<String> {
    let config = ExperimentConfig::load(&args.config)?;
    let trace = config.compute(args.backend.unwrap_or(config.backend))?;
    let report = defect_report(&trace, tol)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "hidden horizon {} (tolerance {}, grid end {})",
        format_float(report.horizon_estimate),
        format_float(report.tolerance_used),
        format_float(trace.grid().end())
    );
    if let Some(path) = output_path(args, &config) {
        let (defect_path, _) = write_defect(&trace, tol, &path)?;
        let _ = writeln!(text, "defects in {}", defect_path.display());
    }
    match bound_state_check(&config.model, &trace) {
        Ok(b) => {
            let _ = writeln!(
                text,
                "bound state predicted: {}; last-period |a|^2 in [{}, {}]",
                b.predicted,
                format_float(b.tail_min_abs2),
                format_float(b.tail_max_abs2)
            );
        }
        Err(Error::TraceTooShort { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(text)
}
