//! Command-line front end for the `qraman` signal engine.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod selftest;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qraman::photon::ProbeState;
use qraman::signal::{scan_grid, SignalGrid, SignalKind};

pub use config::{parse_config, RunConfig};
pub use error::CliError;
use output::NamedGrid;

#[derive(Debug, Parser)]
#[command(name = "qraman", version, about = "Entangled-photon Raman signal simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frequency-resolved stimulated Raman (FAST CARS) map of a vibrational mode set.
    Fastcars(RunArgs),
    /// QFRS intensity map of a vibronic model.
    QfrsIntensity(RunArgs),
    /// Heterodyne-detected QFRS map of a vibronic model.
    QfrsHeterodyne(RunArgs),
    /// Same scan for the entangled probe and its classical and Fock counterparts.
    CompareProbes(RunArgs),
    /// Runs built-in oracle checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Binary,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML or JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `output.directory`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Divide every grid by its largest magnitude.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Worker threads (default: QRAMAN_THREADS, else all cores).
    #[arg(long, env = "QRAMAN_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Accepted for symmetry with the other subcommands; not read.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, env = "QRAMAN_THREADS")]
    pub threads: Option<usize>,
}

/// Loads the config named on the command line and applies the flag overrides.
/// `kind` is the signal the subcommand computes; `None` accepts any kind.
pub fn load_run_config(args: &RunArgs, kind: Option<SignalKind>) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let mut raw = config::parse_raw(&text)?;
    if let (Some(want), None) = (kind, raw.kind) {
        raw.kind = Some(want);
    }
    let mut cfg = config::resolve(&raw)?;
    if let Some(want) = kind {
        if cfg.kind != want {
            return Err(CliError::validation(
                "kind",
                cfg.kind.as_str(),
                format!("config is for {} but the subcommand computes {}", cfg.kind.as_str(), want.as_str()),
            ));
        }
    }
    if let Some(out) = &args.out {
        cfg.output.directory = out.clone();
    }
    if args.normalize {
        cfg.output.normalize = true;
    }
    match args.format {
        Some(FormatArg::Text) => cfg.output.format = config::OutputFormat::Text,
        Some(FormatArg::Binary) => cfg.output.format = config::OutputFormat::Binary,
        None => {}
    }
    Ok(cfg)
}

fn scan(cfg: &RunConfig, probe: ProbeState) -> Result<SignalGrid, CliError> {
    let request = cfg.scan_request(probe);
    Ok(scan_grid(&request, &cfg.shift.points(), &cfg.delay.points(), cfg.output.normalize)?)
}

/// Computes the grids for `subcommand` and writes them; returns the metadata path.
pub fn execute(cfg: &RunConfig, subcommand: &str, compare: bool) -> Result<PathBuf, CliError> {
    let grids = if compare {
        let pair = cfg.pair().ok_or_else(|| {
            CliError::validation(
                "probe.state",
                cfg.probe.label(),
                "compare-probes needs an entangled or pseudo-thermal probe",
            )
        })?;
        let probes = [
            ("entangled", cfg.probe),
            ("classical", ProbeState::classical_matched(&pair)),
            ("fock", ProbeState::fock_matched(&pair)),
        ];
        probes
            .into_iter()
            .map(|(name, probe)| {
                Ok(NamedGrid {
                    stem: format!("{}-{name}", cfg.kind.as_str()),
                    grid: scan(cfg, probe)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?
    } else {
        vec![NamedGrid {
            stem: cfg.kind.as_str().to_string(),
            grid: scan(cfg, cfg.probe)?,
        }]
    };
    output::write_run(cfg, subcommand, &grids)
}

fn with_threads<T>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError>
where
    T: Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::validation("threads", 0, "need at least one thread"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::validation("threads", threads.unwrap_or(0), e.to_string()))?;
    Ok(pool.install(f))
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let (args, kind, name, compare) = match cli.command {
        Command::Selftest(a) => {
            let checks = match with_threads(a.threads, selftest::run_checks) {
                Ok(c) => c,
                Err(e) => return report(&e),
            };
            let mut ok = true;
            for c in &checks {
                println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.pass;
            }
            return if ok { 0 } else { 1 };
        }
        Command::Fastcars(a) => (a, Some(SignalKind::Fastcars), "fastcars", false),
        Command::QfrsIntensity(a) => (a, Some(SignalKind::QfrsIntensity), "qfrs-intensity", false),
        Command::QfrsHeterodyne(a) => (a, Some(SignalKind::QfrsHeterodyne), "qfrs-heterodyne", false),
        Command::CompareProbes(a) => (a, None, "compare-probes", true),
    };
    let result = load_run_config(&args, kind)
        .and_then(|cfg| with_threads(args.threads, || execute(&cfg, name, compare)).and_then(|r| r));
    match result {
        Ok(path) => {
            println!("{}", path.display());
            0
        }
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
