//! `otto`: command-line front end for the Otto-cycle simulator.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 maximum found on the edge of the scanned grid.

mod commands;
mod config;
mod output;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use otto_core::PropagateOptions;

use crate::commands::Run;
use crate::config::Settings;
use crate::output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Numeric(#[from] otto_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Numeric(otto_core::Error::InvalidParameter(_)) => 2,
            CliError::Numeric(otto_core::Error::MaxOnBoundary { .. }) => 4,
            CliError::Numeric(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "otto", version, about = "Finite-time quantum Otto cycle of a driven qubit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relative entropy and friction work of a closed up-down field loop, over a grid of rates.
    FrictionLoop(Common),
    /// One cycle: figures of merit and the (omega, n) trajectory.
    Cycle(Common),
    /// Figures of merit over a grid of total times at a single angle.
    Sweep(Common),
    /// Disorder-averaged figures of merit over a grid of total times.
    DisorderSweep(Common),
    /// Averaged efficiency against power along the time grid.
    PvCurve(Common),
    /// Efficiency at maximum power, one row per scanned parameter value.
    MaxPower(Common),
    /// Waveplate and dephasing program that realises one cycle.
    OpticsCompile(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Settings file with `key = value` lines; flags override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Propagator tolerance.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<String>,
    /// Quadrature nodes for disorder averages.
    #[arg(long)]
    nodes: Option<String>,
    /// sigma-table or beta-table.
    #[arg(long)]
    preset: Option<String>,
    /// Misalignment angle, e.g. 0.3 or pi/5.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// gaussian:<sigma2>, flat or delta:<angle>.
    #[arg(long)]
    disorder: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Product of rate and stroke time.
    #[arg(long = "alpha-t", allow_hyphen_values = true)]
    alpha_t: Option<String>,
    /// Rates for friction-loop, as a grid.
    #[arg(long = "alpha-grid")]
    alpha_grid: Option<String>,
    /// Total-time grid: start:stop:n, geom:start:stop:n, a list, or none.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long = "tau-iso", allow_hyphen_values = true)]
    tau_iso: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long = "beta-c", allow_hyphen_values = true)]
    beta_c: Option<String>,
    #[arg(long = "beta-h", allow_hyphen_values = true)]
    beta_h: Option<String>,
    /// cold-hundred, ratio-tenth or direct, for beta_h scans.
    #[arg(long = "beta-convention")]
    beta_convention: Option<String>,
    /// Parameter scanned by max-power: sigma2, beta_h or theta.
    #[arg(long)]
    scan: Option<String>,
    /// Values of the scanned parameter.
    #[arg(long)]
    values: Option<String>,
    #[arg(long = "refine-tol")]
    refine_tol: Option<String>,
    /// Trajectory samples per ramp.
    #[arg(long)]
    samples: Option<String>,
    /// Any other setting as KEY=VALUE; may repeat.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn flag_settings(&self) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        let flags = [
            ("tol", &self.tol),
            ("nodes", &self.nodes),
            ("theta", &self.theta),
            ("disorder", &self.disorder),
            ("alpha", &self.alpha),
            ("alpha_t", &self.alpha_t),
            ("alpha_grid", &self.alpha_grid),
            ("grid", &self.grid),
            ("tau_iso", &self.tau_iso),
            ("beta", &self.beta),
            ("beta_c", &self.beta_c),
            ("beta_h", &self.beta_h),
            ("beta_convention", &self.beta_convention),
            ("scan", &self.scan),
            ("values", &self.values),
            ("refine_tol", &self.refine_tol),
            ("samples", &self.samples),
        ];
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
            s.set(k.trim(), v.trim())?;
        }
        for (k, v) in flags {
            if let Some(v) = v {
                s.set(k, v.as_str())?;
            }
        }
        Ok(s)
    }

    /// Preset, then config file, then flags.
    fn resolve(&self) -> Result<Run, CliError> {
        let flags = self.flag_settings()?;
        let file = match &self.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        let preset_name = self
            .preset
            .clone()
            .or_else(|| flags.get("preset").map(String::from))
            .or_else(|| file.get("preset").map(String::from));
        let mut settings = match &preset_name {
            Some(name) => config::preset(name)?,
            None => Settings::default(),
        };
        settings.overlay(&file);
        settings.overlay(&flags);
        if let Some(name) = &preset_name {
            settings.set("preset", name.as_str())?;
        }
        let tol = settings.positive("tol", PropagateOptions::DEFAULT_TOL)?;
        let nodes = settings.count("nodes", otto_core::ensemble::DEFAULT_NODES)?;
        Ok(Run { settings, tol, nodes })
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("OTTO_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("OTTO_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start {n} worker threads: {e}")))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (common, run_command): (&Common, fn(&Run) -> Result<output::Document, CliError>) = match &cli.command {
        Command::FrictionLoop(c) => (c, commands::friction_loop),
        Command::Cycle(c) => (c, commands::cycle),
        Command::Sweep(c) => (c, commands::sweep),
        Command::DisorderSweep(c) => (c, commands::disorder_sweep),
        Command::PvCurve(c) => (c, commands::pv_curve),
        Command::MaxPower(c) => (c, commands::max_power),
        Command::OpticsCompile(c) => (c, commands::optics_compile),
    };
    let run = common.resolve()?;
    let format = match common.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let text = run_command(&run)?.render(format);
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Config(format!("cannot write output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("otto: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
