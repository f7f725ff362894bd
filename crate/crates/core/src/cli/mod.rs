//! Command-line front end: subcommands emitting CSV with a reproducible header.

pub mod config;
mod commands;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::ensemble::Execution;

pub use config::{ConfigError, RunConfig, KEYS};

#[derive(Debug, Parser)]
#[command(name = "qtraj", version, about = "Frequent-measurement decay and quantum trajectory simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Config file (`key = value` lines) or a CSV previously written by qtraj.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override one config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub solver: Option<Solver>,
    #[arg(long, global = true, value_enum)]
    pub kind: Option<Kind>,
    /// Run ensemble trajectories on one thread. Output is identical either way.
    #[arg(long, global = true)]
    pub serial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Survival amplitude from the analytic, scaling and Volterra solvers.
    Amplitude,
    /// Effective decay rate, closed form against both empirical estimates.
    Rate,
    /// One MCWF or homodyne trajectory.
    Traj,
    /// Ensemble mean against the master equation.
    Ensemble,
    /// Short-time Zeno retention and fidelity against the interval.
    Zeno,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Amplitude => "amplitude",
            Command::Rate => "rate",
            Command::Traj => "traj",
            Command::Ensemble => "ensemble",
            Command::Zeno => "zeno",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    Analytic,
    Scaled,
    Volterra,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Mcwf,
    Homodyne,
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

/// Resolves the configuration in precedence order: defaults, file, `--set`, flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::defaults();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.apply_file(&text, &path.display().to_string())?;
    }
    for s in &cli.set {
        cfg.apply_assignment(s, "--set")?;
    }
    if let Some(seed) = cli.seed {
        cfg.set("run.seed", &seed.to_string(), "--seed")?;
    }
    if let Some(solver) = cli.solver {
        cfg.set("run.solver", &value_name(solver), "--solver")?;
    }
    if let Some(kind) = cli.kind {
        cfg.set("run.kind", &value_name(kind), "--kind")?;
    }
    Ok(cfg)
}

/// Runs `command` against a resolved configuration and returns the CSV text.
pub fn execute(command: Command, cfg: &RunConfig, execution: Execution) -> Result<String, CliError> {
    commands::run(command, cfg, execution)
}

/// Parses `args`, runs, writes output, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let execution = if cli.serial { Execution::Serial } else { Execution::Parallel };
    let result = resolve_config(&cli).and_then(|cfg| execute(cli.command, &cfg, execution));
    let text = match result {
        Ok(text) => text,
        Err(e) => {
            eprintln!("qtraj {}: {e}", cli.command.name());
            return e.exit_code();
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    match written {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("qtraj: {msg}");
            1
        }
    }
}
