//! `qlens`: foci ladders, n̄ sweeps, single-channel trajectories and the
//! oracle battery, all as CSV on stdout or `--output`.

mod commands;
mod manifest;
mod ranges;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qlens::{LensModel, RunConfig};
use qlens_verify::Level;

#[derive(Parser, Debug)]
#[command(
    name = "qlens",
    version,
    about = "Quantized-field atom lens: closed forms, sweeps and oracle checks"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Run file (`key = value`); the built-in cesium set when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Destination for the CSV or report; standard output when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; all available cores by default.
    #[arg(long, global = true, env = "QLENS_THREADS")]
    threads: Option<usize>,
    /// Reserved. Every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Focal time, focus position and magnification per photon number.
    Foci {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 30)]
        n_max: usize,
    },
    /// Quality factor and purity over a list of mean photon numbers.
    Sweep {
        /// Comma-separated n̄ values.
        #[arg(long, conflicts_with = "nbar_range", required_unless_present = "nbar_range")]
        nbar_list: Option<String>,
        /// `start:stop:count`, endpoints included.
        #[arg(long)]
        nbar_range: Option<String>,
        /// Comma-separated times (s) for the covariance cross-check columns;
        /// 1.5, 2 and 5 t_L by default.
        #[arg(long)]
        times: Option<String>,
        #[arg(long, default_value = "exact")]
        lens: LensModel,
    },
    /// Gaussian parameters of one Fock channel on a time grid.
    Evolve {
        #[arg(long)]
        n: usize,
        /// `start:stop:count` in seconds, endpoints included.
        #[arg(long)]
        t_grid: String,
    },
    /// Closed forms against the RK4 and split-step oracles.
    Verify {
        #[arg(long, default_value = "quick")]
        level: Level,
    },
}

/// Failure classes mapped onto the exit-code contract.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<qlens::Error> for CliError {
    fn from(e: qlens::Error) -> Self {
        match e {
            qlens::Error::Config(_) | qlens::Error::Distribution(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

macro_rules! via_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                qlens::Error::from(e).into()
            }
        }
    )*};
}
via_core!(
    qlens::ConfigError,
    qlens::DistributionError,
    qlens::GaussianError,
    qlens::LensError,
    qlens::EnsembleError
);

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::cesium()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            text.parse()
                .map_err(|e: qlens::ConfigError| CliError::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let cfg = load_config(g.config.as_deref())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let output = g.output.as_deref();
    match &cli.command {
        Command::Foci { n_min, n_max } => {
            if n_min > n_max {
                return Err(CliError::Config(format!("--n-min {n_min} exceeds --n-max {n_max}")));
            }
            commands::warn_dispersive(&cfg, *n_max);
            emit(output, &commands::foci(&cfg, *n_min, *n_max)?)
        }
        Command::Sweep {
            nbar_list,
            nbar_range,
            times,
            lens,
        } => {
            let nbars = match (nbar_list, nbar_range) {
                (Some(list), _) => ranges::parse_list(list, "--nbar-list")?,
                (None, Some(range)) => ranges::parse_range(range, "--nbar-range")?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let t_l = cfg.atom.interaction_time();
            let times = match times {
                Some(t) => ranges::parse_list(t, "--times")?,
                None => qlens::ensemble::CROSS_CHECK_TIMES.iter().map(|f| f * t_l).collect(),
            };
            let sweep = commands::sweep(&pool, &cfg, &nbars, &times, *lens)?;
            commands::warn_dispersive(&cfg, sweep.n_max());
            emit(output, &sweep.to_csv())?;
            if let Some(path) = output {
                let m = manifest::RunManifest::for_sweep(&cfg, &nbars, &times, *lens, &sweep)?;
                fs::write(manifest::path_for(path), m.to_json())?;
            }
            Ok(())
        }
        Command::Evolve { n, t_grid } => {
            let times = ranges::parse_range(t_grid, "--t-grid")?;
            commands::warn_dispersive(&cfg, *n);
            emit(output, &commands::evolve(&cfg, *n, &times)?)
        }
        Command::Verify { level } => {
            let checks = pool.install(|| qlens_verify::run_battery(&cfg.atom, *level));
            let mut report = String::new();
            for c in &checks {
                report.push_str(&c.to_string());
                report.push('\n');
            }
            emit(output, &report)?;
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failed.join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qlens: {e}");
            ExitCode::from(e.code())
        }
    }
}
