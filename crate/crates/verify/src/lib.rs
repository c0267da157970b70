//! Cross-checks between the qlens closed forms and the qlens-oracle numerics.
//!
//! [`run_battery`] is what `qlens verify` executes. The individual
//! comparisons are public so tests can run them at other parameters.

pub mod grid;
pub mod model;
pub mod trajectory;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use qlens::{focal_time, focal_time_by_minimization, mode_expand, Config, FockChannel, PhotonDistribution};
use qlens_oracle::{GridError, OdeError};
use thiserror::Error;

pub use grid::{GridPlan, MomentGap, Surrogate};
pub use trajectory::TrajectoryGap;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Core(#[from] qlens::Error),
    #[error("ode oracle: {0}")]
    Ode(#[from] OdeError),
    #[error("grid oracle: {0}")]
    Grid(#[from] GridError),
}

macro_rules! core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for VerifyError {
            fn from(e: $t) -> Self {
                VerifyError::Core(e.into())
            }
        }
    )*};
}
core_error!(
    qlens::GaussianError,
    qlens::LensError,
    qlens::EnsembleError,
    qlens::DistributionError,
    qlens::ConfigError
);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(format!("unknown verification level `{other}` (quick or full)")),
        }
    }
}

/// One line of the verification table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seconds: f64,
    /// Error text when the comparison could not be computed.
    pub error: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, measured: f64, tolerance: f64, started: Instant) -> Self {
        Check {
            name: name.into(),
            measured,
            tolerance,
            passed: measured.is_finite() && measured <= tolerance,
            seconds: started.elapsed().as_secs_f64(),
            error: None,
        }
    }

    /// A check whose computation itself failed.
    fn failed(name: impl Into<String>, started: Instant, error: &VerifyError) -> Self {
        Check {
            name: name.into(),
            measured: f64::NAN,
            tolerance: 0.0,
            passed: false,
            seconds: started.elapsed().as_secs_f64(),
            error: Some(error.to_string()),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<40} measured {:>10.3e}  tolerance {:>8.1e}  ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance,
            self.seconds
        )?;
        if let Some(e) = &self.error {
            write!(f, "  error: {e}")?;
        }
        Ok(())
    }
}

/// Relative gap between the closed-form focal time and a golden-section
/// minimization of the closed-form width. The search only pins the argmin to
/// about `sqrt(eps) τ0'`, so the gap is taken relative to t_f itself.
pub fn focal_minimization_gap(cfg: &Config, n: usize) -> Result<f64, VerifyError> {
    let expansion = mode_expand(cfg)?;
    let channel = FockChannel::new(n, &expansion, cfg);
    let closed = focal_time(&channel, cfg)?;
    let numeric = focal_time_by_minimization(&channel, cfg);
    Ok((closed - numeric).abs() / closed)
}

/// Grid size used by the battery.
pub const BATTERY_POINTS: usize = 4096;

fn timed<F>(name: String, f: F) -> Check
where
    F: FnOnce(Instant) -> Result<Check, VerifyError>,
{
    let started = Instant::now();
    f(started).unwrap_or_else(|e| Check::failed(name, started, &e))
}

/// Runs the oracle comparisons on `cfg`. Quick covers RK4 trajectories, the
/// focal minimization, quadratic grid widths, mixed-state moments and the
/// purity overlaps; full adds more channels and the sin² budget.
pub fn run_battery(cfg: &Config, level: Level) -> Vec<Check> {
    let mut checks = Vec::new();
    let channels: &[usize] = match level {
        Level::Quick => &[1, 5, 20],
        Level::Full => &[1, 2, 5, 10, 20, 30],
    };

    for &n in channels {
        let started = Instant::now();
        let shape = format!("rk4 trajectory n={n} (u v x p)");
        let phase = format!("rk4 gouy phase n={n} (rad)");
        match trajectory::trajectory_gap(cfg, n, 64) {
            Ok(gap) => {
                checks.push(Check::new(shape, gap.worst_relative(), 1e-8, started));
                checks.push(Check::new(phase, gap.mu, 1e-8, started));
            }
            Err(e) => {
                checks.push(Check::failed(shape, started, &e));
                checks.push(Check::failed(phase, started, &e));
            }
        }
    }

    for &n in channels {
        let name = format!("focal time vs golden section n={n}");
        checks.push(timed(name.clone(), |s| {
            Ok(Check::new(name, focal_minimization_gap(cfg, n)?, 1e-6, s))
        }));
    }

    let t_l = cfg.interaction_time();
    let grid_channels: &[usize] = match level {
        Level::Quick => &[1, 10],
        Level::Full => &[1, 5, 10, 20],
    };
    for &n in grid_channels {
        let name = format!("grid width, quadratic n={n}");
        checks.push(timed(name.clone(), |s| {
            let plan = GridPlan::for_channels(cfg, n, BATTERY_POINTS);
            let gap = grid::width_gap(cfg, &plan, n, &[0.5 * t_l, t_l, 2.0 * t_l])?;
            Ok(Check::new(name, gap, 1e-6, s))
        }));
    }

    let name = "mixed moments, coherent nbar=10".to_string();
    checks.push(timed(name.clone(), |s| {
        let dist = PhotonDistribution::coherent(10.0, 1e-12)?;
        let plan = GridPlan::for_channels(cfg, dist.max_photons(), BATTERY_POINTS);
        let gap = grid::mixture_gap(cfg, &dist, &plan, 2.0 * t_l)?;
        Ok(Check::new(name, gap.worst(), 1e-6, s))
    }));

    let name = "purity double sum vs overlaps".to_string();
    checks.push(timed(name.clone(), |s| {
        let dist = PhotonDistribution::coherent(5.0, 1e-12)?.truncated(12);
        let plan = GridPlan::for_channels(cfg, 12, BATTERY_POINTS);
        let (closed, grid) = grid::purity_pair(cfg, &dist, &plan)?;
        Ok(Check::new(name, (closed - grid).abs() / closed, 1e-6, s))
    }));

    if level == Level::Full {
        let name = "sin^2 vs harmonic width n=10".to_string();
        checks.push(timed(name.clone(), |s| {
            let plan = GridPlan::for_channels(cfg, 10, BATTERY_POINTS);
            Ok(Check::new(
                name,
                grid::harmonic_approximation_error(cfg, &plan, 10)?,
                0.02,
                s,
            ))
        }));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_parses() {
        assert_eq!("quick".parse::<Level>(), Ok(Level::Quick));
        assert_eq!("full".parse::<Level>(), Ok(Level::Full));
        assert!("slow".parse::<Level>().is_err());
    }

    #[test]
    fn failed_checks_never_pass() {
        let c = Check::new("x", f64::NAN, 1.0, Instant::now());
        assert!(!c.passed);
        assert!(c.to_string().starts_with("FAIL"));
    }
}
