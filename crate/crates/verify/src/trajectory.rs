//! Closed-form Gaussian trajectories against adaptive RK4.

use qlens::{evolve, mode_expand, Config, FockChannel, LensResult};
use qlens_oracle::{integrate_riccati, GaussianState, OdeOptions, RiccatiSystem};

use crate::model::Potential;
use crate::VerifyError;

/// Worst disagreement over a trajectory. u, v, x̄ and p̄ are relative to
/// their natural scales (see [`trajectory_gap`]); μ is in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrajectoryGap {
    pub u: f64,
    pub v: f64,
    pub xbar: f64,
    pub pbar: f64,
    pub mu: f64,
    pub samples: usize,
}

impl TrajectoryGap {
    pub fn worst_relative(&self) -> f64 {
        self.u.max(self.v).max(self.xbar).max(self.pbar)
    }

    fn merge(self, other: TrajectoryGap) -> TrajectoryGap {
        TrajectoryGap {
            u: self.u.max(other.u),
            v: self.v.max(other.v),
            xbar: self.xbar.max(other.xbar),
            pbar: self.pbar.max(other.pbar),
            mu: self.mu.max(other.mu),
            samples: self.samples + other.samples,
        }
    }
}

/// RK4 states of channel n at `times`: the harmonic surrogate until t_L,
/// free flight afterwards. Centroids are measured from the potential minimum.
pub fn oracle_trajectory(cfg: &Config, n: usize, times: &[f64]) -> Result<Vec<GaussianState>, VerifyError> {
    let potential = Potential::from_config(cfg);
    let t_l = cfg.interaction_time();
    let b0 = cfg.beam_width();
    let options = OdeOptions::default();
    let inside = RiccatiSystem {
        mass: cfg.mass(),
        hbar: qlens::hbar(),
        omega_sq: potential.omega_sq(n),
    };
    let outside = RiccatiSystem {
        omega_sq: 0.0,
        ..inside
    };
    let start = GaussianState {
        t: 0.0,
        xbar: -potential.center(),
        pbar: 0.0,
        u: 1.0 / (b0 * b0),
        v: 0.0,
        mu: 0.0,
    };
    let (early, late): (Vec<f64>, Vec<f64>) = times.iter().partition(|&&t| t <= t_l);
    let mut probe = early.clone();
    probe.push(t_l);
    let mut states = integrate_riccati(&inside, &start, &probe, &options)?;
    let exit = states.pop().expect("exit sample");
    states.extend(integrate_riccati(&outside, &exit, &late, &options)?);
    Ok(states)
}

/// Compares channel n on `count` samples spread over `[0, horizon]` with
/// `horizon = max(5 τ0', 2 t_L)` and half of them inside the cavity.
///
/// Scales: u itself; `max(|v|, u)` for v; `max(|x_f|, sup|x̄|)` for x̄ and
/// `max(m |Ω| |x_f|, sup|p̄|)` for p̄, falling back to b0 and ħ/b0 when the
/// centroid never moves.
pub fn trajectory_gap(cfg: &Config, n: usize, count: usize) -> Result<TrajectoryGap, VerifyError> {
    let expansion = mode_expand(cfg)?;
    let channel = FockChannel::new(n, &expansion, cfg);
    let lens = LensResult::exact(&channel, cfg);
    let t_l = cfg.interaction_time();
    let horizon = (5.0 * lens.rayleigh_time).max(2.0 * t_l);
    let half = (count / 2).max(2);
    let mut times: Vec<f64> = (0..=half).map(|i| t_l * i as f64 / half as f64).collect();
    times.extend((1..=half).map(|i| t_l + (horizon - t_l) * i as f64 / half as f64));

    let oracle = oracle_trajectory(cfg, n, &times)?;
    let closed = times
        .iter()
        .map(|&t| evolve(&channel, &expansion, cfg, t))
        .collect::<Result<Vec<_>, _>>()?;

    let potential = Potential::from_config(cfg);
    let x_f = potential.center().abs();
    let omega = potential.omega_sq(n).abs().sqrt();
    let sup = |f: &dyn Fn(&qlens::Params) -> f64| closed.iter().map(f).fold(0.0f64, f64::max);
    let mut x_scale = x_f.max(sup(&|p| p.xbar.abs()));
    if x_scale == 0.0 {
        x_scale = cfg.beam_width();
    }
    let mut p_scale = (cfg.mass() * omega * x_f).max(sup(&|p| p.pbar.abs()));
    if p_scale == 0.0 {
        p_scale = qlens::hbar::<f64>() / cfg.beam_width();
    }

    Ok(closed
        .iter()
        .zip(&oracle)
        .map(|(c, o)| TrajectoryGap {
            u: (c.u - o.u).abs() / c.u,
            v: (c.v - o.v).abs() / c.v.abs().max(c.u),
            xbar: (c.xbar - o.xbar).abs() / x_scale,
            pbar: (c.pbar - o.pbar).abs() / p_scale,
            mu: (c.mu - o.mu).abs(),
            samples: 1,
        })
        .fold(TrajectoryGap::default(), TrajectoryGap::merge))
}
