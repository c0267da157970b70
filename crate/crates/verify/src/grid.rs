//! Closed forms and ensemble sums against split-step wavefunctions.

use num_complex::Complex64;
use qlens::{covariance, evolve, mode_expand, purity, Config, Distribution, FockChannel, LensModel, LensTable};
use qlens_oracle::{GridMoments, GridState};

use crate::model::Potential;
use crate::VerifyError;

/// Which potential the in-cavity propagation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surrogate {
    /// `n (g0 + g1 x + g2 x²/2)`, the expansion the closed forms assume.
    Quadratic,
    /// The full `n g_max sin²(k (x - x0))`.
    Full,
}

/// Grid spacing and size shared by every channel of a comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPlan {
    pub points: usize,
    pub dx: f64,
    /// Time steps per `min(2π/Ω_n, τ0)`.
    pub steps_per_scale: f64,
}

impl GridPlan {
    /// Δx = min(b0, b_{n_max})/16 on `points` samples; 20 000 steps per
    /// oscillation period (or per τ0 if shorter).
    pub fn for_channels(cfg: &Config, n_max: usize, points: usize) -> Self {
        let potential = Potential::from_config(cfg);
        let narrowest = potential
            .ground_width(n_max)
            .map_or(cfg.beam_width(), |b| b.min(cfg.beam_width()));
        GridPlan {
            points,
            dx: narrowest / 16.0,
            steps_per_scale: 20_000.0,
        }
    }

    fn steps(&self, cfg: &Config, n: usize, duration: f64) -> usize {
        let potential = Potential::from_config(cfg);
        let w2 = potential.omega_sq(n).abs();
        let period = if w2 > 0.0 {
            2.0 * std::f64::consts::PI / w2.sqrt()
        } else {
            f64::INFINITY
        };
        let dt = period.min(cfg.rayleigh_time()) / self.steps_per_scale;
        ((duration / dt).ceil() as usize).max(16)
    }
}

/// Channel n on the grid at time `t`: the incoming Gaussian on the beam axis,
/// propagated through the cavity and then freely. Positions are measured
/// from the beam axis.
pub fn channel_state(
    cfg: &Config,
    plan: &GridPlan,
    n: usize,
    surrogate: Surrogate,
    t: f64,
) -> Result<GridState, VerifyError> {
    let b0 = cfg.beam_width();
    let mut state = GridState::gaussian(
        plan.points,
        plan.dx,
        cfg.mass(),
        qlens::hbar(),
        0.0,
        0.0,
        0.0,
        Complex64::new(1.0 / (b0 * b0), 0.0),
    )?;
    let t_l = cfg.interaction_time();
    let inside = t.min(t_l);
    if n == 0 {
        state.propagate_free(t)?;
        return Ok(state);
    }
    let potential = Potential::from_config(cfg);
    let scale = n as f64;
    let steps = plan.steps(cfg, n, inside);
    match surrogate {
        Surrogate::Quadratic => state.propagate(|x| scale * potential.quadratic(x), inside, steps)?,
        Surrogate::Full => state.propagate(|x| scale * potential.full(x), inside, steps)?,
    }
    if t > t_l {
        state.propagate_free(t - t_l)?;
    }
    Ok(state)
}

/// Largest relative gap between grid widths under the quadratic surrogate
/// and the closed-form `u^{-1/2}` at the given times.
pub fn width_gap(cfg: &Config, plan: &GridPlan, n: usize, times: &[f64]) -> Result<f64, VerifyError> {
    let expansion = mode_expand(cfg)?;
    let channel = FockChannel::new(n, &expansion, cfg);
    let mut worst = 0.0f64;
    for &t in times {
        let grid = channel_state(cfg, plan, n, Surrogate::Quadratic, t)?.moments().width();
        let closed = evolve(&channel, &expansion, cfg, t)?.width();
        worst = worst.max((grid - closed).abs() / closed);
    }
    Ok(worst)
}

/// `|B_full - B_closed| / B_closed` at the cavity exit, the cost of the
/// harmonic approximation for channel n.
pub fn harmonic_approximation_error(cfg: &Config, plan: &GridPlan, n: usize) -> Result<f64, VerifyError> {
    let expansion = mode_expand(cfg)?;
    let channel = FockChannel::new(n, &expansion, cfg);
    let t_l = cfg.interaction_time();
    let full = channel_state(cfg, plan, n, Surrogate::Full, t_l)?.moments().width();
    let closed = evolve(&channel, &expansion, cfg, t_l)?.width();
    Ok((full - closed).abs() / closed)
}

/// Moments of `Σ |w_n|² |ψ_n⟩⟨ψ_n|` from per-channel grid moments.
pub fn mixture_moments(parts: &[(f64, GridMoments)]) -> GridMoments {
    let total: f64 = parts.iter().map(|(w, _)| w).sum();
    let avg = |f: &dyn Fn(&GridMoments) -> f64| parts.iter().map(|(w, m)| w * f(m)).sum::<f64>() / total;
    let mean_x = avg(&|m| m.mean_x);
    let mean_p = avg(&|m| m.mean_p);
    GridMoments {
        mean_x,
        mean_p,
        sigma_xx2: avg(&|m| m.sigma_xx2 + m.mean_x * m.mean_x) - mean_x * mean_x,
        sigma_pp2: avg(&|m| m.sigma_pp2 + m.mean_p * m.mean_p) - mean_p * mean_p,
        sigma_xp: avg(&|m| m.sigma_xp + m.mean_x * m.mean_p) - mean_x * mean_p,
        norm: avg(&|m| m.norm),
    }
}

/// Relative gaps of (σ_xx², σ_pp², σ_xp) between the assembled grid
/// mixture and [`covariance`]. σ_xp is scaled by `sqrt(σ_xx² σ_pp²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentGap {
    pub xx: f64,
    pub pp: f64,
    pub xp: f64,
}

impl MomentGap {
    pub fn worst(&self) -> f64 {
        self.xx.max(self.pp).max(self.xp)
    }
}

pub fn mixture_gap(cfg: &Config, dist: &Distribution, plan: &GridPlan, t: f64) -> Result<MomentGap, VerifyError> {
    let lenses = LensTable::build(LensModel::Exact, cfg, dist.max_photons())?;
    let closed = covariance(dist, &lenses, cfg, t)?;
    let parts = dist
        .iter()
        .map(|(n, w)| Ok((w, channel_state(cfg, plan, n, Surrogate::Quadratic, t)?.moments())))
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let grid = mixture_moments(&parts);
    let scale = (closed.sigma_xx2 * closed.sigma_pp2).sqrt();
    Ok(MomentGap {
        xx: (grid.sigma_xx2 - closed.sigma_xx2).abs() / closed.sigma_xx2,
        pp: (grid.sigma_pp2 - closed.sigma_pp2).abs() / closed.sigma_pp2,
        xp: (grid.sigma_xp - closed.sigma_xp).abs() / scale,
    })
}

/// Purity from the closed double sum and from grid overlaps
/// `ΣΣ |w_n|²|w_m|² |⟨ψ_m|ψ_n⟩|²` at the cavity exit.
pub fn purity_pair(cfg: &Config, dist: &Distribution, plan: &GridPlan) -> Result<(f64, f64), VerifyError> {
    let lenses = LensTable::build(LensModel::Exact, cfg, dist.max_photons())?;
    let closed = purity(dist, &lenses, cfg)?;
    let t_l = cfg.interaction_time();
    let mut states = dist
        .iter()
        .map(|(n, w)| Ok((w, channel_state(cfg, plan, n, Surrogate::Quadratic, t_l)?)))
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let points = states.iter().map(|(_, s)| s.len()).max().unwrap_or(plan.points);
    for (_, s) in &mut states {
        s.widen_to(points)?;
    }
    let mut grid = 0.0;
    for (wn, a) in &states {
        for (wm, b) in &states {
            grid += wn * wm * a.overlap(b)?.norm_sqr();
        }
    }
    Ok((closed, grid))
}
