//! Gaussian wavepacket dynamics of one Fock channel.
//!
//! Each photon number n sees the potential `n g(x)`. Expanded to second order
//! about the beam axis this is a displaced oscillator of frequency
//! `Ω_n = sqrt(n g2 / m)` centred on `x_f = -g1/g2`. A Gaussian
//!
//! ```text
//! ψ(x,t) = (u/π)^{1/4} exp(-i x̄ p̄ / 2ħ + i μ) exp[-(x - x̄)² (u + i v)/2 + i p̄ x / ħ]
//! ```
//!
//! stays Gaussian; its parameters obey `ẋ = p/m`, `ṗ = -m Ω² x̄`,
//! `K̇ = i m Ω²/ħ - i (ħ/m) K²` with `K = u + i v`, and `μ̇ = -ħ u / 2m`.
//! The beam starts as `x̄ = -x_f, p̄ = 0, u = 1/b0², v = 0, μ = 0` at the cavity
//! entrance (t = 0), feels the potential until `t_L`, and flies freely after.
//!
//! Centroids are measured from the harmonic minimum x_f. Times are absolute,
//! counted from the cavity entrance.

use num_complex::Complex;

use crate::config::AtomFieldConfig;
use crate::error::GaussianError;
use crate::lens::LensResult;
use crate::real::{hbar, Real};

/// Quadratic expansion of the coupling about x = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeExpansion<T> {
    /// g(0) (J).
    pub g0: T,
    /// g'(0) (J/m).
    pub g1: T,
    /// g''(0) (J/m²).
    pub g2: T,
    /// Position of the harmonic minimum, -g1/g2 (m).
    pub x_f: T,
}

/// Analytic derivatives of `g_max sin²(k (x - x0))` at the beam axis.
pub fn mode_expand<T: Real>(cfg: &AtomFieldConfig<T>) -> Result<ModeExpansion<T>, GaussianError> {
    let g_max = cfg.coupling_amplitude();
    let k = cfg.wavenumber();
    let kx0 = k * cfg.mode_offset();
    let curvature = (T::two() * kx0).cos();
    if curvature.abs() < T::lit(1e-12) {
        return Err(GaussianError::DegenerateCurvature);
    }
    let g0 = g_max * kx0.sin().powi(2);
    let g1 = -g_max * k * (T::two() * kx0).sin();
    let g2 = T::two() * g_max * k * k * curvature;
    Ok(ModeExpansion {
        g0,
        g1,
        g2,
        x_f: -g1 / g2,
    })
}

impl<T: Real> ModeExpansion<T> {
    /// Harmonic approximation `g0 - g1²/(2 g2) + g2 (x - x_f)²/2`.
    pub fn harmonic_coupling(&self, x: T) -> T {
        self.g0 - self.g1 * self.g1 / (T::two() * self.g2) + T::half() * self.g2 * (x - self.x_f).powi(2)
    }
}

/// Shape of the potential seen by a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confinement {
    /// n = 0: no potential, free spreading from the entrance.
    Free,
    /// g2 n > 0: oscillator of frequency Ω_n.
    Harmonic,
    /// g2 n < 0: inverted oscillator of rate κ_n (the mode has an antinode on
    /// the axis and the channel acts as a divergent lens).
    Expulsive,
}

/// Per-photon-number scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockChannel<T> {
    pub n: usize,
    pub confinement: Confinement,
    /// Ω_n (harmonic) or κ_n (expulsive), rad/s; zero for the vacuum channel.
    pub rate: T,
    /// Ground-state width b_n = sqrt(ħ / (m rate)) (m); infinite for n = 0.
    pub ground_width: T,
    /// τ_n = m b_n² / ħ (s); infinite for n = 0.
    pub tau: T,
    /// φ_n = rate · t_L (rad).
    pub phase: T,
}

impl<T: Real> FockChannel<T> {
    pub fn new(n: usize, expansion: &ModeExpansion<T>, cfg: &AtomFieldConfig<T>) -> Self {
        if n == 0 {
            return FockChannel {
                n,
                confinement: Confinement::Free,
                rate: T::zero(),
                ground_width: T::infinity(),
                tau: T::infinity(),
                phase: T::zero(),
            };
        }
        let omega_sq = T::from_count(n) * expansion.g2 / cfg.mass();
        let confinement = if omega_sq > T::zero() {
            Confinement::Harmonic
        } else {
            Confinement::Expulsive
        };
        let rate = omega_sq.abs().sqrt();
        let width_sq = cfg.hbar_over_mass() / rate;
        FockChannel {
            n,
            confinement,
            rate,
            ground_width: width_sq.sqrt(),
            tau: cfg.mass() / hbar::<T>() * width_sq,
            phase: rate * cfg.interaction_time(),
        }
    }

    /// b_n² / b0² = 1 / (rate τ0).
    pub fn width_ratio_sq(&self, cfg: &AtomFieldConfig<T>) -> T {
        T::one() / (self.rate * cfg.rayleigh_time())
    }

    /// Signed Ω_n²; negative for expulsive channels.
    pub fn omega_sq(&self) -> T {
        match self.confinement {
            Confinement::Expulsive => -self.rate * self.rate,
            _ => self.rate * self.rate,
        }
    }

    /// Initial state is squeezed in momentum (b0 > b_n), the focusing condition.
    pub fn is_momentum_squeezed(&self, cfg: &AtomFieldConfig<T>) -> bool {
        self.confinement == Confinement::Harmonic && self.ground_width < cfg.beam_width()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    InCavity,
    Free,
}

impl Stage {
    pub fn label(self) -> &'static str {
        match self {
            Stage::InCavity => "in",
            Stage::Free => "free",
        }
    }
}

/// Parameters of the Gaussian at time t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams<T> {
    pub t: T,
    /// Centroid, measured from x_f (m).
    pub xbar: T,
    /// Mean momentum (kg m/s).
    pub pbar: T,
    /// Inverse squared width (1/m²).
    pub u: T,
    /// Wavefront curvature term (1/m²).
    pub v: T,
    /// Gouy phase (rad).
    pub mu: T,
    pub stage: Stage,
}

impl<T: Real> GaussianParams<T> {
    pub fn k(&self) -> Complex<T> {
        Complex::new(self.u, self.v)
    }

    /// B = u^{-1/2} (m).
    pub fn width(&self) -> T {
        T::one() / self.u.sqrt()
    }
}

fn stage_error<T: Real>(t: T, stage: &'static str, start: T, end: T) -> GaussianError {
    GaussianError::OutOfStage {
        t: t.to_f64().unwrap_or(f64::NAN),
        stage,
        start: start.to_f64().unwrap_or(f64::NAN),
        end: end.to_f64().unwrap_or(f64::NAN),
    }
}

/// Continuous branch of `atan2(a sin θ, cos θ)` following θ across the poles
/// of tan θ (a > 0).
fn unwrapped_atan_tan<T: Real>(a: T, theta: T) -> T {
    let principal = (a * theta.sin()).atan2(theta.cos());
    let turns = ((theta - principal) / T::TAU()).round();
    principal + turns * T::TAU()
}

/// Envelope (K, μ) and centroid of a channel inside the cavity.
fn in_cavity<T: Real>(ch: &FockChannel<T>, x_f: T, cfg: &AtomFieldConfig<T>, t: T) -> GaussianParams<T> {
    let b0_sq = cfg.beam_width() * cfg.beam_width();
    let m = cfg.mass();
    let (u, v, mu, xbar, pbar) = match ch.confinement {
        Confinement::Free => {
            let tt = t / cfg.rayleigh_time();
            let d = T::one() + tt * tt;
            (
                T::one() / (b0_sq * d),
                -tt / (b0_sq * d),
                -T::half() * tt.atan(),
                -x_f,
                T::zero(),
            )
        }
        Confinement::Harmonic => {
            let theta = ch.rate * t;
            let (s, c) = theta.sin_cos();
            let r = ch.width_ratio_sq(cfg);
            let d = c * c + r * r * s * s;
            let u = T::one() / (b0_sq * d);
            let v = s * c * (T::one() - r * r) / (r * b0_sq * d);
            let mu = -T::half() * unwrapped_atan_tan(r, theta);
            (u, v, mu, -x_f * c, m * ch.rate * x_f * s)
        }
        Confinement::Expulsive => {
            let theta = ch.rate * t;
            let (sh, chh) = (theta.sinh(), theta.cosh());
            let rho = ch.width_ratio_sq(cfg);
            let d = chh * chh + rho * rho * sh * sh;
            let u = T::one() / (b0_sq * d);
            let v = -sh * chh * (T::one() + rho * rho) / (rho * b0_sq * d);
            let mu = -T::half() * (rho * sh).atan2(chh);
            (u, v, mu, -x_f * chh, -m * ch.rate * x_f * sh)
        }
    };
    GaussianParams {
        t,
        xbar,
        pbar,
        u,
        v,
        mu,
        stage: Stage::InCavity,
    }
}

/// Closed-form state for `0 ≤ t ≤ t_L`.
pub fn evolve_in_cavity<T: Real>(
    ch: &FockChannel<T>,
    expansion: &ModeExpansion<T>,
    cfg: &AtomFieldConfig<T>,
    t: T,
) -> Result<GaussianParams<T>, GaussianError> {
    let t_l = cfg.interaction_time();
    if !(t >= T::zero() && t <= t_l) {
        return Err(stage_error(t, "in-cavity", T::zero(), t_l));
    }
    Ok(in_cavity(ch, expansion.x_f, cfg, t))
}

/// Free flight from a known exit state: `1/K` grows by `i ħ Δt / m`.
fn free_from_exit<T: Real>(exit: &GaussianParams<T>, cfg: &AtomFieldConfig<T>, t: T) -> GaussianParams<T> {
    let dt = t - exit.t;
    let inv_exit = exit.k().inv();
    let inv = inv_exit + Complex::new(T::zero(), cfg.hbar_over_mass() * dt);
    let k = inv.inv();
    let mu = exit.mu - T::half() * ((inv.im / inv.re).atan() - (inv_exit.im / inv_exit.re).atan());
    GaussianParams {
        t,
        xbar: exit.xbar + exit.pbar * dt / cfg.mass(),
        pbar: exit.pbar,
        u: k.re,
        v: k.im,
        mu,
        stage: Stage::Free,
    }
}

/// Closed-form state for `t ≥ t_L`.
pub fn evolve_free<T: Real>(
    ch: &FockChannel<T>,
    expansion: &ModeExpansion<T>,
    cfg: &AtomFieldConfig<T>,
    t: T,
) -> Result<GaussianParams<T>, GaussianError> {
    let t_l = cfg.interaction_time();
    if !(t >= t_l) || !t.is_finite() {
        return Err(stage_error(t, "free-flight", t_l, T::infinity()));
    }
    let x_f = expansion.x_f;
    let params = match ch.confinement {
        Confinement::Free => GaussianParams {
            stage: Stage::Free,
            ..in_cavity(ch, x_f, cfg, t)
        },
        Confinement::Expulsive => {
            let exit = in_cavity(ch, x_f, cfg, t_l);
            free_from_exit(&exit, cfg, t)
        }
        Confinement::Harmonic => {
            let b0_sq = cfg.beam_width() * cfg.beam_width();
            let (s, c) = ch.phase.sin_cos();
            let r = ch.width_ratio_sq(cfg);
            let r2 = r * r;
            let elapsed = t - t_l;
            let tt = elapsed / ch.tau;
            let d = (c - tt * s).powi(2) + r2 * (s + tt * c).powi(2);
            let u = T::one() / (b0_sq * d);
            let v = (s * c * (T::one() - r2) - tt * (r2 * c * c + s * s)) / (r * b0_sq * d);

            // μ̇ = -ħ u / 2m integrates in closed form because D(T) is quadratic
            // with discriminant r².
            let a = s * s + r2 * c * c;
            let b = s * c * (r2 - T::one());
            let mu_exit = -T::half() * unwrapped_atan_tan(r, ch.phase);
            let mu = mu_exit - T::half() * (((a * tt + b) / r).atan() - (b / r).atan());

            GaussianParams {
                t,
                xbar: -x_f * c + ch.rate * elapsed * x_f * s,
                pbar: cfg.mass() * ch.rate * x_f * s,
                u,
                v,
                mu,
                stage: Stage::Free,
            }
        }
    };
    Ok(params)
}

/// Dispatches on the stage of `t`.
pub fn evolve<T: Real>(
    ch: &FockChannel<T>,
    expansion: &ModeExpansion<T>,
    cfg: &AtomFieldConfig<T>,
    t: T,
) -> Result<GaussianParams<T>, GaussianError> {
    if t <= cfg.interaction_time() {
        evolve_in_cavity(ch, expansion, cfg, t)
    } else {
        evolve_free(ch, expansion, cfg, t)
    }
}

/// Same free-flight state as [`evolve_free`], propagated generically from the
/// closed-form exit state instead of through the harmonic free-flight formulas.
pub fn evolve_free_from_exit<T: Real>(
    ch: &FockChannel<T>,
    expansion: &ModeExpansion<T>,
    cfg: &AtomFieldConfig<T>,
    t: T,
) -> Result<GaussianParams<T>, GaussianError> {
    let t_l = cfg.interaction_time();
    if !(t >= t_l) {
        return Err(stage_error(t, "free-flight", t_l, T::infinity()));
    }
    let exit = in_cavity(ch, expansion.x_f, cfg, t_l);
    Ok(free_from_exit(&exit, cfg, t))
}

/// Post-lens width `B_n(t) = b0' sqrt(1 + ((t - t_f)/τ0')²)`.
///
/// Valid after the exit (and for all t ≥ 0 on the vacuum channel, whose
/// "lens" is the entrance plane).
pub fn beam_width<T: Real>(lens: &LensResult<T>, cfg: &AtomFieldConfig<T>, t: T) -> Result<T, GaussianError> {
    let start = if lens.n == 0 { T::zero() } else { cfg.interaction_time() };
    if !(t >= start) {
        return Err(stage_error(t, "free-flight", start, T::infinity()));
    }
    let x = (t - lens.t_focus) / lens.rayleigh_time;
    Ok(lens.waist * (T::one() + x * x).sqrt())
}

/// Gouy phase μ(t) for any t ≥ 0.
///
/// Inside the cavity: `-½ arctan[(b_n²/b0²) tan Ω_n t]` on its continuous
/// branch. After the exit: `μ(t_L) - ½[arctan((t - t_f)/τ0') - arctan((t_L - t_f)/τ0')]`,
/// the integral of `-ħ u/2m` along the post-lens width. The free-flight form
/// is derived here rather than quoted from the literature.
pub fn gouy_phase<T: Real>(ch: &FockChannel<T>, cfg: &AtomFieldConfig<T>, t: T) -> Result<T, GaussianError> {
    if !(t >= T::zero()) {
        return Err(stage_error(t, "any", T::zero(), T::infinity()));
    }
    let expansion = ModeExpansion {
        g0: T::zero(),
        g1: T::zero(),
        g2: T::one(),
        x_f: T::zero(),
    };
    Ok(evolve(ch, &expansion, cfg, t)?.mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RawConfig;

    fn cs() -> AtomFieldConfig<f64> {
        RawConfig::cesium().validate().unwrap()
    }

    fn cs_offset(x0: f64) -> AtomFieldConfig<f64> {
        RawConfig {
            mode_offset: x0,
            ..RawConfig::cesium()
        }
        .validate()
        .unwrap()
    }

    #[test]
    fn node_on_axis() {
        let cfg = cs();
        let e = mode_expand(&cfg).unwrap();
        assert_eq!(e.g0, 0.0);
        assert_eq!(e.g1, 0.0);
        assert_eq!(e.x_f, 0.0);
        let expected = 2.0 * cfg.coupling_amplitude() * cfg.wavenumber().powi(2);
        assert!((e.g2 - expected).abs() <= 1e-15 * expected);
    }

    #[test]
    fn antinode_on_axis_is_expulsive() {
        let cfg = cs_offset(459e-9 / 4.0);
        let e = mode_expand(&cfg).unwrap();
        assert!(e.g1.abs() < 1e-12 * cfg.coupling_amplitude() * cfg.wavenumber());
        let expected = -2.0 * cfg.coupling_amplitude() * cfg.wavenumber().powi(2);
        assert!((e.g2 - expected).abs() <= 1e-12 * expected.abs());
        let ch = FockChannel::new(3, &e, &cfg);
        assert_eq!(ch.confinement, Confinement::Expulsive);
    }

    #[test]
    fn sixteenth_wavelength_matches_finite_differences() {
        let lambda = 459e-9;
        let cfg = cs_offset(lambda / 16.0);
        let e = mode_expand(&cfg).unwrap();
        let (g_max, k, x0) = (cfg.coupling_amplitude(), cfg.wavenumber(), lambda / 16.0);
        let g = |x: f64| g_max * (k * (x - x0)).sin().powi(2);
        let h = 1e-6 / k;
        let d1 = (g(h) - g(-h)) / (2.0 * h);
        // fourth-order stencil; a wider step keeps cancellation in check
        let h2 = 1e-3 / k;
        let d2 = (-g(2.0 * h2) + 16.0 * g(h2) - 30.0 * g(0.0) + 16.0 * g(-h2) - g(-2.0 * h2)) / (12.0 * h2 * h2);
        assert!((e.g1 - d1).abs() <= 1e-8 * e.g1.abs(), "{} vs {}", e.g1, d1);
        assert!((e.g2 - d2).abs() <= 1e-8 * e.g2.abs(), "{} vs {}", e.g2, d2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.g1 + g_max * k * s).abs() <= 1e-12 * e.g1.abs());
        assert!((e.x_f - 1.0 / (2.0 * k)).abs() <= 1e-12 / k);
        assert!((e.x_f * e.g2 + e.g1).abs() <= 1e-12 * e.g1.abs());
    }

    #[test]
    fn inflection_point_is_rejected() {
        let cfg = cs_offset(459e-9 / 8.0);
        assert_eq!(mode_expand(&cfg), Err(GaussianError::DegenerateCurvature));
    }

    #[test]
    fn channel_identities() {
        let cfg = cs();
        let e = mode_expand(&cfg).unwrap();
        let mut prev = f64::INFINITY;
        for n in 1..=40 {
            let ch = FockChannel::new(n, &e, &cfg);
            assert!((ch.tau * ch.rate - 1.0).abs() < 1e-12);
            assert_eq!(ch.phase, ch.rate * cfg.interaction_time());
            assert!(ch.ground_width < prev);
            prev = ch.ground_width;
        }
    }

    #[test]
    fn initial_condition() {
        let cfg = cs_offset(459e-9 / 40.0);
        let e = mode_expand(&cfg).unwrap();
        let ch = FockChannel::new(4, &e, &cfg);
        let p = evolve_in_cavity(&ch, &e, &cfg, 0.0).unwrap();
        assert_eq!(p.xbar, -e.x_f);
        assert_eq!(p.pbar, 0.0);
        assert!((p.u * cfg.beam_width().powi(2) - 1.0).abs() < 1e-15);
        assert_eq!(p.v, 0.0);
        assert_eq!(p.mu, 0.0);
    }

    #[test]
    fn quarter_period_transfers_squeezing() {
        // Long cavity so that Ω t reaches π/2 inside it.
        let cfg = RawConfig {
            cavity_length: 0.05,
            ..RawConfig::cesium()
        }
        .validate()
        .unwrap();
        let e = mode_expand(&cfg).unwrap();
        let ch = FockChannel::new(10, &e, &cfg);
        let t = std::f64::consts::FRAC_PI_2 / ch.rate;
        let p = evolve_in_cavity(&ch, &e, &cfg, t).unwrap();
        let expected = ch.ground_width.powi(2) / cfg.beam_width();
        assert!((p.width() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn out_of_stage() {
        let cfg = cs();
        let e = mode_expand(&cfg).unwrap();
        let ch = FockChannel::new(1, &e, &cfg);
        assert!(evolve_in_cavity(&ch, &e, &cfg, 2.0 * cfg.interaction_time()).is_err());
        assert!(evolve_in_cavity(&ch, &e, &cfg, -1e-9).is_err());
        assert!(evolve_free(&ch, &e, &cfg, 0.5 * cfg.interaction_time()).is_err());
    }

    #[test]
    fn continuity_at_exit() {
        for x0 in [0.0, 459e-9 / 40.0, 459e-9 * 0.3] {
            let cfg = cs_offset(x0);
            let e = mode_expand(&cfg).unwrap();
            for n in [0, 1, 5, 20] {
                let ch = FockChannel::new(n, &e, &cfg);
                let t_l = cfg.interaction_time();
                let a = evolve_in_cavity(&ch, &e, &cfg, t_l).unwrap();
                let b = evolve_free(&ch, &e, &cfg, t_l).unwrap();
                assert!((a.k() - b.k()).norm() <= 1e-12 * a.k().norm());
                assert!((a.mu - b.mu).abs() <= 1e-12);
                let xs = e.x_f.abs().max(1e-30);
                assert!((a.xbar - b.xbar).abs() <= 1e-12 * xs);
                assert!((a.pbar - b.pbar).abs() <= 1e-12 * a.pbar.abs().max(1e-40));
            }
        }
    }

    #[test]
    fn vacuum_channel_spreads_freely() {
        let cfg = cs();
        let e = mode_expand(&cfg).unwrap();
        let ch = FockChannel::new(0, &e, &cfg);
        for f in [0.5, 1.0, 3.0, 100.0] {
            let t = f * cfg.rayleigh_time();
            let p = evolve(&ch, &e, &cfg, t).unwrap();
            assert!((p.u * cfg.beam_width().powi(2) * (1.0 + f * f) - 1.0).abs() < 1e-13);
            assert!((p.mu + 0.5 * f.atan()).abs() < 1e-15);
        }
    }

    #[test]
    fn minimum_width_at_a_third_of_tau() {
        // φ = π/4 and b_n⁴/b0⁴ = 1/2 → t_f - t_L = τ_n/3.
        let cfg = crate::test_support::synthetic(std::f64::consts::FRAC_PI_4, 0.5f64.sqrt());
        let e = mode_expand(&cfg).unwrap();
        let ch = FockChannel::new(1, &e, &cfg);
        assert!((ch.phase - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        let t_l = cfg.interaction_time();
        let t_star = t_l + ch.tau / 3.0;
        let w = |t: f64| evolve_free(&ch, &e, &cfg, t).unwrap().width();
        let h = 1e-4 * ch.tau;
        assert!(w(t_star) < w(t_star - h));
        assert!(w(t_star) < w(t_star + h));
    }

    #[test]
    fn gouy_monotone_across_poles() {
        let cfg = RawConfig {
            cavity_length: 0.2,
            ..RawConfig::cesium()
        }
        .validate()
        .unwrap();
        let e = mode_expand(&cfg).unwrap();
        let ch = FockChannel::new(3, &e, &cfg);
        let t_end = 9.0 * std::f64::consts::PI / ch.rate;
        assert!(t_end < cfg.interaction_time());
        let mut prev = 0.0;
        for i in 1..=4000 {
            let t = t_end * i as f64 / 4000.0;
            let mu = gouy_phase(&ch, &cfg, t).unwrap();
            assert!(mu < prev);
            assert!(prev - mu < 0.1);
            prev = mu;
        }
    }

    #[test]
    fn harmonic_free_flight_matches_generic_propagation() {
        let cfg = cs_offset(459e-9 / 40.0);
        let e = mode_expand(&cfg).unwrap();
        for n in [1, 7, 30] {
            let ch = FockChannel::new(n, &e, &cfg);
            for f in [0.0, 0.01, 1.0, 30.0] {
                let t = cfg.interaction_time() + f * cfg.rayleigh_time();
                let a = evolve_free(&ch, &e, &cfg, t).unwrap();
                let b = evolve_free_from_exit(&ch, &e, &cfg, t).unwrap();
                assert!((a.k() - b.k()).norm() <= 1e-11 * a.k().norm());
                assert!((a.mu - b.mu).abs() <= 1e-11);
                assert!((a.xbar - b.xbar).abs() <= 1e-11 * a.xbar.abs().max(e.x_f.abs()));
            }
        }
    }

    #[test]
    fn f32_closed_forms_track_f64() {
        let cfg = cs();
        let cfg32: AtomFieldConfig<f32> = cfg.cast();
        let e = mode_expand(&cfg).unwrap();
        let e32 = mode_expand(&cfg32).unwrap();
        let ch = FockChannel::new(10, &e, &cfg);
        let ch32 = FockChannel::new(10, &e32, &cfg32);
        let t = 3.0 * cfg.interaction_time();
        let a = evolve(&ch, &e, &cfg, t).unwrap();
        let b = evolve(&ch32, &e32, &cfg32, t as f32).unwrap();
        assert!((b.width() as f64 - a.width()).abs() / a.width() < 1e-5);
        assert!((b.mu as f64 - a.mu).abs() < 1e-5);
    }
}
