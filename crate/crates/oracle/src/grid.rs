//! Wavefunctions on a periodic uniform grid, propagated by Strang splitting
//! with an FFT drift.
//!
//! The grid is centred on the origin, `x_j = (j - N/2) Δx`, and N is a power
//! of two. Momenta follow the FFT ordering `k_j = 2π j/(N Δx)` for
//! `j < N/2` and `2π (j - N)/(N Δx)` above.

use std::f64::consts::PI;
use std::io::{self, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::GridError;

/// Width-to-extent safety factors. A propagation widens the grid when the
/// beam covers more than 1/[`WIDEN_FACTOR`] of it and refuses to continue
/// beyond 1/[`MIN_EXTENT_FACTOR`].
pub const WIDEN_FACTOR: f64 = 16.0;
pub const MIN_EXTENT_FACTOR: f64 = 8.0;
/// Largest grid auto-widening may produce.
pub const MAX_POINTS: usize = 1 << 22;
/// Allowed drift of Σ|ψ|²Δx over one propagation.
pub const NORM_BUDGET: f64 = 1e-10;

/// Position, momentum and covariance of a grid state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub sigma_xx2: f64,
    pub sigma_pp2: f64,
    /// ½⟨xp + px⟩ - ⟨x⟩⟨p⟩.
    pub sigma_xp: f64,
    pub norm: f64,
}

impl GridMoments {
    /// √2 σ_x, the 1/e half-width of |ψ|² for a Gaussian.
    pub fn width(&self) -> f64 {
        (2.0 * self.sigma_xx2).sqrt()
    }
}

#[derive(Clone)]
pub struct GridState {
    psi: Vec<Complex64>,
    dx: f64,
    t: f64,
    mass: f64,
    hbar: f64,
}

impl std::fmt::Debug for GridState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridState")
            .field("points", &self.psi.len())
            .field("dx", &self.dx)
            .field("t", &self.t)
            .finish()
    }
}

fn transforms(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = FftPlanner::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

impl GridState {
    /// Samples `amplitude(x)` and normalizes. `points` must be a power of two.
    pub fn from_fn(
        points: usize,
        dx: f64,
        mass: f64,
        hbar: f64,
        t: f64,
        amplitude: impl Fn(f64) -> Complex64,
    ) -> Result<Self, GridError> {
        if !points.is_power_of_two() || points < 4 {
            return Err(GridError::NotPowerOfTwo(points));
        }
        let half = (points / 2) as f64;
        let psi = (0..points).map(|j| amplitude((j as f64 - half) * dx)).collect();
        let mut state = GridState { psi, dx, t, mass, hbar };
        let norm = state.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(GridError::ZeroNorm);
        }
        let scale = norm.sqrt().recip();
        state.psi.iter_mut().for_each(|z| *z *= scale);
        Ok(state)
    }

    /// `exp[-(x - x̄)² (u + i v)/2 + i p̄ (x - x̄)/ħ]`, normalized.
    #[allow(clippy::too_many_arguments)]
    pub fn gaussian(
        points: usize,
        dx: f64,
        mass: f64,
        hbar: f64,
        t: f64,
        xbar: f64,
        pbar: f64,
        k: Complex64,
    ) -> Result<Self, GridError> {
        GridState::from_fn(points, dx, mass, hbar, t, |x| {
            let d = x - xbar;
            (-0.5 * k * d * d + Complex64::new(0.0, pbar * d / hbar)).exp()
        })
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn extent(&self) -> f64 {
        self.dx * self.psi.len() as f64
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn position(&self, j: usize) -> f64 {
        (j as f64 - (self.psi.len() / 2) as f64) * self.dx
    }

    fn wavenumber(&self, j: usize) -> f64 {
        let n = self.psi.len();
        let jj = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
        2.0 * PI * jj / (n as f64 * self.dx)
    }

    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx
    }

    /// Doubles the extent by padding zeros on both sides.
    pub fn widen(&mut self) -> Result<(), GridError> {
        let n = self.psi.len();
        if 2 * n > MAX_POINTS {
            return Err(GridError::GridTooSmall {
                extent: self.extent(),
                width: self.moments().width(),
            });
        }
        let mut psi = vec![Complex64::new(0.0, 0.0); 2 * n];
        psi[n / 2..n / 2 + n].copy_from_slice(&self.psi);
        self.psi = psi;
        Ok(())
    }

    /// Span the beam occupies, `|x̄| + √2 σ_x`.
    fn footprint(&self) -> f64 {
        let m = self.moments();
        m.mean_x.abs() + m.width()
    }

    fn ensure_extent(&mut self) -> Result<(), GridError> {
        while self.extent() < WIDEN_FACTOR * self.footprint() {
            self.widen()?;
        }
        Ok(())
    }

    fn check_extent(&self) -> Result<(), GridError> {
        let footprint = self.footprint();
        if self.extent() < MIN_EXTENT_FACTOR * footprint {
            return Err(GridError::GridTooSmall {
                extent: self.extent(),
                width: footprint,
            });
        }
        Ok(())
    }

    fn spectrum(&self) -> Vec<Complex64> {
        let (forward, _) = transforms(self.psi.len());
        let mut buf = self.psi.clone();
        forward.process(&mut buf);
        buf
    }

    /// ⟨x⟩, ⟨p⟩ and the symmetrized covariance. Momentum moments come from
    /// the spectrum; `½⟨xp + px⟩ = Re⟨ψ|x p ψ⟩` with `pψ` built spectrally.
    pub fn moments(&self) -> GridMoments {
        let n = self.psi.len();
        let norm = self.norm();
        let density: Vec<f64> = self.psi.iter().map(|z| z.norm_sqr() * self.dx / norm).collect();
        let mean_x: f64 = (0..n).map(|j| density[j] * self.position(j)).sum();
        let sigma_xx2: f64 = (0..n).map(|j| density[j] * (self.position(j) - mean_x).powi(2)).sum();

        let spectrum = self.spectrum();
        let weight: f64 = spectrum.iter().map(|z| z.norm_sqr()).sum();
        let mean_k: f64 = (0..n).map(|j| spectrum[j].norm_sqr() * self.wavenumber(j)).sum::<f64>() / weight;
        let var_k: f64 = (0..n)
            .map(|j| spectrum[j].norm_sqr() * (self.wavenumber(j) - mean_k).powi(2))
            .sum::<f64>()
            / weight;

        // -i ∂ψ/∂x
        let (_, inverse) = transforms(n);
        let mut dpsi: Vec<Complex64> = (0..n).map(|j| spectrum[j] * self.wavenumber(j)).collect();
        inverse.process(&mut dpsi);
        let scale = 1.0 / n as f64;
        let xp: f64 = (0..n)
            .map(|j| (self.psi[j].conj() * dpsi[j] * scale).re * (self.position(j) - mean_x))
            .sum::<f64>()
            * self.dx
            / norm;

        GridMoments {
            mean_x,
            mean_p: self.hbar * mean_k,
            sigma_xx2,
            sigma_pp2: self.hbar * self.hbar * var_k,
            sigma_xp: self.hbar * xp,
            norm,
        }
    }

    /// ⟨ψ|H|ψ⟩ for the potential `v(x)` (J).
    pub fn energy(&self, v: impl Fn(f64) -> f64) -> f64 {
        let spectrum = self.spectrum();
        let weight: f64 = spectrum.iter().map(|z| z.norm_sqr()).sum();
        let kinetic = (0..self.psi.len())
            .map(|j| spectrum[j].norm_sqr() * self.wavenumber(j).powi(2))
            .sum::<f64>()
            / weight
            * self.hbar
            * self.hbar
            / (2.0 * self.mass);
        let potential = (0..self.psi.len())
            .map(|j| self.psi[j].norm_sqr() * v(self.position(j)))
            .sum::<f64>()
            * self.dx
            / self.norm();
        kinetic + potential
    }

    /// Phase of ψ at the grid point nearest ⟨x⟩. Contains the Gouy phase plus
    /// the centroid and chirp terms; only a rough indicator.
    pub fn phase_at_centroid(&self) -> f64 {
        let mean_x = self.moments().mean_x;
        let j = ((mean_x / self.dx).round() + (self.psi.len() / 2) as f64) as usize;
        self.psi[j.min(self.psi.len() - 1)].arg()
    }

    /// Exact free evolution over `duration` (a single spectral multiply).
    /// The grid is widened first so that the spread state still fits.
    pub fn propagate_free(&mut self, duration: f64) -> Result<(), GridError> {
        // σ_x²(t) = σ_x² + 2 σ_xp t/m + σ_p² t²/m² for a free particle
        let m = self.moments();
        let tm = duration / self.mass;
        let final_var = m.sigma_xx2 + 2.0 * m.sigma_xp * tm + m.sigma_pp2 * tm * tm;
        let footprint = (m.mean_x + m.mean_p * tm).abs() + (2.0 * final_var).sqrt();
        while self.extent() < WIDEN_FACTOR * footprint {
            self.widen()?;
        }
        let n = self.psi.len();
        let (forward, inverse) = transforms(n);
        let norm_before = self.norm();
        forward.process(&mut self.psi);
        let scale = 1.0 / n as f64;
        for j in 0..n {
            let k = self.wavenumber(j);
            let phase = -self.hbar * k * k * duration / (2.0 * self.mass);
            self.psi[j] *= Complex64::from_polar(scale, phase);
        }
        inverse.process(&mut self.psi);
        self.t += duration;
        self.check_norm(norm_before)?;
        self.check_extent()
    }

    /// Strang splitting, half kick / drift / half kick, in `steps` equal steps
    /// under the potential `v(x)` (J). Extent is checked every
    /// `check_every` steps and the grid widened when needed.
    pub fn propagate(&mut self, v: impl Fn(f64) -> f64, duration: f64, steps: usize) -> Result<(), GridError> {
        if steps == 0 {
            return Err(GridError::StepTooLarge { drift: f64::INFINITY });
        }
        let norm_before = self.norm();
        let dt = duration / steps as f64;
        let check_every = 64;
        self.ensure_extent()?;
        let mut plan = SplitStep::new(self, &v, dt);
        for step in 0..steps {
            plan.step(&mut self.psi);
            if (step + 1) % check_every == 0 && step + 1 < steps && self.extent() < WIDEN_FACTOR * self.footprint() {
                self.widen()?;
                plan = SplitStep::new(self, &v, dt);
            }
        }
        self.t += duration;
        self.check_norm(norm_before)?;
        self.check_extent()
    }

    fn check_norm(&self, before: f64) -> Result<(), GridError> {
        let drift = (self.norm() - before).abs() / before;
        if drift > NORM_BUDGET {
            return Err(GridError::StepTooLarge { drift });
        }
        Ok(())
    }

    /// Trapezoidal `⟨other|self⟩ = Σ conj(ψ_other) ψ_self Δx` (periodic grid).
    pub fn overlap(&self, other: &GridState) -> Result<Complex64, GridError> {
        if self.psi.len() != other.psi.len() || self.dx != other.dx {
            return Err(GridError::GridMismatch {
                left: (self.psi.len(), self.dx),
                right: (other.psi.len(), other.dx),
            });
        }
        let sum: Complex64 = self.psi.iter().zip(&other.psi).map(|(a, b)| b.conj() * a).sum();
        Ok(sum * self.dx)
    }

    /// Pads with zeros until the grid has `points` samples.
    pub fn widen_to(&mut self, points: usize) -> Result<(), GridError> {
        while self.psi.len() < points {
            self.widen()?;
        }
        Ok(())
    }

    /// `x_m,density_per_m` rows with a header.
    pub fn write_density_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x_m,density_per_m")?;
        let norm = self.norm();
        for (j, z) in self.psi.iter().enumerate() {
            writeln!(out, "{:e},{:e}", self.position(j), z.norm_sqr() / norm)?;
        }
        Ok(())
    }
}

struct SplitStep {
    kick: Vec<Complex64>,
    drift: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SplitStep {
    fn new(state: &GridState, v: &impl Fn(f64) -> f64, dt: f64) -> Self {
        let n = state.psi.len();
        let kick = (0..n)
            .map(|j| Complex64::from_polar(1.0, -v(state.position(j)) * dt / (2.0 * state.hbar)))
            .collect();
        let scale = 1.0 / n as f64;
        let drift = (0..n)
            .map(|j| {
                let k = state.wavenumber(j);
                Complex64::from_polar(scale, -state.hbar * k * k * dt / (2.0 * state.mass))
            })
            .collect();
        let (forward, inverse) = transforms(n);
        SplitStep {
            kick,
            drift,
            forward,
            inverse,
        }
    }

    fn step(&self, psi: &mut [Complex64]) {
        psi.iter_mut().zip(&self.kick).for_each(|(z, k)| *z *= k);
        self.forward.process(psi);
        psi.iter_mut().zip(&self.drift).for_each(|(z, d)| *z *= d);
        self.inverse.process(psi);
        psi.iter_mut().zip(&self.kick).for_each(|(z, k)| *z *= k);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HBAR: f64 = 1.054_571_817e-34;
    const MASS: f64 = 2.2e-25;

    fn packet(b0: f64, points: usize) -> GridState {
        GridState::gaussian(
            points,
            b0 / 16.0,
            MASS,
            HBAR,
            0.0,
            0.0,
            0.0,
            Complex64::new(1.0 / (b0 * b0), 0.0),
        )
        .unwrap()
    }

    #[test]
    fn real_gaussian_moments() {
        let b0 = 1e-7;
        let g = packet(b0, 2048);
        let m = g.moments();
        assert!((m.sigma_xx2 - b0 * b0 / 2.0).abs() < 1e-12 * b0 * b0);
        assert!((m.sigma_pp2 - HBAR * HBAR / (2.0 * b0 * b0)).abs() < 1e-10 * HBAR * HBAR / (b0 * b0));
        assert!(m.sigma_xp.abs() < 1e-12 * HBAR);
        assert!((m.norm - 1.0).abs() < 1e-13);
    }

    #[test]
    fn chirped_gaussian_covariance() {
        // K = u + i v: σ_xp = -ħ v /(2u)
        let b = 1e-7;
        let (u, v) = (1.0 / (b * b), 0.7 / (b * b));
        let g = GridState::gaussian(
            4096,
            b / 32.0,
            MASS,
            HBAR,
            0.0,
            2e-8,
            3.0 * HBAR / b,
            Complex64::new(u, v),
        )
        .unwrap();
        let m = g.moments();
        assert!((m.mean_x - 2e-8).abs() < 1e-12 * b);
        assert!((m.mean_p - 3.0 * HBAR / b).abs() < 1e-10 * HBAR / b);
        assert!((m.sigma_xp + HBAR * v / (2.0 * u)).abs() < 1e-10 * HBAR);
        assert!((m.sigma_pp2 - HBAR * HBAR * (u * u + v * v) / (2.0 * u)).abs() < 1e-9 * m.sigma_pp2);
    }

    #[test]
    fn free_spreading_matches_analytic_width() {
        let b0 = 1e-7;
        let tau0 = MASS * b0 * b0 / HBAR;
        let mut g = packet(b0, 1024);
        g.propagate_free(10.0 * tau0).unwrap();
        let expected = b0 * (1.0f64 + 100.0).sqrt();
        assert!((g.moments().width() - expected).abs() < 1e-8 * expected);
        assert!(g.len() > 1024, "grid should have widened");
        assert!((g.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_step_free_equals_exact_free() {
        let b0 = 1e-7;
        let tau0 = MASS * b0 * b0 / HBAR;
        let mut a = packet(b0, 4096);
        let mut b = a.clone();
        a.propagate(|_| 0.0, 0.5 * tau0, 37).unwrap();
        b.propagate_free(0.5 * tau0).unwrap();
        let o = a.overlap(&b).unwrap();
        assert!((o.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_quarter_period() {
        let omega = 1.0e5;
        let bn_sq = HBAR / (MASS * omega);
        let b0 = (2.0 * bn_sq).sqrt();
        let mut g = GridState::gaussian(
            1024,
            bn_sq.sqrt() / 16.0,
            MASS,
            HBAR,
            0.0,
            0.0,
            0.0,
            Complex64::new(1.0 / (b0 * b0), 0.0),
        )
        .unwrap();
        let v = |x: f64| 0.5 * MASS * omega * omega * x * x;
        let e0 = g.energy(v);
        g.propagate(v, std::f64::consts::FRAC_PI_2 / omega, 16000).unwrap();
        let expected = bn_sq / b0;
        assert!((g.moments().width() - expected).abs() < 1e-6 * expected);
        assert!((g.norm() - 1.0).abs() < 1e-10);
        let drift = (g.energy(v) - e0).abs() / e0;
        assert!(drift < 1e-8, "{drift}");
    }

    #[test]
    fn splitting_is_second_order() {
        let omega = 1.0e5;
        let bn_sq = HBAR / (MASS * omega);
        let b0 = (2.0 * bn_sq).sqrt();
        let v = |x: f64| 0.5 * MASS * omega * omega * x * x;
        let t = 1.1 / omega;
        // closed form: B² = b0² (cos² + (b_n²/b0²)² sin²)
        let r = bn_sq / (b0 * b0);
        let (s, c) = (omega * t).sin_cos();
        let exact = b0 * (c * c + r * r * s * s).sqrt();
        let error = |steps: usize| {
            let mut g = GridState::gaussian(
                512,
                bn_sq.sqrt() / 12.0,
                MASS,
                HBAR,
                0.0,
                0.0,
                0.0,
                Complex64::new(1.0 / (b0 * b0), 0.0),
            )
            .unwrap();
            g.propagate(v, t, steps).unwrap();
            (g.moments().width() - exact).abs()
        };
        let (coarse, fine) = (error(20), error(40));
        assert!(coarse / fine >= 3.9, "{coarse} / {fine}");
    }

    #[test]
    fn parity_states_are_orthogonal() {
        let b = 1e-7;
        let even = GridState::from_fn(1024, b / 16.0, MASS, HBAR, 0.0, |x| {
            Complex64::new((-x * x / (2.0 * b * b)).exp(), 0.0)
        })
        .unwrap();
        let odd = GridState::from_fn(1024, b / 16.0, MASS, HBAR, 0.0, |x| {
            Complex64::new(x / b * (-x * x / (2.0 * b * b)).exp(), 0.0)
        })
        .unwrap();
        assert!(odd.overlap(&even).unwrap().norm() < 1e-10);
        assert!((even.overlap(&even).unwrap() - 1.0).norm() < 1e-12);
        let other = packet(b, 512);
        assert!(matches!(even.overlap(&other), Err(GridError::GridMismatch { .. })));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(
            GridState::from_fn(1000, 1e-9, MASS, HBAR, 0.0, |_| Complex64::new(1.0, 0.0)),
            Err(GridError::NotPowerOfTwo(1000))
        ));
    }

    #[test]
    fn density_dump_has_header_and_rows() {
        let g = packet(1e-7, 16);
        let mut out = Vec::new();
        g.write_density_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some("x_m,density_per_m"));
        assert_eq!(text.lines().count(), 17);
    }
}
