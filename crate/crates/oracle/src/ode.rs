//! Adaptive RK4 for the Gaussian-parameter equations of motion.
//!
//! ```text
//! ẋ = p/m    ṗ = -m ω² x    K̇ = i m ω²/ħ - i (ħ/m) K²    μ̇ = -ħ u / 2m
//! ```
//!
//! with `K = u + i v` and a constant, possibly negative, ω². The state is
//! rescaled to the initial width `ℓ = u^{-1/2}` and the time `m ℓ²/ħ` before
//! integrating, so every component is of order one.

use num_complex::Complex64;

use crate::error::OdeError;

/// Gaussian parameters in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub t: f64,
    pub xbar: f64,
    pub pbar: f64,
    pub u: f64,
    pub v: f64,
    pub mu: f64,
}

impl GaussianState {
    pub fn k(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    pub fn width(&self) -> f64 {
        self.u.sqrt().recip()
    }
}

/// Particle mass, ħ and the curvature of the confining potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiSystem {
    pub mass: f64,
    pub hbar: f64,
    /// ω² (rad²/s²); negative for an expulsive potential, zero in free flight.
    pub omega_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Local relative error allowed per accepted step.
    pub tolerance: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            tolerance: 1e-12,
            max_steps: 10_000_000,
        }
    }
}

type Vector = [f64; 5];

struct Scaled {
    /// ω² in units of 1/time².
    w: f64,
}

impl Scaled {
    fn rhs(&self, y: &Vector) -> Vector {
        let [x, p, u, v, _] = *y;
        [p, -self.w * x, 2.0 * u * v, self.w - u * u + v * v, -0.5 * u]
    }

    fn rk4(&self, y: &Vector, h: f64) -> Vector {
        let add = |a: &Vector, b: &Vector, s: f64| -> Vector { std::array::from_fn(|i| a[i] + s * b[i]) };
        let k1 = self.rhs(y);
        let k2 = self.rhs(&add(y, &k1, 0.5 * h));
        let k3 = self.rhs(&add(y, &k2, 0.5 * h));
        let k4 = self.rhs(&add(y, &k3, h));
        std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }
}

/// Integrates from `init` and returns the state at every sample time.
///
/// Samples must be non-decreasing and not earlier than `init.t`. Steps are
/// controlled by step doubling: a full step is compared with two half steps
/// and the Richardson-corrected value is kept.
pub fn integrate_riccati(
    system: &RiccatiSystem,
    init: &GaussianState,
    samples: &[f64],
    options: &OdeOptions,
) -> Result<Vec<GaussianState>, OdeError> {
    if !(init.u > 0.0) || !init.u.is_finite() {
        return Err(OdeError::BlowUp { t: init.t });
    }
    if samples.first().is_some_and(|&t| t < init.t) || samples.windows(2).any(|w| w[1] < w[0]) {
        return Err(OdeError::UnorderedSamples);
    }

    let length = init.u.sqrt().recip();
    let time = system.mass * length * length / system.hbar;
    let scaled = Scaled {
        w: system.omega_sq * time * time,
    };
    let momentum = system.hbar / length;
    let area = length * length;

    let mut y: Vector = [
        init.xbar / length,
        init.pbar / momentum,
        init.u * area,
        init.v * area,
        init.mu,
    ];
    let mut t = 0.0;
    let natural = 1.0f64.min(scaled.w.abs().sqrt().recip());
    let mut h = 1e-3 * natural;
    let mut steps = 0usize;
    let tol = options.tolerance;

    let mut out = Vec::with_capacity(samples.len());
    for &target_si in samples {
        let target = (target_si - init.t) / time;
        while t < target {
            steps += 1;
            if steps > options.max_steps {
                return Err(OdeError::TooManySteps { t: init.t + t * time });
            }
            let last = h >= target - t;
            let step = if last { target - t } else { h };
            let full = scaled.rk4(&y, step);
            let half = scaled.rk4(&scaled.rk4(&y, 0.5 * step), 0.5 * step);
            let err = (0..5)
                .map(|i| (half[i] - full[i]).abs() / 15.0 / half[i].abs().max(1.0))
                .fold(0.0f64, f64::max);
            if !err.is_finite() {
                return Err(OdeError::BlowUp { t: init.t + t * time });
            }
            if err <= tol {
                y = std::array::from_fn(|i| half[i] + (half[i] - full[i]) / 15.0);
                t = if last { target } else { t + step };
                if !(y[2] > 0.0) {
                    return Err(OdeError::BlowUp { t: init.t + t * time });
                }
            }
            let factor = if err == 0.0 {
                4.0
            } else {
                (0.9 * (tol / err).powf(0.2)).clamp(0.2, 4.0)
            };
            // a shortened final step says nothing about the next one
            if !(last && err <= tol) {
                h = step * factor;
            }
            if h < 1e-14 * natural {
                return Err(OdeError::BlowUp { t: init.t + t * time });
            }
        }
        out.push(GaussianState {
            t: target_si,
            xbar: y[0] * length,
            pbar: y[1] * momentum,
            u: y[2] / area,
            v: y[3] / area,
            mu: y[4],
        });
    }
    Ok(out)
}
