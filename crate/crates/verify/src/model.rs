//! Potential parameters recomputed from the raw configuration, so the oracle
//! runs never borrow the expansion they are meant to check.

use qlens::{hbar, Config};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential {
    pub g_max: f64,
    pub k: f64,
    pub x0: f64,
    pub mass: f64,
}

impl Potential {
    pub fn from_config(cfg: &Config) -> Self {
        Potential {
            g_max: cfg.coupling_amplitude(),
            k: 2.0 * std::f64::consts::PI / cfg.wavelength(),
            x0: cfg.mode_offset(),
            mass: cfg.mass(),
        }
    }

    /// `g(x) = g_max sin²(k (x - x0))` (J).
    pub fn full(&self, x: f64) -> f64 {
        self.g_max * (self.k * (x - self.x0)).sin().powi(2)
    }

    /// `g0 + g1 x + g2 x²/2` about the beam axis (J).
    pub fn quadratic(&self, x: f64) -> f64 {
        let (g0, g1, g2) = self.taylor();
        g0 + g1 * x + 0.5 * g2 * x * x
    }

    pub fn taylor(&self) -> (f64, f64, f64) {
        let a = 2.0 * self.k * self.x0;
        (
            self.g_max * (self.k * self.x0).sin().powi(2),
            -self.g_max * self.k * a.sin(),
            2.0 * self.g_max * self.k * self.k * a.cos(),
        )
    }

    /// Minimum of the quadratic, measured from the beam axis.
    pub fn center(&self) -> f64 {
        let (_, g1, g2) = self.taylor();
        -g1 / g2
    }

    /// Signed ω² = n g2 / m of channel n.
    pub fn omega_sq(&self, n: usize) -> f64 {
        n as f64 * self.taylor().2 / self.mass
    }

    /// Ground-state width `sqrt(ħ/(m Ω_n))` of a confining channel.
    pub fn ground_width(&self, n: usize) -> Option<f64> {
        let w2 = self.omega_sq(n);
        (w2 > 0.0).then(|| (hbar::<f64>() / (self.mass * w2.sqrt())).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qlens::RawConfig;

    #[test]
    fn taylor_coefficients_match_finite_differences() {
        let cfg = RawConfig {
            mode_offset: 459e-9 / 17.0,
            ..RawConfig::cesium()
        }
        .validate()
        .unwrap();
        let p = Potential::from_config(&cfg);
        let (g0, g1, g2) = p.taylor();
        let h = 1e-3 / p.k;
        assert!((p.full(0.0) - g0).abs() < 1e-15 * p.g_max);
        let d1 = (p.full(h) - p.full(-h)) / (2.0 * h);
        let d2 = (p.full(h) - 2.0 * p.full(0.0) + p.full(-h)) / (h * h);
        assert!((d1 - g1).abs() < 1e-6 * g1.abs());
        assert!((d2 - g2).abs() < 1e-5 * g2.abs());
    }
}
