//! Physical configuration of the atom, the cavity mode and the incoming beam.
//!
//! All quantities are SI. The coupling is `g(x) = g_max sin²(k (x - x0))`,
//! with `g_max = ħ Ω0² / (2 Δ)` unless overridden, so that the curvature at a
//! node is `g2 = ħ Ω0² k² / Δ`.

use crate::error::ConfigError;
use crate::real::{hbar, Real};

/// Unvalidated parameters, as read from a config file or built by hand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawConfig<T> {
    /// Atomic mass (kg).
    pub mass: T,
    /// Mode wavelength (m).
    pub wavelength: T,
    /// Vacuum Rabi frequency Ω0 (rad/s).
    pub rabi_frequency: T,
    /// Detuning Δ (rad/s); may be negative, never zero.
    pub detuning: T,
    /// Length of the field region along z (m).
    pub cavity_length: T,
    /// Longitudinal velocity v_z (m/s).
    pub longitudinal_velocity: T,
    /// Initial transverse width b0 (m).
    pub beam_width: T,
    /// Displacement x0 of the field node from the beam axis (m).
    pub mode_offset: T,
    /// Optional override of the coupling amplitude (J).
    pub coupling_amplitude: Option<T>,
}

impl<T: Real> RawConfig<T> {
    /// Cesium on the 6S1/2 - 7P1/2 line, the parameter set of the quantum-lens
    /// proposal: λ = 459 nm, Ω0/2π = 0.67 MHz, Δ = 4.2e8 rad/s, L = 100 µm,
    /// v_z = 300 m/s, b0 = λ/3, node on the beam axis.
    pub fn cesium() -> Self {
        let wavelength = T::lit(459e-9);
        RawConfig {
            mass: T::lit(2.2e-25),
            wavelength,
            rabi_frequency: T::lit(2.0 * std::f64::consts::PI * 0.67e6),
            detuning: T::lit(4.2e8),
            cavity_length: T::lit(100e-6),
            longitudinal_velocity: T::lit(300.0),
            beam_width: wavelength / T::lit(3.0),
            mode_offset: T::zero(),
            coupling_amplitude: None,
        }
    }

    pub fn validate(self) -> Result<AtomFieldConfig<T>, ConfigError> {
        validate_config(self)
    }
}

/// Validated configuration with its derived scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomFieldConfig<T> {
    raw: RawConfig<T>,
    wavenumber: T,
    interaction_time: T,
    rayleigh_time: T,
    coupling_amplitude: T,
}

/// Checks positivity and fills in k, t_L, τ0 and g_max.
pub fn validate_config<T: Real>(raw: RawConfig<T>) -> Result<AtomFieldConfig<T>, ConfigError> {
    let positive = [
        ("mass", raw.mass),
        ("wavelength", raw.wavelength),
        ("rabi_frequency", raw.rabi_frequency),
        ("cavity_length", raw.cavity_length),
        ("longitudinal_velocity", raw.longitudinal_velocity),
        ("beam_width", raw.beam_width),
    ];
    for (name, value) in positive {
        if !(value.is_finite() && value > T::zero()) {
            return Err(ConfigError::NonPositiveParameter(name));
        }
    }
    if !raw.detuning.is_finite() {
        return Err(ConfigError::NonFinite("detuning"));
    }
    if raw.detuning == T::zero() {
        return Err(ConfigError::ZeroDetuning);
    }
    if !raw.mode_offset.is_finite() {
        return Err(ConfigError::NonFinite("mode_offset"));
    }
    let coupling_amplitude = match raw.coupling_amplitude {
        Some(g) if !g.is_finite() => return Err(ConfigError::NonFinite("coupling_amplitude")),
        Some(g) => g,
        None => hbar::<T>() * raw.rabi_frequency * raw.rabi_frequency / (T::two() * raw.detuning),
    };

    let wavenumber = T::two() * T::PI() / raw.wavelength;
    let interaction_time = raw.cavity_length / raw.longitudinal_velocity;
    // (m / ħ) first: m b0² alone is subnormal in f32.
    let rayleigh_time = raw.mass / hbar::<T>() * raw.beam_width * raw.beam_width;

    Ok(AtomFieldConfig {
        raw,
        wavenumber,
        interaction_time,
        rayleigh_time,
        coupling_amplitude,
    })
}

impl<T: Real> AtomFieldConfig<T> {
    pub fn raw(&self) -> &RawConfig<T> {
        &self.raw
    }

    pub fn mass(&self) -> T {
        self.raw.mass
    }

    pub fn wavelength(&self) -> T {
        self.raw.wavelength
    }

    pub fn rabi_frequency(&self) -> T {
        self.raw.rabi_frequency
    }

    pub fn detuning(&self) -> T {
        self.raw.detuning
    }

    pub fn cavity_length(&self) -> T {
        self.raw.cavity_length
    }

    pub fn longitudinal_velocity(&self) -> T {
        self.raw.longitudinal_velocity
    }

    /// Initial beam width b0 (m).
    pub fn beam_width(&self) -> T {
        self.raw.beam_width
    }

    pub fn mode_offset(&self) -> T {
        self.raw.mode_offset
    }

    /// k = 2π/λ.
    pub fn wavenumber(&self) -> T {
        self.wavenumber
    }

    /// t_L = L / v_z, time spent inside the field region.
    pub fn interaction_time(&self) -> T {
        self.interaction_time
    }

    /// τ0 = m b0² / ħ, free Rayleigh time of the incoming beam.
    pub fn rayleigh_time(&self) -> T {
        self.rayleigh_time
    }

    /// g_max (J), amplitude of the sin² coupling.
    pub fn coupling_amplitude(&self) -> T {
        self.coupling_amplitude
    }

    pub fn hbar_over_mass(&self) -> T {
        hbar::<T>() / self.raw.mass
    }

    /// Longitudinal position z = v_z t - L for an absolute time t.
    pub fn position_at(&self, t: T) -> T {
        self.raw.longitudinal_velocity * t - self.raw.cavity_length
    }

    /// Dispersive-limit figure 4π² n Ω0² b0² / (Δ λ²), with Δ taken as given.
    /// See [`dispersive_ratio`].
    pub fn dispersive_ratio(&self, n: usize) -> T {
        dispersive_ratio(self, n)
    }

    /// Re-expresses the configuration in another scalar type. Derived
    /// quantities are recomputed in the target precision.
    pub fn cast<U: Real>(&self) -> AtomFieldConfig<U> {
        let c = |x: T| U::lit(x.to_f64().expect("finite"));
        let raw = RawConfig {
            mass: c(self.raw.mass),
            wavelength: c(self.raw.wavelength),
            rabi_frequency: c(self.raw.rabi_frequency),
            detuning: c(self.raw.detuning),
            cavity_length: c(self.raw.cavity_length),
            longitudinal_velocity: c(self.raw.longitudinal_velocity),
            beam_width: c(self.raw.beam_width),
            mode_offset: c(self.raw.mode_offset),
            coupling_amplitude: self.raw.coupling_amplitude.map(c),
        };
        validate_config(raw).expect("cast of a validated config stays valid")
    }
}

/// Default level at which the CLI warns that the dispersive limit is not met.
pub const DISPERSIVE_WARN_THRESHOLD: f64 = 0.1;

/// `4π² n Ω0² b0² / (Δ λ²)`, exactly linear in n.
///
/// The quantity is evaluated literally; with Ω0 in rad/s and Δ in rad/s it is
/// not dimensionless, and for the cesium set it is far above one at n = 1.
/// Callers report it, they do not reject on it.
pub fn dispersive_ratio<T: Real>(cfg: &AtomFieldConfig<T>, n: usize) -> T {
    let per_photon = T::lit(4.0) * T::PI() * T::PI() * cfg.rabi_frequency() * cfg.rabi_frequency() / cfg.detuning()
        * (cfg.beam_width() / cfg.wavelength())
        * (cfg.beam_width() / cfg.wavelength());
    T::from_count(n) * per_photon
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs() -> AtomFieldConfig<f64> {
        RawConfig::cesium().validate().unwrap()
    }

    #[test]
    fn cesium_derived_scales() {
        let cfg = cs();
        assert_eq!(cfg.interaction_time(), 100e-6 / 300.0);
        assert!((cfg.interaction_time() - 0.333e-6).abs() < 1e-9);
        // m b0²/ħ with b0 = 153 nm
        let b0 = 459e-9 / 3.0;
        let expected = 2.2e-25 * b0 * b0 / 1.054_571_817e-34;
        assert!((cfg.rayleigh_time() - expected).abs() / expected < 1e-15);
        assert!((cfg.rayleigh_time() - 4.8835e-5).abs() < 1e-8);
        assert!((cfg.wavenumber() - 2.0 * std::f64::consts::PI / 459e-9).abs() < 1e-3);
    }

    #[test]
    fn default_coupling_reproduces_node_curvature() {
        let cfg = cs();
        let g2 = 2.0 * cfg.coupling_amplitude() * cfg.wavenumber().powi(2);
        let expected = 1.054_571_817e-34 * cfg.rabi_frequency().powi(2) * cfg.wavenumber().powi(2) / cfg.detuning();
        assert!((g2 - expected).abs() / expected < 1e-14);
    }

    #[test]
    fn rejects_zero_detuning() {
        let raw = RawConfig {
            detuning: 0.0,
            ..RawConfig::<f64>::cesium()
        };
        assert_eq!(raw.validate(), Err(ConfigError::ZeroDetuning));
    }

    #[test]
    fn negative_detuning_is_allowed() {
        let raw = RawConfig {
            detuning: -4.2e8,
            ..RawConfig::<f64>::cesium()
        };
        let cfg = raw.validate().unwrap();
        assert!(cfg.coupling_amplitude() < 0.0);
    }

    #[test]
    fn names_the_offending_field() {
        let raw = RawConfig {
            mass: -1.0,
            ..RawConfig::<f64>::cesium()
        };
        assert_eq!(raw.validate(), Err(ConfigError::NonPositiveParameter("mass")));
        let raw = RawConfig {
            beam_width: 0.0,
            ..RawConfig::<f64>::cesium()
        };
        assert_eq!(raw.validate(), Err(ConfigError::NonPositiveParameter("beam_width")));
        let raw = RawConfig {
            longitudinal_velocity: f64::NAN,
            ..RawConfig::<f64>::cesium()
        };
        assert_eq!(
            raw.validate(),
            Err(ConfigError::NonPositiveParameter("longitudinal_velocity"))
        );
    }

    #[test]
    fn dispersive_ratio_vanishes_without_photons_and_is_linear() {
        let cfg = cs();
        assert_eq!(dispersive_ratio(&cfg, 0), 0.0);
        for n in 1..50 {
            let r1 = dispersive_ratio(&cfg, n);
            let r2 = dispersive_ratio(&cfg, 2 * n);
            assert!((r2 - 2.0 * r1).abs() <= 1e-15 * r2);
        }
    }

    #[test]
    fn cesium_dispersive_ratio_value() {
        // independent arithmetic: 4π² Ω0² (b0/λ)² / Δ with b0/λ = 1/3
        let omega0 = 2.0 * std::f64::consts::PI * 0.67e6;
        let expected = 4.0 * std::f64::consts::PI.powi(2) * omega0 * omega0 / 9.0 / 4.2e8;
        let got = dispersive_ratio(&cs(), 1);
        assert!((got - expected).abs() / expected < 1e-12);
        assert!(got > 1.0e5);
    }

    #[test]
    fn f32_cast_keeps_scales_finite() {
        let cfg32: AtomFieldConfig<f32> = cs().cast();
        assert!(cfg32.rayleigh_time().is_normal());
        assert!((cfg32.rayleigh_time() as f64 - cs().rayleigh_time()).abs() / cs().rayleigh_time() < 1e-5);
        assert!(cfg32.coupling_amplitude().is_normal());
    }
}
