//! Focusing of a Gaussian atomic beam by a quantized standing-wave mode.
//!
//! Each photon number n of the mode acts as its own lens on the atoms. This
//! crate gives, per Fock channel, the closed-form Gaussian evolution inside and
//! after the field region ([`gaussian`]), the focal time, focus position and
//! magnification ([`lens`]), and the beam quality factor and purity of the
//! atomic state once the photon statistics are traced out ([`ensemble`]).
//!
//! Everything is generic over the scalar; `f64` aliases live at the crate root.

// `!(x > 0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod config_file;
pub mod distribution;
pub mod ensemble;
pub mod error;
pub mod gaussian;
pub mod lens;
pub mod real;

pub use config::{dispersive_ratio, validate_config, AtomFieldConfig, RawConfig, DISPERSIVE_WARN_THRESHOLD};
pub use config_file::{format_float, parse_run_config, DistributionSpec, RunConfig};
pub use distribution::{make_distribution, DistributionKind, PhotonDistribution};
pub use ensemble::{
    beam_moments, covariance, purity, quality_double_sum, quality_factor, sweep_point, BeamMoments, Covariance,
    LensTable, SweepPoint,
};
pub use error::{ConfigError, DistributionError, EnsembleError, Error, GaussianError, LensError};
pub use gaussian::{
    beam_width, evolve, evolve_free, evolve_free_from_exit, evolve_in_cavity, gouy_phase, mode_expand, Confinement,
    FockChannel, GaussianParams, ModeExpansion, Stage,
};
pub use lens::{
    focal_time, focal_time_by_minimization, focus_position, magnification, thin_lens, width_factor, LensKind,
    LensModel, LensResult, Magnification, ThinLens, THIN_LENS_MAX_PHASE,
};
pub use real::{hbar, Real};

pub type Config = AtomFieldConfig<f64>;
pub type Distribution = PhotonDistribution<f64>;
pub type Channel = FockChannel<f64>;
pub type Params = GaussianParams<f64>;
pub type Lens = LensResult<f64>;
pub type Lenses = LensTable<f64>;
pub type Moments = BeamMoments<f64>;

pub type Config32 = AtomFieldConfig<f32>;
pub type Distribution32 = PhotonDistribution<f32>;
pub type Channel32 = FockChannel<f32>;
pub type Lens32 = LensResult<f32>;

#[cfg(test)]
pub(crate) mod test_support {
    use crate::config::{AtomFieldConfig, RawConfig};

    /// Config whose n = 1 channel has phase `phi` and b_n²/b0² = `ratio`.
    pub(crate) fn synthetic(phi: f64, ratio: f64) -> AtomFieldConfig<f64> {
        let base = RawConfig::<f64>::cesium();
        let hbar = 1.054_571_817e-34;
        let omega = 1.0e5;
        // b_n² = ħ/(m Ω), b0² = b_n²/ratio
        let bn_sq = hbar / (base.mass * omega);
        let b0 = (bn_sq / ratio).sqrt();
        let k = 2.0 * std::f64::consts::PI / base.wavelength;
        let g_max = base.mass * omega * omega / (2.0 * k * k);
        let t_l = phi / omega;
        RawConfig {
            beam_width: b0,
            coupling_amplitude: Some(g_max),
            cavity_length: t_l * base.longitudinal_velocity,
            ..base
        }
        .validate()
        .unwrap()
    }
}
