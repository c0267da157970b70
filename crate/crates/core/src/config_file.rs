//! `key = value` run files.
//!
//! ```text
//! # cesium, node on axis
//! mass_kg = 2.2e-25
//! wavelength_m = 4.59e-7
//! rabi_frequency_over_2pi_hz = 6.7e5
//! detuning_rad_s = 4.2e8
//! cavity_length_m = 1e-4
//! longitudinal_velocity_m_s = 300
//! beam_width_over_wavelength = 0.3333333333333333
//! mode_offset_m = 0
//! distribution_kind = coherent
//! distribution_parameter = 10
//! tail_budget = 1e-12
//! ```
//!
//! `mode_offset_m` defaults to 0 and `g_max_joule` to ħΩ0²/(2Δ). The
//! distribution keys default to a coherent state with n̄ = 10 and a tail
//! budget of 1e-12.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::config::{AtomFieldConfig, RawConfig};
use crate::distribution::{make_distribution, DistributionKind, PhotonDistribution};
use crate::error::{ConfigError, DistributionError};

const KEYS: [&str; 14] = [
    "mass_kg",
    "wavelength_m",
    "rabi_frequency_rad_s",
    "rabi_frequency_over_2pi_hz",
    "detuning_rad_s",
    "cavity_length_m",
    "longitudinal_velocity_m_s",
    "beam_width_m",
    "beam_width_over_wavelength",
    "mode_offset_m",
    "g_max_joule",
    "distribution_kind",
    "distribution_parameter",
    "tail_budget",
];

pub const DEFAULT_DISTRIBUTION_PARAMETER: f64 = 10.0;
pub const DEFAULT_TAIL_BUDGET: f64 = 1e-12;

/// Photon statistics requested by a run file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub parameter: f64,
    pub tail_budget: f64,
}

impl DistributionSpec {
    pub fn build(&self) -> Result<PhotonDistribution<f64>, DistributionError> {
        make_distribution(self.kind, self.parameter, self.tail_budget)
    }
}

impl Default for DistributionSpec {
    fn default() -> Self {
        DistributionSpec {
            kind: DistributionKind::Coherent,
            parameter: DEFAULT_DISTRIBUTION_PARAMETER,
            tail_budget: DEFAULT_TAIL_BUDGET,
        }
    }
}

/// A parsed and validated run file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub atom: AtomFieldConfig<f64>,
    pub distribution: DistributionSpec,
}

impl RunConfig {
    pub fn cesium() -> Self {
        RunConfig {
            atom: RawConfig::cesium().validate().expect("cesium parameters are valid"),
            distribution: DistributionSpec::default(),
        }
    }

    /// Canonical text form: SI keys only, fixed order, round-trip floats.
    /// Parsing it back reproduces every field bit for bit.
    pub fn to_canonical_string(&self) -> String {
        let raw = self.atom.raw();
        let mut out = String::new();
        let mut line = |key: &str, value: String| {
            let _ = writeln!(out, "{key} = {value}");
        };
        line("mass_kg", format_float(raw.mass));
        line("wavelength_m", format_float(raw.wavelength));
        line("rabi_frequency_rad_s", format_float(raw.rabi_frequency));
        line("detuning_rad_s", format_float(raw.detuning));
        line("cavity_length_m", format_float(raw.cavity_length));
        line("longitudinal_velocity_m_s", format_float(raw.longitudinal_velocity));
        line("beam_width_m", format_float(raw.beam_width));
        line("mode_offset_m", format_float(raw.mode_offset));
        if let Some(g) = raw.coupling_amplitude {
            line("g_max_joule", format_float(g));
        }
        line("distribution_kind", self.distribution.kind.to_string());
        line("distribution_parameter", format_float(self.distribution.parameter));
        line("tail_budget", format_float(self.distribution.tail_budget));
        out
    }
}

impl FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        parse_run_config(text)
    }
}

/// Shortest decimal that parses back to `x`: plain notation for moderate
/// magnitudes, exponent form otherwise. Never more than 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let magnitude = x.abs();
    if (1e-4..1e15).contains(&magnitude) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

struct Entry<'a> {
    line: usize,
    value: &'a str,
}

pub fn parse_run_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: HashMap<&str, Entry> = HashMap::new();
    for (index, raw_line) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            text: raw_line.to_string(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if value.is_empty() {
            return Err(ConfigError::InvalidValue {
                line,
                key: key.into(),
                value: value.into(),
            });
        }
        if key != "distribution_kind" && value.parse::<f64>().is_err() {
            return Err(ConfigError::InvalidValue {
                line,
                key: key.into(),
                value: value.into(),
            });
        }
        if entries.insert(key, Entry { line, value }).is_some() {
            return Err(ConfigError::DuplicateKey { line, key: key.into() });
        }
    }

    let number = |key: &'static str| -> Result<Option<f64>, ConfigError> {
        entries
            .get(key)
            .map(|e| {
                e.value.parse::<f64>().map_err(|_| ConfigError::InvalidValue {
                    line: e.line,
                    key: key.into(),
                    value: e.value.into(),
                })
            })
            .transpose()
    };
    let required = |key: &'static str| number(key)?.ok_or(ConfigError::MissingKey(key));
    let either = |a: &'static str, b: &'static str| -> Result<(Option<f64>, Option<f64>), ConfigError> {
        match (number(a)?, number(b)?) {
            (Some(_), Some(_)) => Err(ConfigError::ConflictingKeys(a, b)),
            (None, None) => Err(ConfigError::MissingKey(a)),
            pair => Ok(pair),
        }
    };

    let wavelength = required("wavelength_m")?;
    let rabi_frequency = match either("rabi_frequency_rad_s", "rabi_frequency_over_2pi_hz")? {
        (Some(w), _) => w,
        (_, Some(f)) => 2.0 * std::f64::consts::PI * f,
        _ => unreachable!(),
    };
    let beam_width = match either("beam_width_m", "beam_width_over_wavelength")? {
        (Some(b), _) => b,
        (_, Some(ratio)) => ratio * wavelength,
        _ => unreachable!(),
    };
    let raw = RawConfig {
        mass: required("mass_kg")?,
        wavelength,
        rabi_frequency,
        detuning: required("detuning_rad_s")?,
        cavity_length: required("cavity_length_m")?,
        longitudinal_velocity: required("longitudinal_velocity_m_s")?,
        beam_width,
        mode_offset: number("mode_offset_m")?.unwrap_or(0.0),
        coupling_amplitude: number("g_max_joule")?,
    };
    let atom = raw.validate()?;

    let kind = match entries.get("distribution_kind") {
        Some(e) => e.value.parse::<DistributionKind>()?,
        None => DistributionKind::Coherent,
    };
    let distribution = DistributionSpec {
        kind,
        parameter: number("distribution_parameter")?.unwrap_or(DEFAULT_DISTRIBUTION_PARAMETER),
        tail_budget: number("tail_budget")?.unwrap_or(DEFAULT_TAIL_BUDGET),
    };
    // reject bad statistics at load time rather than on first use
    distribution.build()?;
    Ok(RunConfig { atom, distribution })
}
