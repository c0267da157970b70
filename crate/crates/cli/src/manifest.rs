//! Sidecar JSON written next to a sweep CSV.

use std::path::{Path, PathBuf};

use qlens::{format_float, mode_expand, FockChannel, LensModel, LensResult, RunConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::Sweep;
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct ChannelFlags {
    pub n: usize,
    pub thin_lens_ok: bool,
    pub virtual_focus: bool,
    pub dispersive_ratio: String,
}

#[derive(Debug, Serialize)]
pub struct DistributionSummary {
    pub kind: String,
    pub tail_budget: String,
    pub nbar: Vec<String>,
    pub n_truncation: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// sha256 of the canonical config and the sweep arguments.
    pub run_id: String,
    pub software_version: String,
    pub command: String,
    pub config: String,
    pub lens_model: String,
    pub times_s: Vec<String>,
    pub distribution: DistributionSummary,
    pub channels: Vec<ChannelFlags>,
}

impl RunManifest {
    pub fn for_sweep(
        cfg: &RunConfig,
        nbars: &[f64],
        times: &[f64],
        model: LensModel,
        sweep: &Sweep,
    ) -> Result<Self, CliError> {
        let config = cfg.to_canonical_string();
        let nbar: Vec<String> = nbars.iter().map(|x| format_float(*x)).collect();
        let times_s: Vec<String> = times.iter().map(|x| format_float(*x)).collect();
        let lens_model = match model {
            LensModel::Exact => "exact",
            LensModel::Thin => "thin",
        }
        .to_string();

        let mut hasher = Sha256::new();
        hasher.update(config.as_bytes());
        hasher.update(format!(
            "sweep\nlens = {lens_model}\nnbar = {}\ntimes = {}\n",
            nbar.join(","),
            times_s.join(",")
        ));
        let run_id: String = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();

        let expansion = mode_expand(&cfg.atom)?;
        let channels = (0..=sweep.n_max())
            .map(|n| {
                let ch = FockChannel::new(n, &expansion, &cfg.atom);
                let lens = LensResult::new(model, &ch, &cfg.atom);
                ChannelFlags {
                    n,
                    thin_lens_ok: lens.thin_lens_ok,
                    virtual_focus: lens.virtual_focus,
                    dispersive_ratio: format_float(cfg.atom.dispersive_ratio(n)),
                }
            })
            .collect();

        Ok(RunManifest {
            run_id,
            software_version: env!("CARGO_PKG_VERSION").to_string(),
            command: "sweep".into(),
            config,
            lens_model,
            times_s,
            distribution: DistributionSummary {
                kind: cfg.distribution.kind.to_string(),
                tail_budget: format_float(cfg.distribution.tail_budget),
                nbar,
                n_truncation: sweep.points.iter().map(|p| p.n_truncation).collect(),
            },
            channels,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// `out.csv` -> `out.csv.manifest.json`.
pub fn path_for(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}
