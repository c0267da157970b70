//! CSV producers behind the subcommands.

use std::fmt::Write as _;

use qlens::{
    evolve as evolve_at, format_float, mode_expand, sweep_point, thin_lens, DistributionKind, FockChannel, LensModel,
    LensResult, RunConfig, SweepPoint, DISPERSIVE_WARN_THRESHOLD,
};
use rayon::prelude::*;

use crate::CliError;

fn row(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

fn flag(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

/// Warns on stderr when the largest channel leaves the dispersive limit.
pub fn warn_dispersive(cfg: &RunConfig, n_max: usize) {
    let ratio = cfg.atom.dispersive_ratio(n_max.max(1));
    if ratio.abs() >= DISPERSIVE_WARN_THRESHOLD {
        eprintln!(
            "qlens: warning: dispersive ratio {} at n = {} is not below {DISPERSIVE_WARN_THRESHOLD}",
            format_float(ratio),
            n_max.max(1)
        );
    }
}

pub fn foci(cfg: &RunConfig, n_min: usize, n_max: usize) -> Result<String, CliError> {
    let atom = &cfg.atom;
    let expansion = mode_expand(atom)?;
    let mut out = String::new();
    row(
        &mut out,
        &[
            "n",
            "omega_n_rad_s",
            "phi_n",
            "b_n_m",
            "t_f_s",
            "t_f_thin_s",
            "z_f_m",
            "M_n",
            "M_n_thin",
            "b0_prime_m",
            "tau0_prime_s",
            "thin_lens_ok",
            "dispersive_ratio",
        ]
        .map(String::from),
    );
    for n in n_min..=n_max {
        let ch = FockChannel::new(n, &expansion, atom);
        let exact = LensResult::exact(&ch, atom);
        let thin = LensResult::thin(&ch, atom);
        row(
            &mut out,
            &[
                n.to_string(),
                format_float(ch.rate),
                format_float(ch.phase),
                format_float(ch.ground_width),
                format_float(exact.t_focus),
                format_float(thin.t_focus),
                format_float(exact.z_focus),
                format_float(exact.magnification),
                format_float(thin.magnification),
                format_float(exact.waist),
                format_float(exact.rayleigh_time),
                flag(n > 0 && thin_lens(&ch, atom).holds()),
                format_float(atom.dispersive_ratio(n)),
            ],
        );
    }
    Ok(out)
}

/// Sweep rows in input order.
pub struct Sweep {
    pub times: Vec<f64>,
    pub points: Vec<SweepPoint<f64>>,
}

impl Sweep {
    pub fn n_max(&self) -> usize {
        self.points.iter().map(|p| p.n_truncation).max().unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header: Vec<String> = ["nbar", "C_quality", "purity"].map(String::from).to_vec();
        header.extend(
            self.times
                .iter()
                .map(|t| format!("C_from_covariance_at_{}_s", format_float(*t))),
        );
        header.push("n_truncation".into());
        row(&mut out, &header);
        for p in &self.points {
            let mut fields = vec![format_float(p.nbar), format_float(p.quality), format_float(p.purity)];
            fields.extend(p.quality_at.iter().map(|q| format_float(*q)));
            fields.push(p.n_truncation.to_string());
            row(&mut out, &fields);
        }
        out
    }
}

pub fn sweep(
    pool: &rayon::ThreadPool,
    cfg: &RunConfig,
    nbars: &[f64],
    times: &[f64],
    model: LensModel,
) -> Result<Sweep, CliError> {
    let spec = cfg.distribution;
    if spec.kind == DistributionKind::Fock {
        return Err(CliError::Config(
            "sweep needs a coherent or thermal distribution_kind".into(),
        ));
    }
    let t_l = cfg.atom.interaction_time();
    if let Some(t) = times.iter().find(|&&t| t < t_l) {
        return Err(CliError::Config(format!(
            "--times: {} s precedes the cavity exit at {} s",
            format_float(*t),
            format_float(t_l)
        )));
    }
    let points = pool.install(|| {
        nbars
            .par_iter()
            .map(|&nbar| sweep_point(&cfg.atom, spec.kind, nbar, spec.tail_budget, model, times))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(Sweep {
        times: times.to_vec(),
        points,
    })
}

pub fn evolve(cfg: &RunConfig, n: usize, times: &[f64]) -> Result<String, CliError> {
    let atom = &cfg.atom;
    let expansion = mode_expand(atom)?;
    let ch = FockChannel::new(n, &expansion, atom);
    let mut out = String::new();
    out.push_str("t_s,z_m,width_m,u_per_m2,gouy_rad,xbar_m,pbar_kg_m_s,stage\n");
    for &t in times {
        if t < 0.0 {
            return Err(CliError::Config(format!("--t-grid: negative time {}", format_float(t))));
        }
        let p = evolve_at(&ch, &expansion, atom, t)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_float(t),
            format_float(atom.position_at(t)),
            format_float(p.width()),
            format_float(p.u),
            format_float(p.mu),
            format_float(p.xbar),
            format_float(p.pbar),
            p.stage.label()
        );
    }
    Ok(out)
}
