//! Beam statistics averaged over the photon-number distribution.
//!
//! Tracing out the field leaves the atom in `ρ_A = Σ |w_n|² |ψ_n⟩⟨ψ_n|`. After
//! the exit each ψ_n is a free Gaussian fixed by its lens (M_n, t_f^n), so the
//! covariance matrix, the quality factor
//! `𝓒 = 4 (σ_xx² σ_pp² - σ_xp²) / ħ²` and the purity `Tr ρ_A²` are sums over
//! the channels.
//!
//! Channel envelopes are taken about their own centroids. With the field node
//! on the beam axis (x0 = 0) every centroid sits at the origin and these sums
//! are the exact moments of ρ_A.

use std::collections::BTreeMap;

use crate::config::AtomFieldConfig;
use crate::distribution::{DistributionKind, PhotonDistribution};
use crate::error::{EnsembleError, Error};
use crate::gaussian::{mode_expand, FockChannel};
use crate::lens::{LensModel, LensResult};
use crate::real::{hbar, pairwise_sum, relative_gap, Real};

/// Lens results keyed by photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct LensTable<T> {
    lenses: BTreeMap<usize, LensResult<T>>,
}

impl<T: Real> LensTable<T> {
    /// Lens results for every n in `0..=n_max`.
    pub fn build(model: LensModel, cfg: &AtomFieldConfig<T>, n_max: usize) -> Result<Self, Error> {
        let expansion = mode_expand(cfg)?;
        let lenses = (0..=n_max)
            .map(|n| (n, LensResult::new(model, &FockChannel::new(n, &expansion, cfg), cfg)))
            .collect();
        Ok(LensTable { lenses })
    }

    pub fn from_results(results: impl IntoIterator<Item = LensResult<T>>) -> Self {
        LensTable {
            lenses: results.into_iter().map(|l| (l.n, l)).collect(),
        }
    }

    pub fn get(&self, n: usize) -> Option<&LensResult<T>> {
        self.lenses.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LensResult<T>> {
        self.lenses.values()
    }
}

/// `(|w_n|², lens_n)` for every channel of the distribution.
fn support<'a, T: Real>(
    dist: &PhotonDistribution<T>,
    lenses: &'a LensTable<T>,
) -> Result<Vec<(T, &'a LensResult<T>)>, EnsembleError> {
    dist.iter()
        .map(|(n, w)| lenses.get(n).map(|l| (w, l)).ok_or(EnsembleError::MissingChannel(n)))
        .collect()
}

/// Position-momentum covariance of the mixed atomic state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covariance<T> {
    pub t: T,
    /// σ_xx² (m²).
    pub sigma_xx2: T,
    /// σ_pp² (kg² m²/s²).
    pub sigma_pp2: T,
    /// σ_xp (J s).
    pub sigma_xp: T,
    /// σ_xx²/b0², σ_pp² b0²/ħ², σ_xp/ħ; the form that survives f32.
    pub reduced: [T; 3],
}

impl<T: Real> Covariance<T> {
    /// `4 det / ħ²`, the quality factor as seen at this instant.
    pub fn quality(&self) -> T {
        let [xx, pp, xp] = self.reduced;
        T::lit(4.0) * (xx * pp - xp * xp)
    }

    /// σ_xx² σ_pp² - σ_xp² (J² s²).
    pub fn determinant(&self) -> T {
        self.sigma_xx2 * self.sigma_pp2 - self.sigma_xp * self.sigma_xp
    }
}

/// Covariance at time `t ≥ t_L`:
///
/// ```text
/// σ_xx² = Σ |w_n|² B_n²/2
/// σ_pp² = ħ²/(2 b0²) Σ |w_n|²/M_n²
/// σ_xp  = ħ/2 Σ |w_n|² (t - t_f^n)/(M_n² τ0)
/// ```
///
/// σ_xp is positive past a waist (diverging wavefronts).
pub fn covariance<T: Real>(
    dist: &PhotonDistribution<T>,
    lenses: &LensTable<T>,
    cfg: &AtomFieldConfig<T>,
    t: T,
) -> Result<Covariance<T>, EnsembleError> {
    if !(t >= cfg.interaction_time()) {
        return Err(EnsembleError::BeforeExit {
            t: t.to_f64().unwrap_or(f64::NAN),
            exit: cfg.interaction_time().to_f64().unwrap_or(f64::NAN),
        });
    }
    let channels = support(dist, lenses)?;
    let tau0 = cfg.rayleigh_time();
    let mut xx = Vec::with_capacity(channels.len());
    let mut pp = Vec::with_capacity(channels.len());
    let mut xp = Vec::with_capacity(channels.len());
    for (w, lens) in channels {
        let m2 = lens.magnification * lens.magnification;
        let drift = (t - lens.t_focus) / (m2 * tau0);
        xx.push(w * m2 * (T::one() + drift * drift));
        pp.push(w / m2);
        xp.push(w * drift);
    }
    let reduced = [
        T::half() * pairwise_sum(&xx),
        T::half() * pairwise_sum(&pp),
        T::half() * pairwise_sum(&xp),
    ];
    let b0 = cfg.beam_width();
    let hbar = hbar::<T>();
    Ok(Covariance {
        t,
        sigma_xx2: reduced[0] * b0 * b0,
        sigma_pp2: reduced[1] * (hbar / b0) * (hbar / b0),
        sigma_xp: reduced[2] * hbar,
        reduced,
    })
}

/// Double sum `Σ_n Σ_m |w_n|²|w_m|²/M_m² [M_n² + (t_f^n² - t_f^n t_f^m)/(M_n² τ0²)]`,
/// with no cross-check.
pub fn quality_double_sum<T: Real>(
    dist: &PhotonDistribution<T>,
    lenses: &LensTable<T>,
    cfg: &AtomFieldConfig<T>,
) -> Result<T, EnsembleError> {
    let channels = support(dist, lenses)?;
    let tau0 = cfg.rayleigh_time();
    let rows: Vec<T> = channels
        .iter()
        .map(|&(wn, ln)| {
            let mn2 = ln.magnification * ln.magnification;
            let tn = ln.t_focus / tau0;
            let row: Vec<T> = channels
                .iter()
                .map(|&(wm, lm)| {
                    let mm2 = lm.magnification * lm.magnification;
                    let tm = lm.t_focus / tau0;
                    wn * wm / mm2 * (mn2 + (tn * tn - tn * tm) / mn2)
                })
                .collect();
            pairwise_sum(&row)
        })
        .collect();
    Ok(pairwise_sum(&rows))
}

/// Times, in units of t_L, at which [`quality_factor`] re-derives 𝓒 from the
/// covariance matrix.
pub const CROSS_CHECK_TIMES: [f64; 3] = [1.5, 2.0, 5.0];

/// Relative agreement demanded between the double sum and the covariance route.
pub fn cross_check_tolerance<T: Real>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(1e4))
}

/// Quality factor 𝓒 (squared beam quality, ≥ 1), cross-checked against the
/// covariance determinant at 1.5, 2 and 5 t_L.
pub fn quality_factor<T: Real>(
    dist: &PhotonDistribution<T>,
    lenses: &LensTable<T>,
    cfg: &AtomFieldConfig<T>,
) -> Result<T, EnsembleError> {
    let double_sum = quality_double_sum(dist, lenses, cfg)?;
    for factor in CROSS_CHECK_TIMES {
        let t = T::lit(factor) * cfg.interaction_time();
        let from_cov = covariance(dist, lenses, cfg, t)?.quality();
        if relative_gap(double_sum, from_cov, T::one()) > cross_check_tolerance() {
            return Err(EnsembleError::InconsistentMoments {
                double_sum: double_sum.to_f64().unwrap_or(f64::NAN),
                from_covariance: from_cov.to_f64().unwrap_or(f64::NAN),
                t: t.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(double_sum)
}

/// Purity `Tr ρ_A² = Σ_n Σ_m |w_n|²|w_m|² · 2 sqrt(τ_n' τ_m') / sqrt((τ_n' + τ_m')² + (t_f^n - t_f^m)²)`.
///
/// Each term is the squared overlap `|⟨ψ_m|ψ_n⟩|²` of two free Gaussians; the
/// distribution weights are part of the sum, so a Fock state gives exactly 1.
pub fn purity<T: Real>(
    dist: &PhotonDistribution<T>,
    lenses: &LensTable<T>,
    cfg: &AtomFieldConfig<T>,
) -> Result<T, EnsembleError> {
    let channels = support(dist, lenses)?;
    let tau0 = cfg.rayleigh_time();
    let rows: Vec<T> = channels
        .iter()
        .map(|&(wn, ln)| {
            let an = ln.rayleigh_time / tau0;
            let tn = ln.t_focus / tau0;
            let row: Vec<T> = channels
                .iter()
                .map(|&(wm, lm)| {
                    let am = lm.rayleigh_time / tau0;
                    let gap = tn - lm.t_focus / tau0;
                    let overlap = T::two() * (an * am).sqrt() / ((an + am) * (an + am) + gap * gap).sqrt();
                    wn * wm * overlap
                })
                .collect();
            pairwise_sum(&row)
        })
        .collect();
    Ok(pairwise_sum(&rows))
}

/// Everything the beam exposes at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamMoments<T> {
    pub covariance: Covariance<T>,
    /// σ_xx² σ_pp² - σ_xp² (J² s²).
    pub determinant: T,
    /// 𝓒 from the double sum.
    pub quality: T,
    pub purity: T,
}

pub fn beam_moments<T: Real>(
    dist: &PhotonDistribution<T>,
    lenses: &LensTable<T>,
    cfg: &AtomFieldConfig<T>,
    t: T,
) -> Result<BeamMoments<T>, EnsembleError> {
    let covariance = covariance(dist, lenses, cfg, t)?;
    Ok(BeamMoments {
        determinant: covariance.determinant(),
        covariance,
        quality: quality_factor(dist, lenses, cfg)?,
        purity: purity(dist, lenses, cfg)?,
    })
}

/// One point of an n̄ sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T> {
    pub nbar: T,
    pub quality: T,
    pub purity: T,
    /// 𝓒 recomputed from the covariance at each requested time.
    pub quality_at: Vec<T>,
    /// Largest photon number kept after truncation.
    pub n_truncation: usize,
}

/// Evaluates 𝓒 and purity for a distribution of mean `nbar`.
pub fn sweep_point<T: Real>(
    cfg: &AtomFieldConfig<T>,
    kind: DistributionKind,
    nbar: T,
    tail_budget: T,
    model: LensModel,
    times: &[T],
) -> Result<SweepPoint<T>, Error> {
    let dist = crate::distribution::make_distribution(kind, nbar, tail_budget)?;
    let lenses = LensTable::build(model, cfg, dist.max_photons())?;
    let quality = quality_factor(&dist, &lenses, cfg)?;
    let purity = purity(&dist, &lenses, cfg)?;
    let quality_at = times
        .iter()
        .map(|&t| covariance(&dist, &lenses, cfg, t).map(|c| c.quality()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepPoint {
        nbar,
        quality,
        purity,
        quality_at,
        n_truncation: dist.max_photons(),
    })
}
