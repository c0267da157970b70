//! Photon-number statistics |w_n|² of the field mode.

use std::fmt;
use std::str::FromStr;

use crate::error::DistributionError;
use crate::real::{pairwise_sum, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistributionKind {
    Fock,
    Coherent,
    /// Bose-Einstein statistics; heavier tail than Poisson.
    Thermal,
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistributionKind::Fock => "fock",
            DistributionKind::Coherent => "coherent",
            DistributionKind::Thermal => "thermal",
        })
    }
}

impl FromStr for DistributionKind {
    type Err = DistributionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fock" => Ok(DistributionKind::Fock),
            "coherent" => Ok(DistributionKind::Coherent),
            "thermal" => Ok(DistributionKind::Thermal),
            other => Err(DistributionError::UnknownKind(other.to_string())),
        }
    }
}

/// Largest accepted truncation budget.
pub const MAX_TAIL_BUDGET: f64 = 1e-6;

/// Normalized, truncated weights over a contiguous photon-number range.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution<T> {
    kind: DistributionKind,
    parameter: T,
    first: usize,
    weights: Vec<T>,
    tail_mass: T,
}

/// Builds a distribution; see the constructors for each kind.
pub fn make_distribution<T: Real>(
    kind: DistributionKind,
    parameter: T,
    tail_budget: T,
) -> Result<PhotonDistribution<T>, DistributionError> {
    match kind {
        DistributionKind::Fock => {
            check_parameter(parameter)?;
            if parameter.fract() != T::zero() {
                return Err(DistributionError::NonIntegerFock(to_f64(parameter)));
            }
            Ok(PhotonDistribution::fock(parameter.to_usize().unwrap()))
        }
        DistributionKind::Coherent => PhotonDistribution::coherent(parameter, tail_budget),
        DistributionKind::Thermal => PhotonDistribution::thermal(parameter, tail_budget),
    }
}

fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn check_parameter<T: Real>(p: T) -> Result<(), DistributionError> {
    if !(p.is_finite() && p >= T::zero()) {
        return Err(DistributionError::NegativeParameter(to_f64(p)));
    }
    Ok(())
}

fn check_budget<T: Real>(b: T) -> Result<(), DistributionError> {
    if !(b > T::zero() && b <= T::lit(MAX_TAIL_BUDGET)) {
        return Err(DistributionError::InvalidTailBudget(to_f64(b)));
    }
    Ok(())
}

impl<T: Real> PhotonDistribution<T> {
    /// Field in the number state |n⟩.
    pub fn fock(n: usize) -> Self {
        PhotonDistribution {
            kind: DistributionKind::Fock,
            parameter: T::from_count(n),
            first: n,
            weights: vec![T::one()],
            tail_mass: T::zero(),
        }
    }

    /// Poisson weights e^{-n̄} n̄ⁿ/n!.
    ///
    /// Weights are generated outward from the mode by the ratio
    /// `w_{n+1}/w_n = n̄/(n+1)`, so nothing underflows near the peak even for
    /// large n̄. The upper tail is cut at the first N whose geometric tail bound
    /// `w_{N+1} / (1 - n̄/(N+2))` falls below `tail_budget` times the mass kept.
    pub fn coherent(mean: T, tail_budget: T) -> Result<Self, DistributionError> {
        check_parameter(mean)?;
        check_budget(tail_budget)?;
        if mean == T::zero() {
            return Ok(PhotonDistribution {
                kind: DistributionKind::Coherent,
                ..Self::fock(0)
            });
        }
        let mode = mean.floor().to_usize().unwrap();

        // below and including the mode, walking down from w_mode = 1
        let mut lower = vec![T::one()];
        let mut w = T::one();
        for n in (1..=mode).rev() {
            w = w * T::from_count(n) / mean;
            if w == T::zero() {
                break;
            }
            lower.push(w);
        }
        let first = mode + 1 - lower.len();
        lower.reverse();

        let mut weights = lower;
        let mut kept = pairwise_sum(&weights);
        let mut w = T::one();
        let mut n = mode;
        let tail = loop {
            let next = w * mean / T::from_count(n + 1);
            let ratio = mean / T::from_count(n + 2);
            // Once past the mean the ratio is < 1 and the tail is bounded geometrically.
            if ratio < T::one() {
                let bound = next / (T::one() - ratio);
                if bound <= tail_budget * kept {
                    break bound / (kept + bound);
                }
            }
            weights.push(next);
            kept = kept + next;
            w = next;
            n += 1;
        };

        Ok(Self::renormalized(
            DistributionKind::Coherent,
            mean,
            first,
            weights,
            tail,
        ))
    }

    /// Bose-Einstein weights n̄ⁿ/(n̄+1)^{n+1}; the tail beyond N is exactly
    /// q^{N+1} with q = n̄/(n̄+1).
    pub fn thermal(mean: T, tail_budget: T) -> Result<Self, DistributionError> {
        check_parameter(mean)?;
        check_budget(tail_budget)?;
        if mean == T::zero() {
            return Ok(PhotonDistribution {
                kind: DistributionKind::Thermal,
                ..Self::fock(0)
            });
        }
        let q = mean / (mean + T::one());
        let mut w = T::one() / (mean + T::one());
        let mut tail = q;
        let mut weights = vec![w];
        while tail > tail_budget {
            w = w * q;
            tail = tail * q;
            weights.push(w);
        }
        Ok(Self::renormalized(DistributionKind::Thermal, mean, 0, weights, tail))
    }

    fn renormalized(kind: DistributionKind, parameter: T, first: usize, weights: Vec<T>, tail: T) -> Self {
        let total = pairwise_sum(&weights);
        let weights = weights.into_iter().map(|w| w / total).collect();
        PhotonDistribution {
            kind,
            parameter,
            first,
            weights,
            tail_mass: tail,
        }
    }

    /// Restricts the support to n ≤ n_max and renormalizes; the discarded
    /// mass is added to the recorded tail.
    pub fn truncated(&self, n_max: usize) -> Self {
        if n_max >= self.max_photons() {
            return self.clone();
        }
        assert!(n_max >= self.first, "truncation removes the whole support");
        let keep = n_max - self.first + 1;
        let weights = self.weights[..keep].to_vec();
        let dropped = pairwise_sum(&self.weights[keep..]);
        let tail = self.tail_mass + dropped * (T::one() - self.tail_mass);
        Self::renormalized(self.kind, self.parameter, self.first, weights, tail)
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    /// n for Fock states, n̄ otherwise.
    pub fn parameter(&self) -> T {
        self.parameter
    }

    /// Estimated probability mass discarded by the truncation.
    pub fn tail_mass(&self) -> T {
        self.tail_mass
    }

    pub fn min_photons(&self) -> usize {
        self.first
    }

    pub fn max_photons(&self) -> usize {
        self.first + self.weights.len() - 1
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// |w_n|², zero outside the stored support.
    pub fn weight(&self, n: usize) -> T {
        n.checked_sub(self.first)
            .and_then(|i| self.weights.get(i).copied())
            .unwrap_or_else(T::zero)
    }

    /// `(n, |w_n|²)` pairs in increasing n.
    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.weights.iter().enumerate().map(move |(i, &w)| (self.first + i, w))
    }

    pub fn total(&self) -> T {
        pairwise_sum(&self.weights)
    }

    pub fn mean(&self) -> T {
        let terms: Vec<T> = self.iter().map(|(n, w)| T::from_count(n) * w).collect();
        pairwise_sum(&terms)
    }

    /// Same statistics with the weight list given in an arbitrary order; the
    /// ensemble sums must not care.
    pub fn from_weights(kind: DistributionKind, parameter: T, first: usize, weights: Vec<T>) -> Self {
        Self::renormalized(kind, parameter, first, weights, T::zero())
    }
}
