use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("inverse squared width collapsed or diverged at t = {t:e} s")]
    BlowUp { t: f64 },
    #[error("step budget exhausted at t = {t:e} s")]
    TooManySteps { t: f64 },
    #[error("sample times must be non-decreasing and not precede the initial state")]
    UnorderedSamples,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid size {0} is not a power of two (>= 4)")]
    NotPowerOfTwo(usize),
    #[error("initial wavefunction has zero or non-finite norm")]
    ZeroNorm,
    #[error("grid extent {extent:e} m is too small for a beam spanning {width:e} m")]
    GridTooSmall { extent: f64, width: f64 },
    #[error("norm drifted by {drift:e} over the propagation")]
    StepTooLarge { drift: f64 },
    #[error("grids differ: {left:?} vs {right:?} (points, dx)")]
    GridMismatch { left: (usize, f64), right: (usize, f64) },
}
