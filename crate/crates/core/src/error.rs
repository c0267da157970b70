use thiserror::Error;

/// Rejections raised while building an [`AtomFieldConfig`](crate::AtomFieldConfig)
/// or parsing a run configuration file.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parameter `{0}` must be strictly positive and finite")]
    NonPositiveParameter(&'static str),
    #[error("detuning is zero: the dispersive coupling is undefined")]
    ZeroDetuning,
    #[error("parameter `{0}` must be finite")]
    NonFinite(&'static str),
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: cannot parse value `{value}` for `{key}`")]
    InvalidValue { line: usize, key: String, value: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("keys `{0}` and `{1}` are mutually exclusive")]
    ConflictingKeys(&'static str, &'static str),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("distribution parameter must be non-negative and finite, got {0}")]
    NegativeParameter(f64),
    #[error("fock distribution needs an integer photon number, got {0}")]
    NonIntegerFock(f64),
    #[error("tail budget must lie in (0, 1e-6], got {0}")]
    InvalidTailBudget(f64),
    #[error("unknown distribution kind `{0}` (expected fock, coherent or thermal)")]
    UnknownKind(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("coupling curvature vanishes on the beam axis (cos 2k x0 = 0): no harmonic lens")]
    DegenerateCurvature,
    #[error("time {t:e} s lies outside the {stage} stage [{start:e}, {end:e}]")]
    OutOfStage {
        t: f64,
        stage: &'static str,
        start: f64,
        end: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LensError {
    #[error("channel n = {n} has a virtual focus at t_f = {t_focus:e} s before the cavity exit")]
    NoFocus { n: usize, t_focus: f64 },
    #[error("channel n = {0} has no lens (vacuum channel or non-confining mode)")]
    NotALens(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnsembleError {
    #[error("no lens result for photon number {0}")]
    MissingChannel(usize),
    #[error("time {t:e} s precedes the cavity exit at {exit:e} s")]
    BeforeExit { t: f64, exit: f64 },
    #[error(
        "quality factor cross-check failed: double sum {double_sum} vs covariance {from_covariance} at t = {t:e} s"
    )]
    InconsistentMoments {
        double_sum: f64,
        from_covariance: f64,
        t: f64,
    },
}

/// Any failure of the core pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
    #[error(transparent)]
    Lens(#[from] LensError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}
