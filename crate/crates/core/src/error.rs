use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad class of a failure, used by the command-line runner to pick an
/// exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Rejected input: the configuration or a parameter is invalid.
    Validation,
    /// Valid input, but a numerical procedure could not produce a result.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("spectral density is negative ({value:e}) at omega = {omega}")]
    NonPositiveDensity { omega: f64, value: f64 },

    #[error("spectral density is a Dirac comb and has no pointwise value")]
    DistributionalDensity,

    #[error("self-energy requires Im z > 0, got Im z = {im}")]
    LowerHalfPlane { im: f64 },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("bad time grid: {0}")]
    BadGrid(String),

    #[error("time step {dt} does not divide the period {period}")]
    GridMismatch { dt: f64, period: f64 },

    #[error("resolvent is singular at contour node z = {re} + {im}i")]
    ResolventPole { re: f64, im: f64 },

    #[error("bad quadrature settings: {0}")]
    BadQuadrature(String),

    #[error("{0} coupling has no mode discretization")]
    UnsupportedKind(&'static str),

    #[error("mode system dimension {dim} exceeds the limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("amplitude {value} exceeds the unit disk at t = {t}")]
    NormExceeded { t: f64, value: f64 },

    #[error("invalid amplitude: {0}")]
    InvalidAmplitude(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("|a(t)| = {abs:e} at t = {t} is too close to zero for rate extraction")]
    AmplitudeNearZero { t: f64, abs: f64 },

    #[error("phase step {step} between t = {t} and the next sample is not resolved by the grid")]
    PhaseJump { t: f64, step: f64 },

    #[error("index pair ({t_index}, {s_index}) exceeds the trace length {n_steps}")]
    IndexOutOfRange {
        t_index: usize,
        s_index: usize,
        n_steps: usize,
    },

    #[error("trace covers {span} but at least {required} is needed")]
    TraceTooShort { span: f64, required: f64 },

    #[error("backends disagree: max |delta a| = {max_diff:e} exceeds tolerance {tol:e}")]
    BackendMismatch { max_diff: f64, tol: f64 },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadParameter(_) => "BadParameter",
            Error::NonPositiveDensity { .. } => "NonPositiveDensity",
            Error::DistributionalDensity => "DistributionalDensity",
            Error::LowerHalfPlane { .. } => "LowerHalfPlane",
            Error::OutOfRange(_) => "OutOfRange",
            Error::BadGrid(_) => "BadGrid",
            Error::GridMismatch { .. } => "GridMismatch",
            Error::ResolventPole { .. } => "ResolventPole",
            Error::BadQuadrature(_) => "BadQuadrature",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::NormExceeded { .. } => "NormExceeded",
            Error::InvalidAmplitude(_) => "InvalidAmplitude",
            Error::InvalidState(_) => "InvalidState",
            Error::AmplitudeNearZero { .. } => "AmplitudeNearZero",
            Error::PhaseJump { .. } => "PhaseJump",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::TraceTooShort { .. } => "TraceTooShort",
            Error::BackendMismatch { .. } => "BackendMismatch",
            Error::ConfigParse(_) => "ConfigParse",
            Error::Io(_) => "IoError",
        }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::BadParameter(_)
            | Error::NonPositiveDensity { .. }
            | Error::DistributionalDensity
            | Error::LowerHalfPlane { .. }
            | Error::OutOfRange(_)
            | Error::BadGrid(_)
            | Error::GridMismatch { .. }
            | Error::BadQuadrature(_)
            | Error::UnsupportedKind(_)
            | Error::DimensionTooLarge { .. }
            | Error::InvalidAmplitude(_)
            | Error::InvalidState(_)
            | Error::IndexOutOfRange { .. }
            | Error::TraceTooShort { .. }
            | Error::ConfigParse(_)
            | Error::Io(_) => ErrorCategory::Validation,
            Error::ResolventPole { .. }
            | Error::NormExceeded { .. }
            | Error::AmplitudeNearZero { .. }
            | Error::PhaseJump { .. }
            | Error::BackendMismatch { .. } => ErrorCategory::Numerical,
        }
    }
}
