use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Hurst parameter {0} must lie strictly inside (1/2, 1)")]
    InvalidHurst(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("kernel evaluated on the diagonal x1 == x2 = {0} inside its support")]
    DiagonalEvaluation(f64),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("circulant embedding failed: minimum eigenvalue {min_eigenvalue:e} and dense fallback unavailable ({reason})")]
    EmbeddingFailure { min_eigenvalue: f64, reason: String },

    #[error("incompatible grid: {0}")]
    IncompatibleGrid(String),

    #[error("numerical blowup at step {step}: |X| = {value:e} exceeds guard {guard:e}")]
    NumericalBlowup { step: usize, value: f64, guard: f64 },

    #[error("inadmissible drift: {0}")]
    InadmissibleDrift(String),

    #[error("sample size N = {0} must be even")]
    OddSampleSize(usize),

    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    #[error("degenerate regressor: Z'Z = 0")]
    DegenerateRegressor,

    #[error("estimated diffusion {sigma_hat:e} is below the positivity floor {floor:e}")]
    DegenerateDiffusion { sigma_hat: f64, floor: f64 },

    #[error(
        "insufficient resolution: N = {n}, delta = {delta} leaves only {n_n} decelerated steps"
    )]
    InsufficientResolution { n: usize, delta: f64, n_n: usize },

    #[error("no d(H) value available for H = {0}")]
    MissingCalibration(f64),

    #[error(
        "cell ({estimator}, N = {n}) has {count} successful replications, need at least {needed}"
    )]
    EmptyCell {
        estimator: String,
        n: usize,
        count: usize,
        needed: usize,
    },

    #[error("insufficient points: {0}")]
    InsufficientPoints(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable name of the variant, used as error tag in
    /// campaign output and in CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidHurst(_) => "InvalidHurst",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::DiagonalEvaluation(_) => "DiagonalEvaluation",
            Error::ResourceLimit(_) => "ResourceLimit",
            Error::EmbeddingFailure { .. } => "EmbeddingFailure",
            Error::IncompatibleGrid(_) => "IncompatibleGrid",
            Error::NumericalBlowup { .. } => "NumericalBlowup",
            Error::InadmissibleDrift(_) => "InadmissibleDrift",
            Error::OddSampleSize(_) => "OddSampleSize",
            Error::DegeneratePath(_) => "DegeneratePath",
            Error::DegenerateRegressor => "DegenerateRegressor",
            Error::DegenerateDiffusion { .. } => "DegenerateDiffusion",
            Error::InsufficientResolution { .. } => "InsufficientResolution",
            Error::MissingCalibration(_) => "MissingCalibration",
            Error::EmptyCell { .. } => "EmptyCell",
            Error::InsufficientPoints(_) => "InsufficientPoints",
            Error::DegenerateSample(_) => "DegenerateSample",
            Error::Config(_) => "Config",
            Error::Io { .. } => "Io",
            Error::Json(_) => "Json",
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
