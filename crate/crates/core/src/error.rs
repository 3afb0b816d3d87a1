use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("dimension d must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("polynomial is not homogeneous (degrees {degrees:?})")]
    NotHomogeneous { degrees: Vec<usize> },

    #[error("ideal generator {0} is the zero polynomial")]
    ZeroGenerator(usize),

    #[error("coordinate index {index} out of range for d = {d}")]
    CoordinateOutOfRange { index: usize, d: usize },

    #[error("degree {requested} exceeds cached n_max = {n_max}; raise n_max")]
    DegreeOverflow { requested: usize, n_max: usize },

    #[error("invalid degree window [{m}, {big_m}]: {reason}")]
    InvalidWindow {
        m: usize,
        big_m: usize,
        reason: String,
    },

    #[error("point lies outside the open unit ball (norm {0})")]
    OutsideBall(f64),

    #[error("point is not on the variety of the ideal (generator residual {0:e})")]
    Infeasible(f64),

    #[error("variety boundary not located after {attempts} attempts (is Z(I) on the sphere empty?)")]
    BoundaryNotLocated { attempts: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
