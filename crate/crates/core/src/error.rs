use chrono::NaiveDate;

/// Errors returned by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An operation that needs at least one curve received none.
    #[error("curve set is empty")]
    EmptySet,
    /// The global maximum of a set is zero, so it cannot be normalized.
    #[error("global maximum is zero, cannot normalize")]
    ZeroScale,
    /// Denormalization was requested on a set without a scale factor.
    #[error("curve set carries no normalization scale factor")]
    NotNormalized,
    /// Too few observations for the requested computation.
    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },
    /// Requested number of components is zero or exceeds the grid size.
    #[error("invalid component count {requested} (grid has {grid_points} points)")]
    InvalidComponentCount { requested: usize, grid_points: usize },
    /// A curve or model was defined on a different grid.
    #[error("grid mismatch: expected {expected} points, got {got}")]
    GridMismatch { expected: usize, got: usize },
    /// A truncation level larger than the available components.
    #[error("truncation {requested} exceeds available components {available}")]
    TruncationTooLarge { requested: usize, available: usize },
    /// Every eigenvalue is zero, so explained variability is undefined.
    #[error("total variance is zero")]
    DegenerateVariance,
    /// The grid violates its invariants.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    /// A curve violates its invariants.
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    /// Two curves in a set share a date.
    #[error("duplicate date {0} in curve set")]
    DuplicateDate(NaiveDate),

    /// X'X is numerically singular.
    #[error("design matrix is rank deficient")]
    RankDeficientDesign,
    /// Design matrix and response disagree in length, or n < q.
    #[error("design/response shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Paired series have different lengths.
    #[error("series length mismatch: actual {actual}, predicted {predicted}")]
    LengthMismatch { actual: usize, predicted: usize },
    /// A series is empty.
    #[error("series is empty")]
    EmptySeries,
    /// A series holds NaN or infinite values.
    #[error("series contains non-finite values")]
    NonFinite,
    /// Some actual values are exactly zero.
    #[error("actual series is zero at indices {indices:?}")]
    DivisionByZeroActual { indices: Vec<usize> },
    /// Sum of actual values is zero.
    #[error("total actual energy is zero")]
    ZeroTotalEnergy,
    /// Actual series has zero variance.
    #[error("actual series has zero variance")]
    ZeroVarianceActual,
    /// Sum of squared actuals is zero.
    #[error("actual series has zero norm")]
    ZeroActualNorm,
    /// One of the two series is constant.
    #[error("series has zero variance")]
    ZeroVariance,

    /// Eq.-7 style stability check on a series whose average is zero.
    #[error("series average is zero")]
    ZeroAverage,
    /// No station reported a value at a timestamp.
    #[error("no data at {0}")]
    NoData(String),
    /// Input file could not be parsed.
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    /// Configuration is invalid.
    #[error("configuration error: {0}")]
    Config(String),
    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
