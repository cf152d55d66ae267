use std::fmt;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument was NaN or infinite where a finite real is required.
    NonFinite { name: &'static str, value: f64 },
    /// An argument violated its documented range.
    InvalidArgument { reason: String },
    /// A polytope model with an invalid (n, d) combination.
    InvalidModel { reason: String },
    /// The adaptive quadrature exhausted its evaluation budget. Carries the
    /// best value and error estimate reached before giving up.
    NonConvergence {
        value: f64,
        abs_error: f64,
        evaluations: u64,
    },
    /// A subset enumeration would exceed the configured cap.
    CombinatorialBlowup { terms: u128, cap: u128 },
    /// Hull dimension above the supported cap.
    DimensionTooLarge { d: usize, cap: usize },
}

impl Error {
    pub(crate) fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            reason: reason.into(),
        }
    }

    pub(crate) fn model(reason: impl Into<String>) -> Self {
        Error::InvalidModel {
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { name, value } => {
                write!(f, "argument `{name}` must be finite, got {value}")
            }
            Error::InvalidArgument { reason } => write!(f, "invalid argument: {reason}"),
            Error::InvalidModel { reason } => write!(f, "invalid model: {reason}"),
            Error::NonConvergence {
                value,
                abs_error,
                evaluations,
            } => write!(
                f,
                "quadrature did not converge after {evaluations} evaluations \
                 (partial value {value}, error estimate {abs_error})"
            ),
            Error::CombinatorialBlowup { terms, cap } => write!(
                f,
                "subset enumeration needs {terms} terms, above the cap of {cap}"
            ),
            Error::DimensionTooLarge { d, cap } => {
                write!(f, "dimension {d} above the supported cap {cap}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
