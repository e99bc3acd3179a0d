use thiserror::Error;

/// Errors raised by the matrix layer, the engine simulator and the optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OttoError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported matrix dimension {0} (only 2 and 4)")]
    UnsupportedDimension(usize),

    #[error("matrix has a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("the conventional engine needs a hot-bath inverse temperature (beta_h)")]
    MissingHotBath,

    #[error("Kraus operators are not complete (deviation {0:e})")]
    KrausIncomplete(f64),
}

pub type Result<T> = std::result::Result<T, OttoError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> OttoError {
    OttoError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
