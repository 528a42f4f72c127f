use thiserror::Error;

/// Why a 2×2 matrix failed the semi-skew test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SemiSkewReason {
    NonzeroTrace,
    NonpositiveDeterminant,
    ScaledRotation,
    NotTwoDimensional,
}

impl std::fmt::Display for SemiSkewReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SemiSkewReason::NonzeroTrace => "nonzero trace",
            SemiSkewReason::NonpositiveDeterminant => "nonpositive determinant",
            SemiSkewReason::ScaledRotation => "scaled rotation (alpha1 = alpha2)",
            SemiSkewReason::NotTwoDimensional => "semi-skew forms are only defined in dimension 2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symmetric (asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("operator is singular or numerically singular")]
    SingularOperator,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("linear program is unbounded")]
    UnboundedLp,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),
    #[error("pushforward has no closed form: {0}")]
    UnsupportedPushforward(String),
    #[error("not semi-skew: {0}")]
    NotSemiSkew(SemiSkewReason),
    #[error("gamma must be nonzero")]
    ZeroGamma,
    #[error("unknown gallery entry `{0}`")]
    UnknownEntry(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("set is unbounded; use the cone residual instead")]
    UnboundedSet,
    #[error("set is not a cone")]
    NotACone,
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
