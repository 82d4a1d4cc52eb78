use thiserror::Error;

/// Errors raised by structured-matrix operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StruxError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("matrix is numerically singular (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    SingularMatrix { pivot: f64, threshold: f64 },
    #[error("degenerate operator: {0}")]
    DegenerateOperator(String),
    #[error("degenerate knots: {0}")]
    DegenerateKnots(String),
    #[error("knot collision between row knot {row} and column knot {col}")]
    KnotCollision { row: usize, col: usize },
    #[error("point sets are not separated (ratio {ratio:.4} >= 1)")]
    SeparationViolation { ratio: f64 },
    #[error("column knots do not form a scaled root-of-unity grid (deviation {deviation:.3e})")]
    NotCvMatrix { deviation: f64 },
    #[error("Woodbury core matrix is singular")]
    SingularCore,
    #[error("banded part of the approximation is singular")]
    SigmaSingular,
    #[error("structured solve did not converge (relative residual {residual:.3e})")]
    Unconverged { residual: f64 },
    #[error("operator mismatch: {0}")]
    OperatorMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed serialized data: {0}")]
    Format(String),
}

impl StruxError {
    /// True for failures caused by singular or degenerate numerics rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            StruxError::SingularMatrix { .. }
                | StruxError::SingularCore
                | StruxError::SigmaSingular
                | StruxError::Unconverged { .. }
                | StruxError::DegenerateOperator(_)
                | StruxError::SeparationViolation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, StruxError>;

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(StruxError::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
