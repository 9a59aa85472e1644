use alloc::string::String;
use core::fmt;

/// Error type shared by all core modules.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Two values live on incompatible grids or have mismatched dimensions.
    DimensionMismatch { expected: String, got: String },
    /// A structural precondition on the input failed (sizes, cutoffs, ranges).
    InvalidArgument(String),
    /// Requested differentiation order exceeds the configured cap.
    DerivativeCapExceeded { order: u32, cap: u32 },
    /// Symbol-expression parse failure, with 1-based line/column.
    Parse { line: usize, col: usize, message: String },
    /// Expression evaluated to a non-finite value while building a symbol.
    NonFiniteEvaluation { freq: String, detail: String },
    /// Power iteration did not reach the requested residual; carries the
    /// best estimate found.
    NormNotConverged { estimate: f64, residual: f64, iterations: usize },
    /// Matrix is singular or too ill-conditioned to factor.
    Singular(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            CoreError::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            CoreError::DerivativeCapExceeded { order, cap } => {
                write!(f, "derivative order {order} exceeds cap {cap}")
            }
            CoreError::Parse { line, col, message } => {
                write!(f, "parse error at {line}:{col}: {message}")
            }
            CoreError::NonFiniteEvaluation { freq, detail } => {
                write!(f, "non-finite evaluation at j={freq}: {detail}")
            }
            CoreError::NormNotConverged { estimate, residual, iterations } => write!(
                f,
                "operator norm did not converge after {iterations} iterations \
                 (estimate {estimate}, residual {residual})"
            ),
            CoreError::Singular(msg) => write!(f, "singular matrix: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}

pub type CoreResult<T> = core::result::Result<T, CoreError>;
