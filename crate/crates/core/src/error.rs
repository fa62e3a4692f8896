use thiserror::Error;

use crate::matgen::EigenPair;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The unscaled recurrence left the range of `f64`.
    #[error("P_{n} overflows f64; use eval_p_scaled")]
    Overflow { n: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    /// A normalization norm vanished or stopped being finite.
    #[error("iteration broke down at step {step}: normalization norm is {norm}")]
    Breakdown { step: usize, norm: f64 },

    /// Residual criterion unmet; the best iterate is attached.
    #[error("no convergence after {} iterations (residual {:e})", best.iterations, best.residual)]
    NoConvergence { best: Box<EigenPair> },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
