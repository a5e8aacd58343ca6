use thiserror::Error;

use crate::channel::ChannelError;
use crate::matlib::MatError;

#[derive(Debug, Error)]
pub enum RegimeError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("instance is not one-sided: H3 has a nonzero entry")]
    NotZic,
    #[error("offset is not in the admissible set: scaled residual {residual:.3e}")]
    BadOffset { residual: f64 },
    #[error("alignment equations are unsolvable with this offset (residual {residual:.3e}); the direct matrix is rank-deficient in the needed directions")]
    NotLeftInvertible { residual: f64 },
    #[error("fixed point did not converge after {iters} iterations (residual {residual:.3e})")]
    NoConvergence { iters: usize, residual: f64 },
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}
