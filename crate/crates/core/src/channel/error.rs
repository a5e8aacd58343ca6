use thiserror::Error;

use crate::matlib::MatError;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("constraint error: {0}")]
    Constraint(String),
    #[error(transparent)]
    Mat(#[from] MatError),
}
