use thiserror::Error;

/// Errors raised by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("not an order-0 value: contains a thick delta of order {order}")]
    NegativeOrderDelta { order: i32 },
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

pub(crate) fn check_axis(axis: usize, dim: usize) -> Result<()> {
    if (1..=dim).contains(&axis) {
        Ok(())
    } else {
        Err(Error::AxisOutOfRange { axis, dim })
    }
}
