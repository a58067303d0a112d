//! Exact rational scalars, sparse matrices, tensors and elimination.

mod dense;
mod elim;
mod poly;
mod rational;
mod sparse;
mod tensor;

pub use dense::{inverse, nullspace, rank as dense_rank, rref, solve};
pub use elim::{Echelon, ReducedBasis};
pub use poly::{charpoly, rational_roots};
pub use rational::{as_count, fmt_q, one, parse_q, q, qi, zero, ParseRationalError, Q};
pub use sparse::SparseMatrix;
pub use tensor::Tensor;

pub const DEFAULT_MAX_TOTAL_DIMENSION: usize = 1 << 20;

/// Environment variable overriding [`DEFAULT_MAX_TOTAL_DIMENSION`].
pub const MAX_DIM_ENV: &str = "KITAEV_MAX_DIM";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("total dimension {requested} exceeds the guard limit {limit}")]
    DimensionGuardExceeded { requested: usize, limit: usize },
}

/// Guard limit from the environment, falling back to the default.
pub fn max_total_dimension() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_TOTAL_DIMENSION)
}

/// Product of `dims`, failing if it overflows or exceeds `limit`.
pub fn guarded_product(dims: &[usize], limit: usize) -> Result<usize, LinalgError> {
    let mut total: usize = 1;
    for &d in dims {
        total = total.checked_mul(d).filter(|&t| t <= limit).ok_or(
            LinalgError::DimensionGuardExceeded {
                requested: dims.iter().fold(1usize, |a, &b| a.saturating_mul(b)),
                limit,
            },
        )?;
    }
    Ok(total)
}
