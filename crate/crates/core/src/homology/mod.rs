//! Exact sparse linear algebra and (double) complex machinery.

mod complex;
mod echelon;
mod matrix;
mod spectral;

pub use complex::{cohomology_of, CohomologyAt, ComplexPiece};
pub use echelon::{image_basis, kernel_basis, rank, rank_of, Echelon, Insert, Subspace};
pub use matrix::{axpy, collect_sparse, scale, RationalMatrix, SparseVec};
pub use spectral::{combine, DoubleComplex, SpectralPage, SpectralResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("consecutive maps out of degree {0} do not compose to zero")]
    NotAComplex(i32),
    #[error("degree {0} is outside the complex")]
    OutOfRange(i32),
    #[error("degree range too small to close the complex at degree {0}")]
    RangeTooSmall(i32),
    #[error("bidegree violation: {0}")]
    Bidegree(String),
    #[error("double complex precondition failed: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
