pub mod classical;
pub mod equivariant;
pub mod error;
pub mod homology;
pub mod lie;
pub mod rational;
pub mod report;
pub mod suites;
pub mod vertex;
pub mod weil;

pub use error::{Error, Result};
