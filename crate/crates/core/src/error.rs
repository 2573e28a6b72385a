use crate::homology::HomologyError;
use crate::lie::LieError;
use crate::vertex::VertexError;

/// Errors surfaced by the Weil and equivariant layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Vertex(#[from] VertexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("bad input: {0}")]
    Input(String),
    #[error("{0} requires an abelian Lie algebra")]
    NonAbelian(&'static str),
    #[error("representation is not a Lie algebra homomorphism at ({0}, {1})")]
    NotHomomorphism(String, String),
    #[error("representative is not {0} in the target complex")]
    NotACocycle(&'static str),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
