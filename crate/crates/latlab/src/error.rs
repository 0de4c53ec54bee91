use thiserror::Error;

/// Errors produced by lattice and matrix operations.
///
/// `Internal` is reserved for violated mathematical invariants: reaching it
/// means a bug in this crate, never bad user input. Everything else reports
/// a problem with the operands.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("gram matrix is not symmetric")]
    NotSymmetric,

    #[error("gram matrix is singular; lattice would be degenerate")]
    Degenerate,

    #[error("gram matrix has odd diagonal entry at index {0}; lattice must be even")]
    OddDiagonal(usize),

    #[error("zero vector has no divisibility")]
    ZeroVector,

    #[error("basis rows are linearly dependent")]
    DependentBasis,

    #[error("sublattice is not primitive (saturate it first)")]
    NotPrimitive,

    #[error("sublattice is degenerate: induced form is singular")]
    DegenerateSublattice,

    #[error("inner lattice is not contained in the outer lattice")]
    NotContained,

    #[error("sublattices live in different ambient lattices")]
    AmbientMismatch,

    #[error("ambient lattice is not unimodular")]
    NotUnimodular,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("glue map is not an anti-isometric group isomorphism: {0}")]
    BadGlue(String),

    #[error("mukai vector is not primitive")]
    ImprimitiveVector,

    #[error("mukai vector is not effective: {0}")]
    IneffectiveVector(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("random generation failed after bounded retries: {0}")]
    Generation(String),

    #[error("internal invariant violated (this is a bug): {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that indicate a bug in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
