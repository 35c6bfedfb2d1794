use thiserror::Error;

/// Errors raised by the lattice toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, got {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("generator {index} of the denominator does not lie in the numerator span")]
    ContainmentViolated { index: usize },

    #[error("zero vector passed to {0}")]
    ZeroVector(&'static str),

    #[error("vector does not lie in the given sublattice")]
    NotInLattice,

    #[error("Gram matrix is not symmetric at ({row}, {col})")]
    AsymmetricGram { row: usize, col: usize },

    #[error("bilinear form is degenerate")]
    Degenerate,

    #[error("lattice is not even: diagonal entry {index} is odd")]
    OddLattice { index: usize },

    #[error("lattice is indefinite; vector enumeration needs a definite form")]
    Indefinite,

    #[error("target norm {0} lies on the wrong side of zero for this lattice")]
    WrongSignTarget(String),

    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,

    #[error("isometry does not have order {0}")]
    WrongOrder(usize),

    #[error("quadratic refinement is absent (source lattice was not even)")]
    QuadraticFormAbsent,

    #[error("generator row {row} is not mapped into the span by the involution")]
    NotInvariant { row: usize },

    #[error("saturated Picard lattice does not contain the pulled-back lattice; {0}")]
    MissingPullback(String),

    #[error("Picard span is degenerate")]
    DegeneratePicard,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
