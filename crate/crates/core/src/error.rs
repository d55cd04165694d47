use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan type {series}{rank}")]
    InvalidType { series: char, rank: usize },
    #[error("unknown Cartan series `{0}`")]
    UnknownSeries(String),
    #[error("enumeration bound {bound} exceeded")]
    BoundExceeded { bound: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is not in the cocharacter lattice")]
    NotInLattice,
    #[error("declared lattice does not contain the coroot lattice")]
    LatticeTooSmall,
    #[error("generator {0} out of range")]
    BadGenerator(usize),
    #[error("cannot parse word `{0}`")]
    BadWord(String),
    #[error("subgroup containment violated")]
    Containment,
    #[error("element is not minimal in its double coset")]
    NotMinimal,
    #[error("intersection is not a special subgroup")]
    NotSpecial,
    #[error("inexact polynomial division ({0})")]
    InexactDivision(String),
    #[error("non-integral merged coefficient for label {0}")]
    NonIntegral(String),
    #[error("system of Eichler elements is not triangular")]
    NotTriangular,
    #[error("no generator table row for {0}")]
    UnsupportedType(String),
}

pub type Result<T> = std::result::Result<T, Error>;
