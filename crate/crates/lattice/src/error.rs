use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported discriminant {0}")]
    UnsupportedDiscriminant(u64),
    #[error("prime {p} ramifies in the algebra of discriminant {disc}")]
    Ramified { p: u64, disc: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("maximal order saturation failed: {0}")]
    Saturation(String),
    #[error("lattice data inconsistent: {0}")]
    Inconsistent(String),
    #[error("subspace is not totally isotropic")]
    NotIsotropic,
    #[error("adjoint intertwining matrix is not integral")]
    NonIntegralAdjoint,
    #[error("class bound {0} exceeded")]
    ClassBound(usize),
    #[error("matrices do not commute")]
    NotCommuting,
    #[error("no free O-basis found")]
    NoFreeBasis,
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Core(#[from] amf_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
