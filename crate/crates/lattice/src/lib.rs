//! Quaternionic hermitian lattices over definite quaternion algebras, genus
//! enumeration at split primes and Hecke operators computed through Eichler
//! elements.

pub mod bench;
pub mod cache;
pub mod eigen;
pub mod error;
pub mod genus;
pub mod hecke;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod quaternion;
pub mod symplectic;

pub use error::{Error, Result};
