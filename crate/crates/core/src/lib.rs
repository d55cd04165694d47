//! Exact Weyl-group, coset and Iwahori-Hecke combinatorics for split reductive groups.

pub mod affine;
pub mod cosets;
pub mod error;
pub mod hecke;
pub mod poly;
pub mod roots;

pub use affine::{AffineWeylElement, AffineWeylGroup, LatticeMode, OmegaGroup, ReducedWord};
pub use cosets::{ExtendedSpecialSubgroup, SpecialSubgroup};
pub use error::{Error, Result};
pub use hecke::{HeckeElement, HeckeTerm};
pub use poly::QPolynomial;
pub use roots::{finite_weyl_group, CartanType, FiniteWeylElement, RootDatum, Series};
