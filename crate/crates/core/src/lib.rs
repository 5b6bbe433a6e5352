//! Exact combinatorics and linear algebra around the spinor variety `OG(n,2n)+`.
//!
//! The crate is organized in four layers:
//!
//! - [`weyl`]: type `D_n` root systems and Weyl groups as signed permutations,
//!   used as the brute-force oracle for everything Lie-theoretic.
//! - [`bsword`]: the explicit reduced word for the longest minimal coset
//!   representative, its inversion roots, the pairing matrix and the quiver
//!   with heights, plus DOT export.
//! - [`cycles`]: divisor and 1-cycle class arithmetic on the Bott-Samelson
//!   tower: relative tangent classes, the anticanonical class, dimension
//!   bounds, class enumeration and the extremal class, stratum counts.
//! - [`isotropic`]: exact linear algebra in a split quadratic space over the
//!   rationals or a prime field: the skew chart for maximal isotropic
//!   subspaces, subspace lattice operations, flag construction, rank census.

pub mod bsword;
pub mod cycles;
pub mod field;
pub mod isotropic;
pub mod linalg;
pub mod weyl;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use bsword::{build_quiver, spinor_word, PairingMatrix, Quiver, SpinorWord};
pub use cycles::{DivisorClass, OneCycleClass};
pub use field::{Field, Scalar};
pub use isotropic::{CompleteFlag, HyperbolicSpace, SkewChart, Subspace};
pub use weyl::{ParabolicDatum, RootVector, WeylElement};
