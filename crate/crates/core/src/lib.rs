//! Exact Stasheff associahedra as cubic complexes, and the coherence checks
//! for concatenation of smooth paths in `R^d` that they parameterize.
//!
//! The crate is `no_std` (it needs `alloc`). Geometry is exact rational
//! arithmetic throughout; floating point only enters when paths are
//! evaluated.
//!
//! - [`geometry`]: rational vectors, affine subspaces, exact convex membership.
//! - [`cubic`]: cubic sets built from points by joins and products, their
//!   faces, cubic complexes and cubic maps.
//! - [`assoc`]: the polytopes `K_n`, face and degeneracy operators, and the
//!   recursive complex `K(n)`.
//! - [`paths`]: stationary smooth paths, the bump function and
//!   finite-difference probes.
//! - [`engine`]: concatenation weights, the cone maps into them and the
//!   A-infinity condition checks.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assoc;
pub mod cubic;
pub mod engine;
mod error;
pub mod geometry;
pub mod paths;

pub use error::{Error, Result};
