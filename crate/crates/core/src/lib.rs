//! Exact cluster-algebra engine for symmetric Kac-Moody Weyl group words.
//!
//! Reduced words give initial seeds whose cluster variables, dimension vectors
//! and interval labels can be mutated and cross-checked against Euler
//! characteristic generating functions and, in type A, symbolic minors.

pub mod cartan_weyl;
pub mod checks;
pub mod dimvec;
pub mod error;
pub mod interval;
pub mod laurent;
pub mod minors;
pub mod quiver_seed;
pub mod shuffle;

pub use error::{Error, ErrorKind};
