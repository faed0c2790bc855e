//! Exact computations with A-infinity algebras and modules, triangular
//! differential graded bocses and their twisted modules.
//!
//! Everything here works over `Q` or a prime field, with no floating point.
//! Structures are finite: operations are truncated at a declared arity and
//! bocses at a declared filtration level, and every identity is checked
//! exactly within those bounds.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ainfmod;
pub mod ainfty;
pub mod bocs;
pub mod check;
pub mod error;
pub mod gmodb;
pub mod graded;
pub mod linalg;
pub mod oracles;
pub mod scalar;
pub mod twisted;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
