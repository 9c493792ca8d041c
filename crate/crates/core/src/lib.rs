//! Berkovich skeleta of curves given as cyclic covers z^n = f(x) of the projective line or as
//! degree-three covers z^3 + p(x) z + q(x) = 0, computed through separating trees, Laplacians
//! of graph divisors and covering data.

pub mod cli;
pub mod error;
pub mod graph;
pub mod kummer;
pub mod septree;
pub mod s3cover;
pub mod valfield;

pub use error::{Error, ErrorClass, Result};
