//! Exact computations with twisted loop algebras over cyclotomic fields.

// Index loops are the clearest notation for the matrix code here.
#![allow(clippy::needless_range_loop)]

pub mod affine;
pub mod algebra;
pub mod classify;
pub mod cyclo;
pub mod descent;
pub mod error;
pub mod lie;
pub mod suite;
pub mod linalg;

pub use cyclo::CycloNum;
pub use error::{Error, Result};
