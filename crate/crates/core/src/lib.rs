//! Compressive sensing of low multilinear-rank tensors with a direct,
//! non-iterative reconstruction formula.
//!
//! A signal `X` is sensed along each mode by a matrix `Φ_n`. From the
//! multi-way measurements the signal is rebuilt in closed form with
//! truncated pseudo-inverses; see [`reconstruction::reconstruct`].

// `!(x >= 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod io;
pub mod linalg;
pub mod reconstruction;
pub mod rng;
pub mod sensing;
pub mod tensor;
pub mod tucker;

pub use error::{Error, Result};
pub use tensor::{DenseTensor, Matrix};
