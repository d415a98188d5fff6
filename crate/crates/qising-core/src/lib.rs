//! Numerical tools for Ising chains with couplings modulated by the
//! Fibonacci substitution sequence.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod fractal;
pub mod leeyang;
pub mod parse;
pub mod quantum;
pub mod roots;
pub mod sequences;
pub mod sets;
pub mod tracemap;
pub mod validation;

pub use error::{Error, Result};
