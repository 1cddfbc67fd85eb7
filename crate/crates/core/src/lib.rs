//! Walk-on-spheres Dirichlet solvers driven by Monte Carlo, randomized
//! quasi-Monte Carlo and Array-RQMC point sets.

// `!(x < y)` is used on purpose to reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod hilbert;
pub mod qmc;
pub mod samplers;

pub use error::{Error, Result};
