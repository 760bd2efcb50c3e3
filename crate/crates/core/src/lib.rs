//! Numerical workbench for necessary and sufficient multiplier conditions of
//! Laguerre expansions on weighted Lebesgue spaces.

// `!(x > y)` comparisons are NaN guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cesaro;
pub mod differences;
pub mod error;
pub mod exec;
pub mod harness;
pub mod norms;
pub mod quadrature;
pub mod special;
pub mod transform;
mod twofold;

pub use error::{Error, Result};
pub use exec::Exec;
