// `!(x > 0.0)` is the intended NaN-rejecting form throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod inference;
pub mod models;
pub mod mvdist;
pub mod simulation;

pub use error::{Error, Result};
