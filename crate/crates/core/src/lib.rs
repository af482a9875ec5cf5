//! Randomized decoding of linearized Reed–Solomon (LRS) codes beyond the
//! unique decoding radius, with exact success-probability and work-factor
//! analysis.

pub mod analysis;
pub mod code;
pub mod counting;
pub mod decoder;
pub mod error;
pub mod field;
pub mod format;
pub mod lp;
pub mod matrix;
pub mod skew;
pub mod sum_rank;

pub use error::{Error, Result};
