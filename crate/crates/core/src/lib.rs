// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chessboard;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod fatou;
pub mod germ;
pub mod horn;
pub mod hyperbolic;
pub mod maps;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
