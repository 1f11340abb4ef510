// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cxmath;
pub mod error;
pub mod field;
pub mod linalg;
pub mod models;
pub mod propagate;
pub mod quad;
pub mod series;
pub mod verify;

pub use error::{Error, Result};

/// Fixed 17-significant-digit scientific notation; parses back to the same `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}
