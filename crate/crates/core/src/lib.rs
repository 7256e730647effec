// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod exec;
pub mod exponent;
pub mod fit;
pub mod funcs;
pub mod norms;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod solve;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
