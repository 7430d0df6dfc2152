//! N-th coefficients of algebraic power series over prime fields.
//!
//! Given `E(x, y)` with `E(0, 0) = 0` and `E_y(0, 0) != 0`, the unique root
//! `f` in `F_p[[x]]` has coefficients computable in `O(log N)` operations for
//! fixed `E` and `p`. Three routes are provided: a Mahler-equation pipeline
//! ([`mahler`]), a diagonal representation ([`diagonal`]) and the same with
//! partial powering ([`partialpow`]), plus series-expansion baselines
//! ([`oracle`]).

pub mod arith;
pub mod diagonal;
pub mod error;
pub mod instance;
pub mod mahler;
pub mod ops;
pub mod oracle;
pub mod partialpow;

pub use error::{Error, Result};
