//! Exact heights, Weil functions, staircase auxiliary polynomials and
//! inequality-chain certificates on P1 x P1 over the rationals.

pub mod arith;
pub mod auxpoly;
pub mod bifactor;
pub mod blowup;
pub mod error;
pub mod factor;
pub mod field;
pub mod heights;
pub mod indexcheck;
pub mod interval;
pub mod lattice;
pub mod linalg;
pub mod numbers;
pub mod serde_util;
pub mod upoly;

pub use error::{Error, Result};
pub use interval::{Interval, Real};

/// Interval with `f64` endpoints, used throughout the pipeline.
pub type Iv = Interval<f64>;
/// Interval with `f32` endpoints.
pub type Iv32 = Interval<f32>;
