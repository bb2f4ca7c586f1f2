//! Ideal counting, divisor and sum-of-divisor functions over number fields,
//! with exact Dirichlet-series algebra and asymptotic main-term checks.

pub mod arith;
pub mod asym;
pub mod error;
pub mod ffpoly;
pub mod numfield;
pub mod primes;
pub mod series;
pub mod zpoly;

pub use error::{Error, Result};
