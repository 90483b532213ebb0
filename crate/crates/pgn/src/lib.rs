//! Exact n-systems, their exponent sets, and the six-exponent spectrum in dimension 3.

pub mod arith;
pub mod error;

pub use arith::{Point, Rational};
pub use error::{Error, Result};
pub mod canvas;
pub mod chains;
pub mod deform;
pub mod exponents;
pub mod nsystem;
pub mod plot;
pub mod power;
pub mod random;
pub mod spectrum;

pub use canvas::Canvas;
pub use nsystem::NSystem;
