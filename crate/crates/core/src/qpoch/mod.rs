//! q-shifted factorials, theta, q-gamma and the Jackson integral.

pub mod formal;
pub mod numeric;

pub use formal::{poch_finite, poch_infinite, theta, theta_product, PochProduct};
