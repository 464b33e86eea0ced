//! Verification kernel for bilateral q-series identities: an exact truncated
//! series backend, a certified multiprecision backend, and the identity corpus.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod ncalg;
pub mod number_theory;
pub mod numeric;
pub mod qpoch;
pub mod roots;
pub mod suite;

pub use error::{Error, Result};
