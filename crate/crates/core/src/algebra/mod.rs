//! Exact coefficient arithmetic and truncated q-Laurent series: the formal backend.

mod gaussian;
mod laurent;
mod monomial;
mod series;
mod symbols;

pub use gaussian::GaussianRational;
pub use laurent::LaurentPoly;
pub use monomial::{Monomial, MAX_SYMBOLS};
pub use series::{Agreement, QLaurentSeries, QTerm};
pub use symbols::{Ring, SymbolTable};
