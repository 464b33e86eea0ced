//! Checkable identity instances and their residual reports.

pub mod formal_sum;
pub mod guo_schlosser;
pub mod kronecker;
mod params;
pub mod psi11;
pub mod qbeta;
mod report;
pub mod triple;

pub use params::NumParams;
pub use report::{describe_term, Backend, ResidualReport};
