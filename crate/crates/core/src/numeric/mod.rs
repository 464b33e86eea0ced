//! Certified high-precision evaluation: complex scalars, infinite products,
//! bilateral sums with geometric tail certificates, and lattice sums.

mod complex;
mod sum;

pub use complex::{BigComplex, MIN_PRECISION};
pub(crate) use sum::shell_points;
pub use sum::{
    eval_bilateral, eval_lattice, eval_poch_infinite, BilateralSum, Estimate, LatticeSum, RatioBound,
    TailCertificate,
};

use rug::Float;

use crate::error::{Error, Result};

/// Precision, nome and tolerance shared by one numeric evaluation.
#[derive(Clone, Debug)]
pub struct NumericContext {
    pub prec: u32,
    pub q: Float,
    /// Target accuracy of the quantities being compared.
    pub tol: f64,
}

impl NumericContext {
    pub fn new(prec: u32, q: Float, tol: f64) -> Result<Self> {
        if prec < MIN_PRECISION {
            return Err(Error::InvalidConfig(format!("precision {prec} below {MIN_PRECISION} bits")));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tolerance {tol} must be positive")));
        }
        if q <= 0 || q >= 1 {
            return Err(Error::RegionViolation(format!("q = {} outside (0, 1)", q.to_f64())));
        }
        let q = Float::with_val(prec, q);
        Ok(Self { prec, q, tol })
    }

    /// Context from a decimal or rational literal for `q`.
    pub fn parse(prec: u32, q: &str, tol: f64) -> Result<Self> {
        let prec = prec.max(MIN_PRECISION);
        let q = BigComplex::parse_real(prec, q)?;
        Self::new(prec, q.re().clone(), tol)
    }

    /// Accuracy demanded of intermediate sums and products: far below `tol`
    /// so that a residual reflects the identity, not the truncation.
    pub fn work_tol(&self) -> f64 {
        let floor = 2f64.powi(-(self.prec as i32) + 16);
        (self.tol * 1e-12).max(floor)
    }

    pub fn with_tol(&self, tol: f64) -> Self {
        Self { tol, ..self.clone() }
    }

    pub fn num(&self, x: f64) -> BigComplex {
        BigComplex::from_f64(self.prec, x, 0.0)
    }

    pub fn int(&self, n: i64) -> BigComplex {
        BigComplex::from_i64(self.prec, n)
    }

    pub fn parse_num(&self, s: &str) -> Result<BigComplex> {
        BigComplex::parse_real(self.prec, s)
    }

    pub fn zero(&self) -> BigComplex {
        BigComplex::zero(self.prec)
    }

    pub fn one(&self) -> BigComplex {
        BigComplex::one(self.prec)
    }

    pub fn q(&self) -> BigComplex {
        BigComplex::real(self.q.clone())
    }

    pub fn q_f64(&self) -> f64 {
        self.q.to_f64()
    }

    /// `q^k` for integer `k`.
    pub fn qpow(&self, k: i64) -> BigComplex {
        self.q().pow_i64(k).expect("q is nonzero")
    }

    /// `q^z` for complex `z`, principal branch of `ln q`.
    pub fn qpow_complex(&self, z: &BigComplex) -> BigComplex {
        BigComplex::real_base_pow(&self.q, z)
    }

    /// Bound on the relative rounding error of a chain of `ops` operations.
    pub fn rounding(&self, ops: u64) -> f64 {
        (ops as f64 + 4.0) * 2f64.powi(-(self.prec as i32) + 2)
    }
}
