//! Dense square matrices over `BigComplex`, the model algebra for the noncommutative sum.

use std::ops::{Add, Mul, Sub};

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::BigComplex;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    d: usize,
    e: Vec<BigComplex>,
}

impl Mat {
    pub fn zero(d: usize, prec: u32) -> Self {
        Self { d, e: vec![BigComplex::zero(prec); d * d] }
    }

    pub fn identity(d: usize, prec: u32) -> Self {
        Self::scalar(d, &BigComplex::one(prec))
    }

    pub fn scalar(d: usize, c: &BigComplex) -> Self {
        let mut m = Self::zero(d, c.prec());
        for i in 0..d {
            m.e[i * d + i] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[BigComplex]) -> Self {
        let d = entries.len();
        let mut m = Self::zero(d, entries[0].prec());
        for (i, c) in entries.iter().enumerate() {
            m.e[i * d + i] = c.clone();
        }
        m
    }

    /// Row-major entries.
    pub fn from_rows(d: usize, entries: Vec<BigComplex>) -> Self {
        assert_eq!(entries.len(), d * d);
        Self { d, e: entries }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &BigComplex {
        &self.e[i * self.d + j]
    }

    fn prec(&self) -> u32 {
        self.e[0].prec()
    }

    pub fn scale(&self, c: &BigComplex) -> Self {
        Self { d: self.d, e: self.e.iter().map(|x| x * c).collect() }
    }

    /// `1 - c·self`.
    pub fn one_minus_scaled(&self, c: &BigComplex) -> Self {
        &Self::identity(self.d, self.prec()) - &self.scale(c)
    }

    /// Frobenius norm, rounded up to `f64`; an upper bound for the operator 2-norm.
    pub fn norm(&self) -> f64 {
        let mut s = Float::new(self.prec());
        for x in &self.e {
            s += x.norm_sqr();
        }
        let r = s.sqrt().to_f64();
        r * (1.0 + 4.0 * f64::EPSILON)
    }

    pub fn is_scalar_multiple_of_identity(&self) -> bool {
        let c = self.get(0, 0);
        (0..self.d).all(|i| (0..self.d).all(|j| if i == j { self.get(i, j) == c } else { self.get(i, j).is_zero() }))
    }

    /// Gauss–Jordan with partial pivoting. Rejects inverses whose Frobenius
    /// condition number would eat more than half of the working precision.
    pub fn inverse(&self) -> Result<Mat> {
        let d = self.d;
        let prec = self.prec();
        let mut a = self.e.clone();
        let mut inv = Self::identity(d, prec).e;
        for col in 0..d {
            let piv = (col..d)
                .max_by(|&i, &j| a[i * d + col].abs().partial_cmp(&a[j * d + col].abs()).expect("finite"))
                .expect("nonempty");
            if a[piv * d + col].is_zero() {
                return Err(Error::SingularFactor("zero pivot".into()));
            }
            if piv != col {
                for k in 0..d {
                    a.swap(piv * d + k, col * d + k);
                    inv.swap(piv * d + k, col * d + k);
                }
            }
            let p = a[col * d + col].inv().expect("nonzero pivot");
            for k in 0..d {
                a[col * d + k] = &a[col * d + k] * &p;
                inv[col * d + k] = &inv[col * d + k] * &p;
            }
            for i in 0..d {
                if i == col || a[i * d + col].is_zero() {
                    continue;
                }
                let f = a[i * d + col].clone();
                for k in 0..d {
                    a[i * d + k] = &a[i * d + k] - &(&f * &a[col * d + k]);
                    inv[i * d + k] = &inv[i * d + k] - &(&f * &inv[col * d + k]);
                }
            }
        }
        let out = Mat { d, e: inv };
        let cond = self.norm() * out.norm();
        if !cond.is_finite() || cond > 2f64.powi(prec as i32 / 2) {
            return Err(Error::SingularFactor(format!("condition number {cond:e}")));
        }
        Ok(out)
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        Mat { d: self.d, e: self.e.iter().zip(&rhs.e).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        Mat { d: self.d, e: self.e.iter().zip(&rhs.e).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        let d = self.d;
        let mut out = Mat::zero(d, self.prec());
        for i in 0..d {
            for k in 0..d {
                let a = &self.e[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    out.e[i * d + j] = &out.e[i * d + j] + &(a * &rhs.e[k * d + j]);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[f64]) -> Mat {
        let d = (rows.len() as f64).sqrt() as usize;
        Mat::from_rows(d, rows.iter().map(|&x| BigComplex::from_f64(128, x, 0.0)).collect())
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[2.0, 1.0, 0.5, 3.0]);
        let p = &a * &a.inverse().unwrap();
        assert!((&p - &Mat::identity(2, 128)).norm() < 1e-30);
    }

    #[test]
    fn singular_is_rejected() {
        assert!(matches!(m(&[1.0, 2.0, 2.0, 4.0]).inverse(), Err(Error::SingularFactor(_))));
    }
}
