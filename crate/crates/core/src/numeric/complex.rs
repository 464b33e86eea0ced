//! Arbitrary-precision complex scalars over MPFR floats.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::{Float, Rational};

use crate::algebra::GaussianRational;
use crate::error::{Error, Result};

/// Smallest precision accepted anywhere in the numeric backend.
pub const MIN_PRECISION: u32 = 64;

/// `re + im·i`, both parts at the same binary precision, rounded to nearest.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    re: Float,
    im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self::real(Float::with_val(prec, 1))
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_i64(prec: u32, n: i64) -> Self {
        Self::real(Float::with_val(prec, n))
    }

    pub fn from_rational(prec: u32, r: &Rational) -> Self {
        Self::real(Float::with_val(prec, r))
    }

    pub fn from_gaussian(prec: u32, g: &GaussianRational) -> Self {
        Self { re: Float::with_val(prec, g.re()), im: Float::with_val(prec, g.im()) }
    }

    /// Parse a decimal or rational literal such as `0.3`, `-1/3` or `2.5e-2`.
    pub fn parse_real(prec: u32, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let r: Rational = format!("{}/{}", n.trim(), d.trim())
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("not a number: `{s}`")))?;
            return Ok(Self::from_rational(prec, &r));
        }
        let f = Float::parse(s).map_err(|_| Error::InvalidConfig(format!("not a number: `{s}`")))?;
        Ok(Self::real(Float::with_val(prec, f)))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// Modulus rounded up to `f64`, for error bookkeeping.
    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64_round(Round::Up)
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), self.re.square_ref()) + Float::with_val(self.prec(), self.im.square_ref())
    }

    pub fn scale(&self, f: &Float) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re * f), im: Float::with_val(p, &self.im * f) }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        let p = self.prec();
        Some(Self { re: Float::with_val(p, &self.re / &n), im: -Float::with_val(p, &self.im / &n) })
    }

    /// `self / rhs`; `None` on an exactly zero divisor.
    pub fn div(&self, rhs: &Self) -> Option<Self> {
        Some(self * &rhs.inv()?)
    }

    pub fn pow_i64(&self, e: i64) -> Option<Self> {
        let (mut base, mut e) = if e < 0 { (self.inv()?, e.unsigned_abs()) } else { (self.clone(), e as u64) };
        let mut acc = Self::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self { re: Float::with_val(p, &r * &c), im: Float::with_val(p, &r * &s) }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let arg = self.im.clone().atan2(&self.re);
        Some(Self { re: self.abs().ln(), im: arg })
    }

    /// `base^self` for a positive real base, as `exp(self·ln base)`.
    pub fn real_base_pow(base: &Float, exponent: &Self) -> Self {
        let l = base.clone().ln();
        exponent.scale(&l).exp()
    }

    /// Principal power `self^e`, `e` complex; `0^e` is `0` for `Re e > 0`.
    pub fn powc(&self, e: &Self) -> Option<Self> {
        if self.is_zero() {
            return (e.re.is_sign_positive() && !e.re.is_zero()).then(|| Self::zero(self.prec()));
        }
        Some((e * &self.ln()?).exp())
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        Self { re: Float::with_val(self.prec(), 1 - &self.re), im: -self.im.clone() }
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal rendering with `digits` significant digits per part.
    pub fn to_decimal(&self, digits: usize) -> String {
        let fmt = |f: &Float| {
            if f.is_zero() {
                "0".to_owned()
            } else {
                f.to_string_radix(10, Some(digits))
            }
        };
        if self.im.is_zero() {
            fmt(&self.re)
        } else if self.im.is_sign_negative() {
            format!("{}-{}i", fmt(&self.re), fmt(&Float::with_val(self.prec(), -&self.im)))
        } else {
            format!("{}+{}i", fmt(&self.re), fmt(&self.im))
        }
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: Self) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re + &rhs.re), im: Float::with_val(p, &self.im + &rhs.im) }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: Self) -> BigComplex {
        let p = self.prec();
        BigComplex { re: Float::with_val(p, &self.re - &rhs.re), im: Float::with_val(p, &self.im - &rhs.im) }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: Self) -> BigComplex {
        let p = self.prec();
        if self.im.is_zero() && rhs.im.is_zero() {
            return BigComplex::real(Float::with_val(p, &self.re * &rhs.re));
        }
        let re = Float::with_val(p, &self.re * &rhs.re) - Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im) + Float::with_val(p, &self.im * &rhs.re);
        BigComplex { re, im }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: Self) -> BigComplex {
        &self + &rhs
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: Self) -> BigComplex {
        &self - &rhs
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: Self) -> BigComplex {
        &self * &rhs
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let z = BigComplex::from_f64(128, 0.5, -2.0);
        let w = z.inv().unwrap();
        let one = &z * &w;
        assert!((&one - &BigComplex::one(128)).abs_f64() < 1e-35);
        assert_eq!(z.pow_i64(-2).unwrap().to_decimal(10), (&w * &w).to_decimal(10));
    }

    #[test]
    fn exp_ln_round_trip() {
        let z = BigComplex::from_f64(256, -0.3, 1.1);
        let back = z.ln().unwrap().exp();
        assert!((&back - &z).abs_f64() < 1e-70);
    }

    #[test]
    fn real_base_power_matches_integer_power() {
        let q = Float::with_val(256, 0.3);
        let e = BigComplex::from_i64(256, 3);
        let p = BigComplex::real_base_pow(&q, &e);
        let direct = BigComplex::real(q).pow_i64(3).unwrap();
        assert!((&p - &direct).abs_f64() < 1e-70);
    }

    #[test]
    fn parses_decimals_and_fractions() {
        let a = BigComplex::parse_real(256, "1/3").unwrap();
        let b = BigComplex::parse_real(256, "0.25").unwrap();
        assert!((a.re().to_f64() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(b.re().to_f64(), 0.25);
        assert!(BigComplex::parse_real(256, "x").is_err());
    }
}
