//! Exact arithmetic in the Gaussian rationals ℚ(i).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::{Integer, Rational};

/// `re + im·i` with both parts exact rationals.
///
/// `rug::Rational` keeps fractions reduced with positive denominators, so
/// structural equality is numeric equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        Self { re: re.into(), im: im.into() }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        Self { re: re.into(), im: Rational::new() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(n)
    }

    /// `num / den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::real(Rational::from((num, den)))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_one(&self) -> bool {
        self.im.cmp0().is_eq() && self.re == 1
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: Rational::from(-&self.im) }
    }

    /// `re² + im²`.
    pub fn norm(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(Self::real(self.re.clone().recip()));
        }
        let n = self.norm();
        Some(Self {
            re: Rational::from(&self.re / &n),
            im: -Rational::from(&self.im / &n),
        })
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Option<Self> {
        let (mut base, mut e) = if e < 0 { (self.inv()?, -e) } else { (self.clone(), e) };
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }

    /// `self += a * b` without an intermediate clone of `self`.
    pub fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_real() && b.is_real() {
            self.re += Rational::from(&a.re * &b.re);
            return;
        }
        self.re += Rational::from(&a.re * &b.re) - Rational::from(&a.im * &b.im);
        self.im += Rational::from(&a.re * &b.im) + Rational::from(&a.im * &b.re);
    }

    /// Numerator/denominator pair of the real part if the value is a real integer.
    pub fn as_integer(&self) -> Option<Integer> {
        if self.is_real() && *self.re.denom() == 1 {
            Some(self.re.numer().clone())
        } else {
            None
        }
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.cmp0().is_eq(), self.im.cmp0().is_eq()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.cmp0().is_lt() {
                    write!(f, "{}-{}i", self.re, Rational::from(-&self.im))
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: Rational::from(&self.re + &rhs.re),
            im: Rational::from(&self.im + &rhs.im),
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: Rational::from(&self.re - &rhs.re),
            im: Rational::from(&self.im - &rhs.im),
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        if self.im.cmp0().is_eq() && rhs.im.cmp0().is_eq() {
            return GaussianRational::real(Rational::from(&self.re * &rhs.re));
        }
        GaussianRational {
            re: Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im),
            im: Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re),
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
        assert_eq!(i.pow(4).unwrap(), GaussianRational::one());
        assert_eq!(i.pow(-1).unwrap(), -&i);
    }

    #[test]
    fn inverse_round_trips() {
        let z = GaussianRational::new(Rational::from((3, 4)), -2);
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn fractions_stay_reduced() {
        let a = GaussianRational::ratio(2, 4);
        assert_eq!(a, GaussianRational::ratio(1, 2));
        assert_eq!(a.to_string(), "1/2");
        assert_eq!(GaussianRational::new(1, -1).to_string(), "1-1i");
    }
}
