//! Formal q-shifted factorials as exact truncated series.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{GaussianRational, QLaurentSeries, QTerm, Ring};
use crate::error::{Error, Result};

/// A product of a prefactor term, binomials `(1 - t)^{±1}` and infinite
/// Pochhammer symbols `(t)_∞^{±1}`, all with monomial arguments.
///
/// Keeping the factors symbolic lets a bilateral driver read off the exact
/// q-valuation of a summand without expanding it, and lets identical
/// numerator and denominator factors cancel before any normalisation.
#[derive(Clone, Debug)]
pub struct PochProduct {
    prefactor: QTerm,
    num: Vec<QTerm>,
    den: Vec<QTerm>,
    num_inf: Vec<QTerm>,
    den_inf: Vec<QTerm>,
}

/// Binomials rewritten so every factor has valuation zero.
struct Normalised {
    prefactor: QTerm,
    /// `(1 - t)` with `t.qpow >= 0` (a non-scalar `t` only at `qpow == 0`).
    num: Vec<QTerm>,
    /// `(1 - t)^{-1}` with `t.qpow > 0`.
    den: Vec<QTerm>,
    /// Infinite products whose arguments have positive q-order.
    num_inf: Vec<QTerm>,
    den_inf: Vec<QTerm>,
}

impl Default for PochProduct {
    fn default() -> Self {
        Self::one()
    }
}

impl PochProduct {
    pub fn one() -> Self {
        Self::from_term(QTerm::one())
    }

    pub fn from_term(t: QTerm) -> Self {
        Self { prefactor: t, num: Vec::new(), den: Vec::new(), num_inf: Vec::new(), den_inf: Vec::new() }
    }

    pub fn times(mut self, t: &QTerm) -> Self {
        self.prefactor = self.prefactor.mul(t);
        self
    }

    pub fn divide(mut self, t: &QTerm) -> Result<Self> {
        self.prefactor = self.prefactor.div(t)?;
        Ok(self)
    }

    /// Multiply by `(1 - t)`.
    pub fn one_minus(mut self, t: &QTerm) -> Self {
        self.num.push(t.clone());
        self
    }

    /// Divide by `(1 - t)`.
    pub fn over_one_minus(mut self, t: &QTerm) -> Self {
        self.den.push(t.clone());
        self
    }

    /// Multiply by `(x)_n` for any integer `n`.
    pub fn poch(mut self, x: &QTerm, n: i64) -> Self {
        if n >= 0 {
            self.num.extend((0..n).map(|j| x.shift(j)));
        } else {
            self.den.extend((1..=-n).map(|j| x.shift(-j)));
        }
        self
    }

    /// Divide by `(x)_n`.
    pub fn over_poch(mut self, x: &QTerm, n: i64) -> Self {
        if n >= 0 {
            self.den.extend((0..n).map(|j| x.shift(j)));
        } else {
            self.num.extend((1..=-n).map(|j| x.shift(-j)));
        }
        self
    }

    /// Multiply by `(x)_∞`.
    pub fn inf(mut self, x: &QTerm) -> Self {
        self.num_inf.push(x.clone());
        self
    }

    /// Divide by `(x)_∞`.
    pub fn over_inf(mut self, x: &QTerm) -> Self {
        self.den_inf.push(x.clone());
        self
    }

    /// Multiply two products.
    pub fn mul(mut self, other: &PochProduct) -> Self {
        self.prefactor = self.prefactor.mul(&other.prefactor);
        self.num.extend(other.num.iter().cloned());
        self.den.extend(other.den.iter().cloned());
        self.num_inf.extend(other.num_inf.iter().cloned());
        self.den_inf.extend(other.den_inf.iter().cloned());
        self
    }

    fn normalise(&self) -> Result<Option<Normalised>> {
        let (num_inf, den_inf) = cancel(&self.num_inf, &self.den_inf);
        let mut num = Vec::new();
        let mut den = Vec::new();
        let mut out_num_inf = Vec::new();
        let mut out_den_inf = Vec::new();
        // split off the factors of (t)_∞ with non-positive q-order
        for (src, fin, inf) in [(&num_inf, &mut num, &mut out_num_inf), (&den_inf, &mut den, &mut out_den_inf)] {
            for t in src {
                if t.is_zero() {
                    continue;
                }
                if t.qpow >= 1 {
                    inf.push(t.clone());
                } else {
                    let k = 1 - t.qpow;
                    fin.extend((0..k).map(|j| t.shift(j)));
                    inf.push(t.shift(k));
                }
            }
        }
        num.extend(self.num.iter().cloned());
        den.extend(self.den.iter().cloned());
        let (num, den) = cancel(&num, &den);

        let mut prefactor = self.prefactor.clone();
        if prefactor.is_zero() {
            return Ok(None);
        }
        let mut out_num = Vec::new();
        let mut out_den = Vec::new();
        for t in num.iter().filter(|t| !t.is_zero()) {
            match t.qpow {
                k if k > 0 => out_num.push(t.clone()),
                k if k < 0 => {
                    prefactor = prefactor.mul(&t.neg());
                    out_num.push(t.inv()?);
                }
                _ if t.mono.is_one() => {
                    let c = &GaussianRational::one() - &t.coeff;
                    if c.is_zero() {
                        return Ok(None);
                    }
                    prefactor = prefactor.mul(&QTerm::scalar(c));
                }
                _ => out_num.push(t.clone()),
            }
        }
        for t in den.iter().filter(|t| !t.is_zero()) {
            match t.qpow {
                k if k > 0 => out_den.push(t.clone()),
                k if k < 0 => {
                    prefactor = prefactor.div(&t.neg())?;
                    out_den.push(t.inv()?);
                }
                _ if t.mono.is_one() => {
                    let c = &GaussianRational::one() - &t.coeff;
                    let inv = c.inv().ok_or_else(|| Error::ZeroDivisor(format!("(1 - {})", t.coeff)))?;
                    prefactor = prefactor.mul(&QTerm::scalar(inv));
                }
                _ => {
                    return Err(Error::NonInvertibleLeadingCoefficient(format!(
                        "1 - ({})·{:?} in a denominator",
                        t.coeff, t.mono
                    )))
                }
            }
        }
        Ok(Some(Normalised { prefactor, num: out_num, den: out_den, num_inf: out_num_inf, den_inf: out_den_inf }))
    }

    /// Exact q-valuation of the product, `None` when it is identically zero.
    pub fn valuation(&self) -> Result<Option<i64>> {
        Ok(self.normalise()?.map(|n| n.prefactor.qpow))
    }

    /// Expand to absolute truncation order `order`.
    pub fn expand(&self, ring: &Arc<Ring>, order: i64) -> Result<QLaurentSeries> {
        let Some(n) = self.normalise()? else {
            return Ok(QLaurentSeries::zero(ring, order));
        };
        let rel = order - n.prefactor.qpow;
        if rel <= 0 {
            return Ok(QLaurentSeries::zero(ring, order));
        }
        let mut s = QLaurentSeries::one(ring, rel);
        for t in n.num.iter().filter(|t| t.qpow < rel) {
            s = s.mul_one_minus(t)?;
        }
        for t in &n.num_inf {
            let mut j = 0;
            while t.qpow + j < rel {
                s = s.mul_one_minus(&t.shift(j))?;
                j += 1;
            }
        }
        for t in n.den.iter().filter(|t| t.qpow < rel) {
            s = s.div_one_minus(t)?;
        }
        for t in &n.den_inf {
            let mut j = 0;
            while t.qpow + j < rel {
                s = s.div_one_minus(&t.shift(j))?;
                j += 1;
            }
        }
        s.mul_term(&n.prefactor)
    }
}

/// Remove common entries of two multisets.
fn cancel(a: &[QTerm], b: &[QTerm]) -> (Vec<QTerm>, Vec<QTerm>) {
    let mut counts: HashMap<&QTerm, i64> = HashMap::new();
    for t in a {
        *counts.entry(t).or_default() += 1;
    }
    let mut rest_b = Vec::new();
    for t in b {
        match counts.get_mut(t) {
            Some(c) if *c > 0 => *c -= 1,
            _ => rest_b.push(t.clone()),
        }
    }
    let mut rest_a = Vec::new();
    for t in a {
        if let Some(c) = counts.get_mut(t) {
            if *c > 0 {
                *c -= 1;
                rest_a.push(t.clone());
            }
        }
    }
    (rest_a, rest_b)
}

/// `(x)_n` as a series; a vanishing factor of a negative-index product is
/// reported as `ZeroDivisor`.
pub fn poch_finite(ring: &Arc<Ring>, x: &QTerm, n: i64, order: i64) -> Result<QLaurentSeries> {
    PochProduct::one().poch(x, n).expand(ring, order)
}

/// `(x)_∞` for an argument of q-order at least zero.
pub fn poch_infinite(ring: &Arc<Ring>, x: &QTerm, order: i64) -> Result<QLaurentSeries> {
    if !x.is_zero() && x.qpow < 0 {
        return Err(Error::NonPositiveQOrder);
    }
    PochProduct::one().inf(x).expand(ring, order)
}

/// `θ(z) = (z)_∞ (q/z)_∞ (q)_∞`.
pub fn theta(ring: &Arc<Ring>, z: &QTerm, order: i64) -> Result<QLaurentSeries> {
    theta_product(z)?.expand(ring, order)
}

pub fn theta_product(z: &QTerm) -> Result<PochProduct> {
    let qz = QTerm::q_power(1).div(z)?;
    Ok(PochProduct::one().inf(z).inf(&qz).inf(&QTerm::q_power(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{LaurentPoly, Monomial, SymbolTable};

    fn ring() -> Arc<Ring> {
        Ring::new(SymbolTable::new(&["alpha"]).unwrap(), 20)
    }

    fn ints(s: &QLaurentSeries, upto: i64) -> Vec<i64> {
        (0..upto)
            .map(|e| {
                let c = s.coeff(e);
                if c.is_zero() {
                    0
                } else {
                    c.as_scalar().unwrap().as_integer().unwrap().to_i64().unwrap()
                }
            })
            .collect()
    }

    #[test]
    fn empty_product() {
        let r = ring();
        let p = poch_finite(&r, &QTerm::symbol(0, 0), 0, 5).unwrap();
        assert!(p.agree_to_order(&QLaurentSeries::one(&r, 5), 5).unwrap().equal);
    }

    #[test]
    fn q_poch_minus_one_is_a_pole() {
        let r = ring();
        assert!(matches!(poch_finite(&r, &QTerm::q_power(1), -1, 5), Err(Error::ZeroDivisor(_))));
        // and its reciprocal vanishes
        let recip = PochProduct::one().over_poch(&QTerm::q_power(1), -1);
        assert_eq!(recip.valuation().unwrap(), None);
    }

    #[test]
    fn alpha_poch_two() {
        let r = ring();
        let p = poch_finite(&r, &QTerm::symbol(0, 0), 2, 4).unwrap();
        let a = LaurentPoly::var(0);
        let one = LaurentPoly::one();
        assert_eq!(p.coeff(0), &one - &a);
        assert_eq!(p.coeff(1), &(&a * &a) - &a);
        assert!(p.coeff(2).is_zero());
    }

    #[test]
    fn euler_function_prefix() {
        let r = ring();
        let p = poch_infinite(&r, &QTerm::q_power(1), 13).unwrap();
        assert_eq!(ints(&p, 13), vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]);
        let z = poch_infinite(&r, &QTerm::scalar(GaussianRational::zero()), 5).unwrap();
        assert!(z.agree_to_order(&QLaurentSeries::one(&r, 5), 5).unwrap().equal);
        let short = poch_infinite(&r, &QTerm::symbol(0, 1), 2).unwrap();
        assert_eq!(short.coeff(1), -&LaurentPoly::var(0));
        assert!(matches!(poch_infinite(&r, &QTerm::symbol(0, -1), 5), Err(Error::NonPositiveQOrder)));
    }

    #[test]
    fn theta_at_one_vanishes() {
        let r = ring();
        assert!(theta(&r, &QTerm::one(), 10).unwrap().is_zero());
    }

    #[test]
    fn negative_order_infinite_product_splits() {
        // (alpha q^-1)_∞ = (1 - alpha q^-1)(1 - alpha)(alpha q)_∞
        let r = ring();
        let a = QTerm::symbol(0, -1);
        let split = PochProduct::one().inf(&a).expand(&r, 8).unwrap();
        let manual = PochProduct::one().one_minus(&a).one_minus(&a.shift(1)).inf(&a.shift(2)).expand(&r, 8).unwrap();
        assert_eq!(split.floor(), -1);
        assert!(split.agree_to_order(&manual, 8).unwrap().equal);
    }

    #[test]
    fn identical_factors_cancel_before_normalising() {
        let r = ring();
        let x = QTerm::new(1.into(), Monomial::var(0, -1), 0);
        let p = PochProduct::one().inf(&x).over_inf(&x);
        assert!(p.expand(&r, 6).unwrap().agree_to_order(&QLaurentSeries::one(&r, 6), 6).unwrap().equal);
        assert!(matches!(
            PochProduct::one().over_inf(&x).expand(&r, 6),
            Err(Error::NonInvertibleLeadingCoefficient(_))
        ));
    }
}
