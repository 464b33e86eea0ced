//! Truncated Laurent series in `q` with Laurent-polynomial coefficients.
//!
//! A series stores the coefficients of `q^e` for `floor <= e < order`
//! densely. Everything from `order` upward is unknown. The stored floor is
//! always the valuation: the first stored coefficient is nonzero, and the
//! zero series has `floor == order`.

use std::fmt;
use std::sync::Arc;

use super::{GaussianRational, LaurentPoly, Monomial, Ring};
use crate::error::{Error, Result};

/// A scalar times a Laurent monomial times a power of `q`: the shape of every
/// formal parameter value and of every Pochhammer argument in the corpus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QTerm {
    pub coeff: GaussianRational,
    pub mono: Monomial,
    pub qpow: i64,
}

impl QTerm {
    pub fn new(coeff: GaussianRational, mono: Monomial, qpow: i64) -> Self {
        Self { coeff, mono, qpow }
    }

    pub fn one() -> Self {
        Self::scalar(GaussianRational::one())
    }

    pub fn scalar(c: GaussianRational) -> Self {
        Self::new(c, Monomial::ONE, 0)
    }

    pub fn q_power(k: i64) -> Self {
        Self::new(GaussianRational::one(), Monomial::ONE, k)
    }

    /// The bare symbol with index `i` times `q^k`.
    pub fn symbol(i: usize, k: i64) -> Self {
        Self::new(GaussianRational::one(), Monomial::var(i, 1), k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.mono.is_one() && self.qpow == 0
    }

    pub fn mul(&self, other: &QTerm) -> QTerm {
        QTerm::new(&self.coeff * &other.coeff, self.mono * other.mono, self.qpow + other.qpow)
    }

    pub fn inv(&self) -> Result<QTerm> {
        let c = self.coeff.inv().ok_or_else(|| Error::ZeroDivisor("zero parameter".into()))?;
        Ok(QTerm::new(c, self.mono.inverse(), -self.qpow))
    }

    pub fn div(&self, other: &QTerm) -> Result<QTerm> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<QTerm> {
        let c = self.coeff.pow(k).ok_or_else(|| Error::ZeroDivisor("zero to a negative power".into()))?;
        Ok(QTerm::new(c, self.mono.pow(k), self.qpow * k))
    }

    pub fn neg(&self) -> QTerm {
        QTerm::new(-&self.coeff, self.mono, self.qpow)
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> QTerm {
        QTerm::new(self.coeff.clone(), self.mono, self.qpow + k)
    }
}

#[derive(Clone)]
pub struct QLaurentSeries {
    ring: Arc<Ring>,
    floor: i64,
    order: i64,
    coeffs: Vec<LaurentPoly>,
}

impl QLaurentSeries {
    /// Build from dense coefficients starting at `q^floor`, normalising the floor.
    pub fn from_coeffs(ring: &Arc<Ring>, floor: i64, order: i64, coeffs: Vec<LaurentPoly>) -> Result<Self> {
        let mut s = Self { ring: ring.clone(), floor, order, coeffs };
        s.coeffs.resize((order - floor).max(0) as usize, LaurentPoly::zero());
        s.normalise();
        if !s.is_zero() {
            ring.check_floor(s.floor)?;
        }
        Ok(s)
    }

    pub fn zero(ring: &Arc<Ring>, order: i64) -> Self {
        Self { ring: ring.clone(), floor: order, order, coeffs: Vec::new() }
    }

    pub fn one(ring: &Arc<Ring>, order: i64) -> Self {
        Self::from_poly(ring, LaurentPoly::one(), order)
    }

    /// A q-constant series.
    pub fn from_poly(ring: &Arc<Ring>, p: LaurentPoly, order: i64) -> Self {
        if order <= 0 || p.is_zero() {
            return Self::zero(ring, order);
        }
        let mut coeffs = vec![LaurentPoly::zero(); order as usize];
        coeffs[0] = p;
        Self { ring: ring.clone(), floor: 0, order, coeffs }
    }

    pub fn from_term(ring: &Arc<Ring>, t: &QTerm, order: i64) -> Result<Self> {
        if t.is_zero() || t.qpow >= order {
            return Ok(Self::zero(ring, order));
        }
        ring.check_floor(t.qpow)?;
        let mut coeffs = vec![LaurentPoly::zero(); (order - t.qpow) as usize];
        coeffs[0] = LaurentPoly::term(t.coeff.clone(), t.mono);
        Ok(Self { ring: ring.clone(), floor: t.qpow, order, coeffs })
    }

    /// `Σ_{e} poly_e q^e` from sparse `(e, poly)` pairs.
    pub fn from_terms(
        ring: &Arc<Ring>,
        order: i64,
        terms: impl IntoIterator<Item = (i64, LaurentPoly)>,
    ) -> Result<Self> {
        let terms: Vec<(i64, LaurentPoly)> = terms.into_iter().filter(|(e, _)| *e < order).collect();
        let floor = terms.iter().map(|(e, _)| *e).min().unwrap_or(order).min(order);
        let mut coeffs = vec![LaurentPoly::zero(); (order - floor) as usize];
        for (e, p) in terms {
            coeffs[(e - floor) as usize].add_assign_ref(&p);
        }
        Self::from_coeffs(ring, floor, order, coeffs)
    }

    fn normalise(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.floor = self.order;
            }
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.floor += k as i64;
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Lowest stored q-exponent; equals the valuation unless the series is zero.
    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Coefficients are known for every exponent below this.
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.floor)
    }

    /// Coefficient of `q^e`; panics when `e` is at or beyond the truncation order.
    pub fn coeff(&self, e: i64) -> LaurentPoly {
        assert!(e < self.order, "coefficient q^{e} beyond truncation order {}", self.order);
        if e < self.floor {
            LaurentPoly::zero()
        } else {
            self.coeffs[(e - self.floor) as usize].clone()
        }
    }

    fn coeff_ref(&self, e: i64) -> Option<&LaurentPoly> {
        if e < self.floor || e >= self.order {
            None
        } else {
            Some(&self.coeffs[(e - self.floor) as usize])
        }
    }

    /// `(exponent, coefficient)` for every stored nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &LaurentPoly)> {
        let floor = self.floor;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (floor + i as i64, c))
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.symbols() == other.ring.symbols() {
            Ok(())
        } else {
            Err(Error::SymbolTableMismatch)
        }
    }

    /// Forget everything at or above `order`.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let mut out = self.clone();
        out.order = order;
        out.coeffs.truncate((order - self.floor).max(0) as usize);
        out.normalise();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self> {
        self.check_ring(other)?;
        let order = self.order.min(other.order);
        let floor = self.floor.min(other.floor).min(order);
        let mut coeffs = vec![LaurentPoly::zero(); (order - floor) as usize];
        for (e, c) in self.terms() {
            if e < order {
                coeffs[(e - floor) as usize].add_assign_ref(c);
            }
        }
        for (e, c) in other.terms() {
            if e < order {
                let slot = &mut coeffs[(e - floor) as usize];
                if negate {
                    slot.sub_assign_ref(c);
                } else {
                    slot.add_assign_ref(c);
                }
            }
        }
        Self::from_coeffs(&self.ring, floor, order, coeffs)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -&*c;
        }
        out
    }

    /// Cauchy product. The result is known up to
    /// `min(order_a + val_b, order_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let va = self.valuation().unwrap_or(self.order);
        let vb = other.valuation().unwrap_or(other.order);
        let order = (self.order + vb).min(other.order + va);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring, order));
        }
        let floor = self.floor + other.floor;
        self.ring.check_floor(floor)?;
        let len = (order - floor).max(0) as usize;
        let mut coeffs = vec![LaurentPoly::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j].add_product(a, b);
                }
            }
        }
        Self::from_coeffs(&self.ring, floor, order, coeffs)
    }

    /// Multiply by the exact term `c·m·q^k`.
    pub fn mul_term(&self, t: &QTerm) -> Result<Self> {
        if t.is_zero() {
            return Ok(Self::zero(&self.ring, self.order + t.qpow));
        }
        let coeffs = self.coeffs.iter().map(|p| p.scale(&t.coeff, t.mono)).collect();
        Self::from_coeffs(&self.ring, self.floor + t.qpow, self.order + t.qpow, coeffs)
    }

    /// Multiply by `(1 - t)` where `t = c·m·q^k` is exact.
    pub fn mul_one_minus(&self, t: &QTerm) -> Result<Self> {
        let shifted = self.mul_term(t)?;
        // (1 - t) is exact, so the order shrinks only when k < 0
        let order = self.order.min(shifted.order);
        self.truncate(order).sub(&shifted.truncate(order))
    }

    /// Divide by `(1 - t)`, `t = c·m·q^k`.
    ///
    /// For `k > 0` this is the geometric recurrence; for `k < 0` the factor is
    /// rewritten as `-t·(1 - t⁻¹)`. At `k = 0` only a pure scalar `c ≠ 1` is a unit.
    pub fn div_one_minus(&self, t: &QTerm) -> Result<Self> {
        if t.is_zero() {
            return Ok(self.clone());
        }
        match t.qpow {
            k if k > 0 => Ok(self.div_one_minus_positive(&t.coeff, t.mono, k)),
            0 => {
                if !t.mono.is_one() {
                    let p = &LaurentPoly::one() - &LaurentPoly::term(t.coeff.clone(), t.mono);
                    return Err(Error::NonInvertibleLeadingCoefficient(format!("{p:?}")));
                }
                let u = (&GaussianRational::one() - &t.coeff)
                    .inv()
                    .ok_or_else(|| Error::ZeroDivisor("1 - 1".into()))?;
                self.mul_term(&QTerm::scalar(u))
            }
            _ => {
                let tinv = t.inv()?;
                let shifted = self.mul_term(&tinv.neg())?;
                Ok(shifted.div_one_minus_positive(&tinv.coeff, tinv.mono, tinv.qpow))
            }
        }
    }

    fn div_one_minus_positive(&self, c: &GaussianRational, m: Monomial, k: i64) -> Self {
        let k = k as usize;
        let mut coeffs = self.coeffs.clone();
        for j in k..coeffs.len() {
            if coeffs[j - k].is_zero() {
                continue;
            }
            let prev = coeffs[j - k].scale(c, m);
            coeffs[j].add_assign_ref(&prev);
        }
        Self { ring: self.ring.clone(), floor: self.floor, order: self.order, coeffs }
    }

    /// Multiplicative inverse; the leading coefficient must be a scalar times a monomial.
    pub fn invert(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::ZeroSeries)?;
        let (c0, m0) = self.coeffs[0]
            .single_term()
            .ok_or_else(|| Error::NonInvertibleLeadingCoefficient(format!("{:?}", self.coeffs[0])))?;
        let lead = QTerm::new(c0.clone(), m0, 0).inv()?;
        let rel = (self.order - v) as usize;
        let floor = -v;
        self.ring.check_floor(floor)?;
        let mut out: Vec<LaurentPoly> = Vec::with_capacity(rel);
        out.push(LaurentPoly::term(lead.coeff.clone(), lead.mono));
        for k in 1..rel {
            let mut acc = LaurentPoly::zero();
            for j in 1..=k {
                let cj = &self.coeffs[j];
                if !cj.is_zero() && !out[k - j].is_zero() {
                    acc.add_product(cj, &out[k - j]);
                }
            }
            out.push(acc.scale(&-&lead.coeff, lead.mono));
        }
        Self::from_coeffs(&self.ring, floor, floor + rel as i64, out)
    }

    /// Substitute symbol `index := c·m·q^s` (the monomial must not contain the symbol).
    ///
    /// With `s ≠ 0` a coefficient's symbol degree moves it along the q-axis, so
    /// the new order assumes the unknown tail spans the same symbol-degree
    /// range as the stored coefficients.
    pub fn substitute(&self, index: usize, value: &QTerm) -> Result<Self> {
        let mut moved: Vec<(i64, LaurentPoly)> = Vec::new();
        let (mut kmin, mut kmax) = (0i64, 0i64);
        for (e, p) in self.terms() {
            if value.qpow == 0 {
                moved.push((e, p.substitute(index, &value.coeff, value.mono)?));
                continue;
            }
            for (m, c) in p.iter() {
                let k = m.exponent(index);
                kmin = kmin.min(k);
                kmax = kmax.max(k);
                let single = LaurentPoly::term(c.clone(), *m);
                moved.push((e + value.qpow * k, single.substitute(index, &value.coeff, value.mono)?));
            }
        }
        let order = self.order + (value.qpow * kmin).min(value.qpow * kmax).min(0);
        if let Some(low) = moved.iter().filter(|(_, p)| !p.is_zero()).map(|(e, _)| *e).min() {
            self.ring.check_floor(low)?;
        }
        Self::from_terms(&self.ring, order, moved)
    }

    /// Apply a coefficientwise map (e.g. a symbol swap), keeping the q-structure.
    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        let coeffs = self.coeffs.iter().map(f).collect();
        let mut out = Self { ring: self.ring.clone(), floor: self.floor, order: self.order, coeffs };
        out.normalise();
        out
    }

    /// Compare coefficients below `order`.
    pub fn agree_to_order(&self, other: &Self, order: i64) -> Result<Agreement> {
        self.check_ring(other)?;
        let available = self.order.min(other.order);
        if order > available {
            return Err(Error::OrderExceedsPrecision { requested: order, available });
        }
        let start = self.floor.min(other.floor);
        for e in start..order {
            let a = self.coeff_ref(e);
            let b = other.coeff_ref(e);
            let equal = match (a, b) {
                (Some(a), Some(b)) => a == b,
                (Some(x), None) | (None, Some(x)) => x.is_zero(),
                (None, None) => true,
            };
            if !equal {
                let diff = &a.cloned().unwrap_or_default() - &b.cloned().unwrap_or_default();
                return Ok(Agreement { equal: false, first_difference: Some(e), difference: Some(diff) });
            }
        }
        Ok(Agreement { equal: true, first_difference: None, difference: None })
    }
}

/// Outcome of a coefficientwise comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Agreement {
    pub equal: bool,
    pub first_difference: Option<i64>,
    /// `a - b` at the first differing exponent.
    pub difference: Option<LaurentPoly>,
}

impl fmt::Debug for QLaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbols = self.ring.symbols();
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})q^{e}", c.display(symbols))?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SymbolTable;

    fn ring() -> Arc<Ring> {
        Ring::new(SymbolTable::new(&["alpha", "beta"]).unwrap(), 20)
    }

    fn poly_q(ring: &Arc<Ring>, order: i64, cs: &[(i64, i64)]) -> QLaurentSeries {
        QLaurentSeries::from_terms(ring, order, cs.iter().map(|&(e, c)| (e, LaurentPoly::constant(c.into()))))
            .unwrap()
    }

    #[test]
    fn additive_identity_and_inverse() {
        let r = ring();
        let s = poly_q(&r, 8, &[(0, 3), (2, -1), (5, 7)]);
        let z = QLaurentSeries::zero(&r, 8);
        assert!(s.add(&z).unwrap().agree_to_order(&s, 8).unwrap().equal);
        assert!(s.add(&s.neg()).unwrap().is_zero());
    }

    #[test]
    fn simple_sum() {
        let r = ring();
        let a = poly_q(&r, 5, &[(0, 1), (1, 1)]);
        let b = poly_q(&r, 5, &[(1, 1), (2, 1)]);
        let expect = poly_q(&r, 5, &[(0, 1), (1, 2), (2, 1)]);
        assert!(a.add(&b).unwrap().agree_to_order(&expect, 5).unwrap().equal);
    }

    #[test]
    fn geometric_inverse() {
        let r = ring();
        let n = 12;
        let one_minus_q = poly_q(&r, n, &[(0, 1), (1, -1)]);
        let geom = poly_q(&r, n, &(0..n).map(|k| (k, 1)).collect::<Vec<_>>());
        let prod = one_minus_q.mul(&geom).unwrap();
        assert!(prod.agree_to_order(&QLaurentSeries::one(&r, n), n).unwrap().equal);
        assert!(one_minus_q.invert().unwrap().agree_to_order(&geom, n).unwrap().equal);
    }

    #[test]
    fn binomial_product() {
        let r = ring();
        let one = QLaurentSeries::one(&r, 10);
        let p = one
            .mul_one_minus(&QTerm::symbol(0, 1))
            .unwrap()
            .mul_one_minus(&QTerm::symbol(1, 1))
            .unwrap();
        assert_eq!(p.coeff(1), &(-&LaurentPoly::var(0)) - &LaurentPoly::var(1));
        assert_eq!(p.coeff(2), &LaurentPoly::var(0) * &LaurentPoly::var(1));
        assert!(p.coeff(3).is_zero());
    }

    #[test]
    fn invert_monomial_leading() {
        // alpha q (1 - q) -> alpha^-1 q^-1 Σ q^k
        let r = ring();
        let s = QLaurentSeries::from_term(&r, &QTerm::symbol(0, 1), 10)
            .unwrap()
            .mul_one_minus(&QTerm::q_power(1))
            .unwrap();
        let inv = s.invert().unwrap();
        assert_eq!(inv.floor(), -1);
        let ainv = LaurentPoly::term(1.into(), Monomial::var(0, -1));
        for e in -1..inv.order() {
            assert_eq!(inv.coeff(e), ainv);
        }
        let back = s.mul(&inv).unwrap();
        assert!(back.agree_to_order(&QLaurentSeries::one(&r, back.order()), back.order()).unwrap().equal);
    }

    #[test]
    fn non_monomial_leading_coefficient_is_rejected() {
        let r = ring();
        let s = QLaurentSeries::from_poly(&r, &LaurentPoly::one() - &LaurentPoly::var(0), 5);
        assert!(matches!(s.invert(), Err(Error::NonInvertibleLeadingCoefficient(_))));
        assert!(matches!(QLaurentSeries::zero(&r, 5).invert(), Err(Error::ZeroSeries)));
    }

    #[test]
    fn substitutions() {
        let r = ring();
        let one = QLaurentSeries::one(&r, 6);
        let s = one.mul_one_minus(&QTerm::symbol(0, 1)).unwrap();
        let at_one = s.substitute(0, &QTerm::one()).unwrap();
        assert!(at_one.agree_to_order(&poly_q(&r, 6, &[(0, 1), (1, -1)]), 6).unwrap().equal);

        let a2 = QTerm::new(1.into(), Monomial::var(0, 2), 1);
        let s2 = one.mul_one_minus(&a2).unwrap();
        let at_minus = s2.substitute(0, &QTerm::scalar((-1).into())).unwrap();
        assert!(at_minus.agree_to_order(&poly_q(&r, 6, &[(0, 1), (1, -1)]), 6).unwrap().equal);
        let at_i = s2.substitute(0, &QTerm::scalar(GaussianRational::i())).unwrap();
        assert!(at_i.agree_to_order(&poly_q(&r, 6, &[(0, 1), (1, 1)]), 6).unwrap().equal);
    }

    #[test]
    fn floor_violation_is_an_error() {
        let r = Ring::with_min_floor(SymbolTable::empty(), -2);
        let s = QLaurentSeries::from_term(&r, &QTerm::q_power(-2), 5).unwrap();
        assert!(matches!(s.mul(&s), Err(Error::FloorViolation { .. })));
    }

    #[test]
    fn agreement_reports_first_difference() {
        let r = ring();
        let a = QLaurentSeries::one(&r, 10);
        let b = poly_q(&r, 10, &[(0, 1), (1, 1)]);
        let ag = a.agree_to_order(&b, 2).unwrap();
        assert!(!ag.equal);
        assert_eq!(ag.first_difference, Some(1));
        let far = poly_q(&r, 10, &[(0, 1), (6, 1)]);
        assert!(a.agree_to_order(&far, 6).unwrap().equal);
        assert!(a.agree_to_order(&far, 11).is_err());
    }

    #[test]
    fn division_by_binomial_matches_inversion() {
        let r = ring();
        let n = 9;
        let t = QTerm::new(3.into(), Monomial::var(1, -1), 2);
        let base = QLaurentSeries::one(&r, n).mul_one_minus(&QTerm::symbol(0, 1)).unwrap();
        let fast = base.div_one_minus(&t).unwrap();
        let den = QLaurentSeries::one(&r, n).mul_one_minus(&t).unwrap();
        let slow = base.mul(&den.invert().unwrap()).unwrap();
        assert!(fast.agree_to_order(&slow, n).unwrap().equal);

        // negative exponent: 1/(1 - alpha q^-1)
        let neg = QTerm::symbol(0, -1);
        let fast = QLaurentSeries::one(&r, n).div_one_minus(&neg).unwrap();
        let slow = QLaurentSeries::one(&r, n).mul_one_minus(&neg).unwrap().invert().unwrap();
        let o = fast.order().min(slow.order());
        assert!(fast.agree_to_order(&slow, o).unwrap().equal);
    }
}
