//! Sparse multivariate Laurent polynomials over ℚ(i).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{GaussianRational, Monomial, SymbolTable, MAX_SYMBOLS};
use crate::error::{Error, Result};

/// Finite map from exponent vectors to nonzero coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The symbol with index `i`, i.e. the monomial `xᵢ`.
    pub fn var(i: usize) -> Self {
        Self::term(GaussianRational::one(), Monomial::var(i, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.single_term().is_some_and(|(c, m)| c.is_one() && m.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// `Some((c, m))` when the polynomial is exactly `c·m`.
    pub fn single_term(&self) -> Option<(&GaussianRational, Monomial)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c, *m))
        } else {
            None
        }
    }

    /// The constant coefficient if the polynomial has no other terms.
    pub fn as_scalar(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn trailing_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &LaurentPoly) {
        for (m, c) in &other.terms {
            self.add_term(*m, c);
        }
    }

    pub fn sub_assign_ref(&mut self, other: &LaurentPoly) {
        for (m, c) in &other.terms {
            self.add_term(*m, &-c);
        }
    }

    /// `self += c·m·other`.
    pub fn add_scaled(&mut self, other: &LaurentPoly, c: &GaussianRational, m: Monomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(*om * m, &(oc * c));
        }
    }

    /// `self += a·b`.
    pub fn add_product(&mut self, a: &LaurentPoly, b: &LaurentPoly) {
        for (am, ac) in &a.terms {
            for (bm, bc) in &b.terms {
                let m = *am * *bm;
                match self.terms.get_mut(&m) {
                    Some(slot) => {
                        slot.add_mul(ac, bc);
                        if slot.is_zero() {
                            self.terms.remove(&m);
                        }
                    }
                    None => {
                        let c = ac * bc;
                        if !c.is_zero() {
                            self.terms.insert(m, c);
                        }
                    }
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational, m: Monomial) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        out.add_scaled(self, c, m);
        out
    }

    /// Substitute symbol `index := c·m` where `m` does not involve the symbol.
    pub fn substitute(&self, index: usize, c: &GaussianRational, m: Monomial) -> Result<LaurentPoly> {
        assert_eq!(m.exponent(index), 0, "substituted monomial must not contain the symbol");
        let mut out = LaurentPoly::zero();
        for (tm, tc) in &self.terms {
            let k = tm.exponent(index);
            let ck = c
                .pow(k)
                .ok_or_else(|| Error::ZeroDivisor(format!("0^{k} in substitution")))?;
            out.add_term(tm.without(index) * m.pow(k), &(tc * &ck));
        }
        Ok(out)
    }

    /// Exchange the roles of symbols `i` and `j`.
    pub fn swap_symbols(&self, i: usize, j: usize) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m.swapped(i, j), c.clone())).collect() }
    }

    /// Exact quotient `self / divisor`, failing if the division leaves a remainder.
    ///
    /// Works in the Laurent ring: lex order is a group order, so the leading
    /// term of a product is the product of leading terms. Degrees in each
    /// symbol add under multiplication, which confines an exact quotient to a
    /// finite box of exponents; leaving the box proves a remainder.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        let (&dlead_m, dlead_c) = divisor
            .leading_term()
            .ok_or_else(|| Error::InexactDivision("division by zero polynomial".into()))?;
        let dlead_inv = dlead_c.inv().expect("nonzero leading coefficient");
        let mut quot = LaurentPoly::zero();
        if self.is_zero() {
            return Ok(quot);
        }
        let (slo, shi) = self.degree_box();
        let (dlo, dhi) = divisor.degree_box();
        let lo: Vec<i64> = slo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = shi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
        let mut rem = self.clone();
        while let Some((&rm, rc)) = rem.leading_term() {
            let qm = rm / dlead_m;
            let inside = (0..MAX_SYMBOLS).all(|i| (lo[i]..=hi[i]).contains(&qm.exponent(i)));
            if !inside {
                return Err(Error::InexactDivision(format!("nonzero remainder with {} terms", rem.len())));
            }
            let qc = rc * &dlead_inv;
            rem.add_scaled(divisor, &-&qc, qm);
            quot.add_term(qm, &qc);
        }
        Ok(quot)
    }

    /// Per-symbol minimum and maximum exponents.
    fn degree_box(&self) -> ([i64; MAX_SYMBOLS], [i64; MAX_SYMBOLS]) {
        let mut lo = [i64::MAX; MAX_SYMBOLS];
        let mut hi = [i64::MIN; MAX_SYMBOLS];
        for m in self.terms.keys() {
            for i in 0..MAX_SYMBOLS {
                lo[i] = lo[i].min(m.exponent(i));
                hi[i] = hi[i].max(m.exponent(i));
            }
        }
        (lo, hi)
    }

    /// Render with symbol names, e.g. `2*a^2*b^-1 + 1`.
    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, symbols: Some(symbols) }
    }
}

struct PolyDisplay<'a> {
    poly: &'a LaurentPoly,
    symbols: Option<&'a SymbolTable>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_real() || m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})")?;
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = match self.symbols {
                    Some(s) if i < s.len() => s.name(i).to_owned(),
                    _ => format!("x{i}"),
                };
                if e == 1 {
                    write!(f, "*{name}")?;
                } else {
                    write!(f, "*{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", PolyDisplay { poly: self, symbols: None })
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: Self) -> LaurentPoly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> LaurentPoly {
        LaurentPoly::var(i)
    }

    #[test]
    fn exact_division_by_binomial() {
        // (a^3 - a^-3) / (a - a^-1) = a^2 + 1 + a^-2
        let a3 = LaurentPoly::term(1.into(), Monomial::var(0, 3));
        let am3 = LaurentPoly::term(1.into(), Monomial::var(0, -3));
        let a1 = &x(0) - &LaurentPoly::term(1.into(), Monomial::var(0, -1));
        let q = (&a3 - &am3).div_exact(&a1).unwrap();
        let mut expect = LaurentPoly::one();
        expect.add_term(Monomial::var(0, 2), &1.into());
        expect.add_term(Monomial::var(0, -2), &1.into());
        assert_eq!(q, expect);
    }

    #[test]
    fn inexact_division_is_rejected() {
        let num = &x(0) + &LaurentPoly::one();
        let den = &x(1) + &LaurentPoly::one();
        assert!(matches!(num.div_exact(&den), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn substitution_with_gaussian_unit() {
        // 1 - a^2 at a = i gives 2
        let p = &LaurentPoly::one() - &(&x(0) * &x(0));
        let r = p.substitute(0, &GaussianRational::i(), Monomial::ONE).unwrap();
        assert_eq!(r, LaurentPoly::constant(2.into()));
    }

    #[test]
    fn substitution_rejects_zero_to_negative_power() {
        let p = LaurentPoly::term(1.into(), Monomial::var(0, -1));
        assert!(p.substitute(0, &GaussianRational::zero(), Monomial::ONE).is_err());
    }
}
