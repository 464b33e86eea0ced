use std::fmt;
use std::ops::{Div, Mul};

/// Upper bound on the number of free symbols in one computation.
pub const MAX_SYMBOLS: usize = 12;

/// Exponent vector of a Laurent monomial; one slot per symbol of the table.
///
/// The derived ordering is lexicographic, which is a group order on ℤⁿ and
/// therefore compatible with multiplication. Exact division relies on that.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial([i16; MAX_SYMBOLS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_SYMBOLS]);

    pub fn var(index: usize, exp: i64) -> Self {
        let mut m = Self::ONE;
        m.0[index] = narrow(exp);
        m
    }

    pub fn from_exponents(exps: &[i64]) -> Self {
        assert!(exps.len() <= MAX_SYMBOLS);
        let mut m = Self::ONE;
        for (slot, &e) in m.0.iter_mut().zip(exps) {
            *slot = narrow(e);
        }
        m
    }

    pub fn exponent(&self, index: usize) -> i64 {
        self.0[index] as i64
    }

    pub fn exponents(&self) -> &[i16; MAX_SYMBOLS] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn inverse(&self) -> Self {
        let mut m = *self;
        for e in &mut m.0 {
            *e = -*e;
        }
        m
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut m = Self::ONE;
        for (dst, &e) in m.0.iter_mut().zip(&self.0) {
            *dst = narrow(e as i64 * k);
        }
        m
    }

    /// The monomial with slot `index` cleared.
    pub fn without(&self, index: usize) -> Self {
        let mut m = *self;
        m.0[index] = 0;
        m
    }

    /// Swap the exponents of two symbols.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut m = *self;
        m.0.swap(i, j);
        m
    }
}

fn narrow(e: i64) -> i16 {
    i16::try_from(e).unwrap_or_else(|_| panic!("monomial exponent {e} overflows i16"))
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        let mut m = self;
        for (a, b) in m.0.iter_mut().zip(&rhs.0) {
            *a = a.checked_add(*b).expect("monomial exponent overflow");
        }
        m
    }
}

impl Div for Monomial {
    type Output = Monomial;
    fn div(self, rhs: Monomial) -> Monomial {
        self * rhs.inverse()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1);
        write!(f, "m{:?}", &self.0[..last])
    }
}
