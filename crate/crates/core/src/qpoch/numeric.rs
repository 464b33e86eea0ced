//! Numeric q-shifted factorials, theta, q-gamma and the Jackson integral.

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::{eval_bilateral, eval_poch_infinite, BigComplex, BilateralSum, Estimate, NumericContext, RatioBound};

/// `(x)_n` for integer `n` as a finite product.
///
/// A vanishing factor of a negative-index product is a pole and comes back as
/// `ZeroDivisor`; callers summing bilateral series treat it per term.
pub fn poch(ctx: &NumericContext, x: &BigComplex, n: i64) -> Result<BigComplex> {
    let q = ctx.q();
    let mut acc = ctx.one();
    if n >= 0 {
        let mut t = x.clone();
        for _ in 0..n {
            acc = &acc * &t.one_minus();
            t = &t * &q;
        }
        return Ok(acc);
    }
    let qinv = ctx.qpow(-1);
    let mut t = x * &qinv;
    for j in 1..=-n {
        let f = t.one_minus();
        if f.is_zero() {
            return Err(Error::ZeroDivisor(format!("1 - x q^-{j}")));
        }
        acc = &acc * &f;
        t = &t * &qinv;
    }
    acc.inv().ok_or_else(|| Error::ZeroDivisor("negative-index product".into()))
}

/// `1/(x)_n`, with the reciprocal of a pole evaluating to exactly zero.
pub fn recip_poch(ctx: &NumericContext, x: &BigComplex, n: i64) -> Result<BigComplex> {
    match poch(ctx, x, n) {
        Ok(v) => v.inv().ok_or_else(|| Error::ZeroDivisor(format!("(x)_{n} vanishes"))),
        Err(Error::ZeroDivisor(_)) if n < 0 => Ok(ctx.zero()),
        Err(e) => Err(e),
    }
}

pub fn poch_infinite(ctx: &NumericContext, x: &BigComplex) -> Result<Estimate> {
    eval_poch_infinite(ctx, x)
}

/// `(a)_z = (a)_∞ / (a q^z)_∞` for complex `z`.
pub fn poch_general(ctx: &NumericContext, a: &BigComplex, z: &BigComplex) -> Result<Estimate> {
    let shifted = a * &ctx.qpow_complex(z);
    let num = eval_poch_infinite(ctx, a)?;
    let den = eval_poch_infinite(ctx, &shifted)?;
    est_div(ctx, &num, &den)
}

/// `θ(z) = (z)_∞ (q/z)_∞ (q)_∞`.
pub fn theta(ctx: &NumericContext, z: &BigComplex) -> Result<Estimate> {
    let qz = ctx.q().div(z).ok_or_else(|| Error::ZeroDivisor("theta at z = 0".into()))?;
    let a = eval_poch_infinite(ctx, z)?;
    let b = eval_poch_infinite(ctx, &qz)?;
    let c = eval_poch_infinite(ctx, &ctx.q())?;
    Ok(est_mul(&est_mul(&a, &b), &c))
}

/// `Γ_q(x) = (q)_{x-1} / (1 - q)^{x-1}`.
pub fn q_gamma(ctx: &NumericContext, x: &BigComplex) -> Result<Estimate> {
    if x.is_real() && x.re().is_integer() && *x.re() <= 0 {
        return Err(Error::PoleAtNonPositiveInteger(x.to_decimal(10)));
    }
    let xm1 = x - &ctx.one();
    let p = poch_general(ctx, &ctx.q(), &xm1)?;
    let base = Float::with_val(ctx.prec, 1 - &ctx.q);
    let scale = BigComplex::real_base_pow(&base, &-&xm1);
    Ok(Estimate { value: &p.value * &scale, error: p.error * scale.abs_f64() })
}

/// `(1 - q) Σ_{n∈ℤ} f(c qⁿ) c qⁿ` with certified tails.
///
/// `forward` and `backward` bound the modulus ratios of consecutive summands
/// `f(c q^n) c q^n` as `n → +∞` and `n → -∞`.
pub fn jackson_qintegral<F>(
    ctx: &NumericContext,
    f: F,
    c: &BigComplex,
    forward: RatioBound<'_>,
    backward: RatioBound<'_>,
) -> Result<BilateralSum>
where
    F: Fn(&BigComplex) -> Result<BigComplex> + Sync,
{
    let term = |n: i64| {
        let t = c * &ctx.qpow(n);
        Ok(&f(&t)? * &t)
    };
    let mut s = eval_bilateral(ctx, term, forward, backward)?;
    let w = ctx.one() - ctx.q();
    s.value = &s.value * &w;
    s.error *= w.abs_f64();
    Ok(s)
}

pub fn est_mul(a: &Estimate, b: &Estimate) -> Estimate {
    let (x, y) = (a.value.abs_f64(), b.value.abs_f64());
    Estimate { value: &a.value * &b.value, error: a.error * y + b.error * x + a.error * b.error }
}

pub fn est_div(ctx: &NumericContext, a: &Estimate, b: &Estimate) -> Result<Estimate> {
    let bm = b.value.abs_f64();
    if b.value.is_zero() || bm <= b.error * 2.0 {
        return Err(Error::FactorNearZero(format!("division by {} ± {:e}", b.value.to_decimal(6), b.error)));
    }
    let value = a.value.div(&b.value).expect("nonzero divisor");
    let rel = a.error / a.value.abs_f64().max(f64::MIN_POSITIVE) + 2.0 * b.error / bm;
    let error = if a.value.is_zero() { a.error / (bm - b.error) } else { value.abs_f64() * rel };
    let round = value.abs_f64() * ctx.rounding(2);
    Ok(Estimate { value, error: error + round })
}

/// Product of several infinite Pochhammers divided by several others.
pub fn poch_ratio(ctx: &NumericContext, num: &[BigComplex], den: &[BigComplex]) -> Result<Estimate> {
    let mut acc = Estimate { value: ctx.one(), error: 0.0 };
    for x in num {
        acc = est_mul(&acc, &eval_poch_infinite(ctx, x)?);
    }
    for x in den {
        acc = est_div(ctx, &acc, &eval_poch_infinite(ctx, x)?)?;
    }
    Ok(acc)
}

/// Cached `(c)_k` for `k` in a symmetric window, grown on demand.
pub struct PochTable {
    c: BigComplex,
    pos: Vec<BigComplex>,
    neg: Vec<Option<BigComplex>>,
}

impl PochTable {
    pub fn new(ctx: &NumericContext, c: &BigComplex) -> Self {
        Self { c: c.clone(), pos: vec![ctx.one()], neg: vec![Some(ctx.one())] }
    }

    fn grow(&mut self, ctx: &NumericContext, k: i64) {
        while (self.pos.len() as i64) <= k {
            let j = self.pos.len() as i64 - 1;
            let f = (&self.c * &ctx.qpow(j)).one_minus();
            let next = &self.pos[j as usize] * &f;
            self.pos.push(next);
        }
        while (self.neg.len() as i64) <= -k {
            let j = self.neg.len() as i64;
            let f = (&self.c * &ctx.qpow(-j)).one_minus();
            let next = match (&self.neg[(j - 1) as usize], f.inv()) {
                (Some(prev), Some(inv)) => Some(prev * &inv),
                _ => None,
            };
            self.neg.push(next);
        }
    }

    /// `(c)_k`, or `None` at a pole.
    pub fn get(&mut self, ctx: &NumericContext, k: i64) -> Option<BigComplex> {
        self.grow(ctx, k);
        if k >= 0 {
            Some(self.pos[k as usize].clone())
        } else {
            self.neg[(-k) as usize].clone()
        }
    }

    /// Fill the table for `|k| <= radius` so that `lookup` can be shared read-only.
    pub fn fill(&mut self, ctx: &NumericContext, radius: i64) {
        self.grow(ctx, radius);
        self.grow(ctx, -radius);
    }

    pub fn lookup(&self, k: i64) -> Option<Option<&BigComplex>> {
        if k >= 0 {
            self.pos.get(k as usize).map(Some)
        } else {
            self.neg.get((-k) as usize).map(|v| v.as_ref())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: &str) -> NumericContext {
        NumericContext::parse(256, q, 1e-30).unwrap()
    }

    #[test]
    fn finite_poch_conventions() {
        let c = ctx("1/2");
        assert_eq!(poch(&c, &c.num(0.3), 0).unwrap(), c.one());
        assert!(matches!(poch(&c, &c.q(), -1), Err(Error::ZeroDivisor(_))));
        assert!(recip_poch(&c, &c.q(), -3).unwrap().is_zero());
    }

    #[test]
    fn cocycle() {
        let c = ctx("0.3");
        let x = c.num(0.7);
        for (m, n) in [(2, 3), (-2, 5), (4, -6), (-1, -2)] {
            let lhs = poch(&c, &x, m + n).unwrap();
            let rhs = &poch(&c, &x, m).unwrap() * &poch(&c, &(&x * &c.qpow(m)), n).unwrap();
            assert!((&lhs - &rhs).abs_f64() < 1e-60, "{m} {n}");
        }
    }

    #[test]
    fn integer_general_index_matches_finite() {
        let c = ctx("0.4");
        let x = c.num(-0.8);
        let g = poch_general(&c, &x, &c.int(3)).unwrap();
        let f = poch(&c, &x, 3).unwrap();
        assert!((&g.value - &f).abs_f64() < 1e-40);
    }

    #[test]
    fn q_gamma_small_values() {
        let c = ctx("1/2");
        assert!((&q_gamma(&c, &c.int(1)).unwrap().value - &c.one()).abs_f64() < 1e-40);
        assert!((&q_gamma(&c, &c.int(2)).unwrap().value - &c.one()).abs_f64() < 1e-40);
        assert!((&q_gamma(&c, &c.int(3)).unwrap().value - &c.num(1.5)).abs_f64() < 1e-40);
        assert!(matches!(q_gamma(&c, &c.int(-2)), Err(Error::PoleAtNonPositiveInteger(_))));
    }

    #[test]
    fn theta_at_minus_one_is_positive() {
        let c = ctx("1/3");
        let t = theta(&c, &c.num(-1.0)).unwrap();
        assert!(t.value.is_real() && *t.value.re() > 0);
        assert!(theta(&c, &c.one()).unwrap().value.is_zero());
    }

    #[test]
    fn table_matches_direct() {
        let c = ctx("0.2");
        let x = c.num(2.5);
        let mut tab = PochTable::new(&c, &x);
        for k in -6..=6 {
            let d = poch(&c, &x, k).unwrap();
            assert!((&tab.get(&c, k).unwrap() - &d).abs_f64() < 1e-50 * d.abs_f64().max(1.0));
        }
    }

    #[test]
    fn jackson_of_zero() {
        let c = ctx("1/3");
        let s = jackson_qintegral(&c, |_| Ok(c.zero()), &c.one(), RatioBound::constant(0.5), RatioBound::constant(0.5))
            .unwrap();
        assert!(s.value.is_zero());
    }
}
