//! Kronecker's double series and its sum-of-squares corollaries.

use std::sync::Arc;

use super::report::{Backend, ResidualReport};
use super::NumParams;
use crate::algebra::{GaussianRational, LaurentPoly, Monomial, QLaurentSeries, QTerm, Ring, SymbolTable};
use crate::error::{Error, Result};
use crate::number_theory::{four_square_divisor_series, r2_divisor, rs_from_theta, series_integers, signed_theta_power};
use crate::numeric::{eval_bilateral, BigComplex, Estimate, NumericContext, RatioBound};
use crate::qpoch::numeric::{est_mul, poch_ratio};
use crate::qpoch::PochProduct;

pub const KRONECKER: &str = "kronecker";

fn ring(order: i64) -> Arc<Ring> {
    Ring::new(SymbolTable::new(&["alpha", "beta"]).expect("static symbols"), order)
}

fn mono(i: i64, j: i64) -> Monomial {
    Monomial::from_exponents(&[i, j])
}

/// `Σ_{k,n ≥ 1} q^{kn} (α^k β^n - α^{-k} β^{-n})` below `q^order`.
pub fn kronecker_double_sum(ring: &Arc<Ring>, order: i64) -> Result<QLaurentSeries> {
    let mut terms = Vec::new();
    for k in 1..order {
        for n in 1..=(order - 1) / k {
            let mut p = LaurentPoly::term(1.into(), mono(k, n));
            p.add_term(mono(-k, -n), &(-1).into());
            terms.push((k * n, p));
        }
    }
    QLaurentSeries::from_terms(ring, order, terms)
}

/// `(αβq)(q/αβ)(q)² / ((αq)(q/α)(βq)(q/β))` for arbitrary parameter terms.
pub fn kronecker_product(a: &QTerm, b: &QTerm) -> Result<PochProduct> {
    let q = QTerm::q_power(1);
    let ab = a.mul(b);
    Ok(PochProduct::one()
        .inf(&ab.shift(1))
        .inf(&q.div(&ab)?)
        .inf(&q)
        .inf(&q)
        .over_inf(&a.shift(1))
        .over_inf(&q.div(a)?)
        .over_inf(&b.shift(1))
        .over_inf(&q.div(b)?))
}

fn one_minus(ring: &Arc<Ring>, t: &QTerm, order: i64) -> Result<QLaurentSeries> {
    QLaurentSeries::one(ring, order).sub(&QLaurentSeries::from_term(ring, t, order)?)
}

/// Both sides multiplied by `1 - αβ` so no division by a symbol is needed.
pub fn verify_kronecker_formal(order: i64) -> Result<ResidualReport> {
    let ring = ring(order);
    let (a, b) = (QTerm::symbol(0, 0), QTerm::symbol(1, 0));
    let ab = a.mul(&b);
    let s = kronecker_double_sum(&ring, order)?;
    let lhs = one_minus(&ring, &ab, order)?.add(&s.mul_one_minus(&a)?.mul_one_minus(&b)?)?;
    let rhs = kronecker_product(&a, &b)?.expand(&ring, order)?.mul_one_minus(&ab)?;
    ResidualReport::new(KRONECKER, "formal", Backend::Formal)
        .param("a", "alpha")
        .param("b", "beta")
        .param("cleared", "1 - alpha*beta")
        .formal(&lhs, &rhs, order)
}

/// `α = β → -1`. The prefactor becomes `(1-α)/(1+α)` and `S(α, α)` vanishes at
/// `α = -1`, so each coefficient is divided exactly by `1 + α` before substituting.
pub fn kronecker_limit_foursquare(order: i64) -> Result<QLaurentSeries> {
    let ring = ring(order);
    let s = kronecker_double_sum(&ring, order)?;
    let diag = s.substitute(1, &QTerm::symbol(0, 0))?;
    let one_plus = &LaurentPoly::one() + &LaurentPoly::var(0);
    let one_less = &LaurentPoly::one() - &LaurentPoly::var(0);
    let mut coeffs = Vec::with_capacity(order as usize);
    for e in 0..order {
        let c = diag.coeff(e);
        let reduced = (&c * &one_less).div_exact(&one_plus)?;
        let mut v = reduced.substitute(0, &(-1).into(), Monomial::ONE)?;
        if e == 0 {
            v.add_assign_ref(&LaurentPoly::one());
        }
        coeffs.push(v);
    }
    QLaurentSeries::from_coeffs(&ring, 0, order, coeffs)
}

fn check_counts(r: ResidualReport, lhs: &QLaurentSeries, expected: &[i64], what: &str) -> Result<ResidualReport> {
    let got = series_integers(lhs, expected.len() as i64)?;
    Ok(match got.iter().zip(expected).position(|(g, e)| g != e) {
        None => r,
        Some(n) => {
            let mut r = r.with_outcome(format!("{what} differs at q^{n}: {} vs {}", got[n], expected[n]));
            r.pass = false;
            r
        }
    })
}

/// The `α = β = -1` limit gives the signed four-square series.
pub fn verify_kronecker_four_squares(order: i64) -> Result<ResidualReport> {
    let lhs = kronecker_limit_foursquare(order)?;
    let ring = lhs.ring().clone();
    let diag = QTerm::symbol(0, 0);
    let rhs = kronecker_product(&diag, &diag)?
        .expand(&ring, order)?
        .substitute(0, &QTerm::scalar((-1).into()))?;
    let r = ResidualReport::new(KRONECKER, "four-squares", Backend::Formal)
        .param("a", "-1")
        .param("b", "-1")
        .formal(&lhs, &rhs, order)?;
    let r = check_counts(r, &lhs, &four_square_divisor_series(order), "divisor formula")?;
    let theta: Vec<i64> = series_integers(&signed_theta_power(4, order)?, order)?;
    check_counts(r, &lhs, &theta, "theta power")
}

/// `α = -1`, `β = i` gives the signed two-square series, which must come out real.
pub fn verify_kronecker_two_squares(order: i64) -> Result<ResidualReport> {
    let ring = ring(order);
    let (a, b) = (QTerm::scalar((-1).into()), QTerm::scalar(GaussianRational::i()));
    let s = kronecker_double_sum(&ring, order)?;
    let pre = GaussianRational::new(1, 1).inv().expect("nonzero");
    let lhs = s
        .substitute(0, &a)?
        .substitute(1, &b)?
        .mul_one_minus(&a)?
        .mul_one_minus(&b)?
        .mul_term(&QTerm::scalar(pre))?
        .add(&QLaurentSeries::one(&ring, order))?;
    let rhs = kronecker_product(&a, &b)?.expand(&ring, order)?;
    let r = ResidualReport::new(KRONECKER, "two-squares", Backend::Formal)
        .param("a", "-1")
        .param("b", "i")
        .formal(&lhs, &rhs, order)?;
    let counts = rs_from_theta(2, (order - 1) as u64)?.counts;
    let signed: Vec<i64> = (0..order)
        .map(|n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let by_divisors = if n == 0 { 1 } else { r2_divisor(n as u64) as i64 };
            debug_assert_eq!(by_divisors as u64, counts[n as usize]);
            sign * by_divisors
        })
        .collect();
    let r = check_counts(r, &lhs, &signed, "divisor formula")?;
    let unfolded: Vec<i64> =
        counts.iter().enumerate().map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) }).collect();
    check_counts(r, &lhs, &unfolded, "theta square")
}

/// `Σ_{k≥1} xᵏ qᵏ y/(1 - qᵏ y)`, indexed from `j = k - 1 >= 0`.
fn lambert(ctx: &NumericContext, x: &BigComplex, y: &BigComplex) -> Result<Estimate> {
    let q = ctx.q_f64();
    let (xa, ya) = (x.abs_f64(), y.abs_f64());
    let one = ctx.one();
    let term = |j: i64| {
        if j < 0 {
            return Ok(ctx.zero());
        }
        let k = j + 1;
        let qk = ctx.qpow(k);
        let yk = &qk * y;
        let den = &one - &yk;
        let xk = x.pow_i64(k).ok_or_else(|| Error::ZeroDivisor("a = 0".into()))?;
        (&xk * &yk).div(&den).ok_or_else(|| Error::FactorNearZero("1 - qᵏb".into()))
    };
    let fwd = RatioBound::rigorous(move |m| {
        let k = m as i32 + 1;
        let den = 1.0 - ya * q.powi(k + 1);
        if den <= 0.0 {
            f64::INFINITY
        } else {
            xa * q * (1.0 + ya * q.powi(k)) / den
        }
    });
    let s = eval_bilateral(ctx, term, fwd, RatioBound::constant(0.0))?;
    Ok(Estimate { value: s.value, error: s.error })
}

pub fn kronecker_lhs_num(ctx: &NumericContext, a: &BigComplex, b: &BigComplex) -> Result<Estimate> {
    let one = ctx.one();
    let inv = |x: &BigComplex| x.inv().ok_or_else(|| Error::ZeroDivisor("zero parameter".into()));
    let pos = lambert(ctx, a, b)?;
    let neg = lambert(ctx, &inv(a)?, &inv(b)?)?;
    let pre = (&a.one_minus() * &b.one_minus())
        .div(&(a * b).one_minus())
        .ok_or_else(|| Error::SingularFactor("ab = 1".into()))?;
    let inner = Estimate { value: &pos.value - &neg.value, error: pos.error + neg.error };
    let pre = Estimate { value: pre, error: 0.0 };
    let v = est_mul(&pre, &inner);
    Ok(Estimate { value: &one + &v.value, error: v.error })
}

pub fn kronecker_rhs_num(ctx: &NumericContext, a: &BigComplex, b: &BigComplex) -> Result<Estimate> {
    let q = ctx.q();
    let ab = a * b;
    let div = |x: &BigComplex, y: &BigComplex| x.div(y).ok_or_else(|| Error::ZeroDivisor("zero parameter".into()));
    poch_ratio(
        ctx,
        &[&ab * &q, div(&q, &ab)?, q.clone(), q.clone()],
        &[a * &q, div(&q, a)?, b * &q, div(&q, b)?],
    )
}

pub fn verify_kronecker_numeric(instance: &str, p: &NumParams, prec: u32, tol: f64) -> Result<ResidualReport> {
    let ctx = p.context(prec, tol)?;
    let (a, b) = (p.get(&ctx, "a")?, p.get(&ctx, "b")?);
    let q = ctx.q_f64();
    for (name, v) in [("a", &a), ("b", &b)] {
        let m = v.abs_f64();
        if !(q < m && m < 1.0) {
            return Err(Error::RegionViolation(format!("Kronecker series needs q < |{name}| < 1, got {m}")));
        }
    }
    let lhs = kronecker_lhs_num(&ctx, &a, &b)?;
    let rhs = kronecker_rhs_num(&ctx, &a, &b)?;
    Ok(ResidualReport::new(KRONECKER, instance, Backend::Numeric).params(p.iter()).numeric(&lhs, &rhs, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formal_low_order() {
        let r = verify_kronecker_formal(10).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn four_squares() {
        let r = verify_kronecker_four_squares(30).unwrap();
        assert!(r.pass, "{r:?}");
        let s = series_integers(&kronecker_limit_foursquare(6).unwrap(), 6).unwrap();
        assert_eq!(s, vec![1, -8, 24, -32, 24, -48]);
    }

    #[test]
    fn two_squares() {
        let r = verify_kronecker_two_squares(30).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn numeric_point() {
        let p = NumParams::new([("a", "0.7"), ("b", "0.5"), ("q", "0.2")]);
        let r = verify_kronecker_numeric("t", &p, 256, 1e-25).unwrap();
        assert!(r.pass, "{r:?}");
        let bad = NumParams::new([("a", "0.1"), ("b", "0.5"), ("q", "0.2")]);
        assert!(verify_kronecker_numeric("t", &bad, 256, 1e-25).is_err());
    }
}
