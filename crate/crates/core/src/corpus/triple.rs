//! Jacobi's triple product `Σ (-1)ⁿ zⁿ q^{n(n-1)/2} = θ(z)`.

use super::formal_sum::formal_bilateral;
use super::psi11::{psi11_term, ring_for};
use super::report::{describe_term, Backend, ResidualReport};
use super::NumParams;
use crate::algebra::{GaussianRational, QTerm};
use crate::error::{Error, Result};
use crate::numeric::{eval_bilateral, BigComplex, Estimate, NumericContext, RatioBound};
use crate::qpoch::numeric::theta as theta_num;
use crate::qpoch::{theta_product, PochProduct};

pub const TRIPLE: &str = "triple-product";

pub fn triple_term(z: &QTerm, n: i64) -> Result<PochProduct> {
    let sign = QTerm::scalar(GaussianRational::from_int(if n % 2 == 0 { 1 } else { -1 }));
    Ok(PochProduct::from_term(z.pow(n)?.mul(&sign).shift(n * (n - 1) / 2)))
}

/// Formal check with `z = ζ q^s`, `s >= 1`.
pub fn verify_triple_product_formal(instance: &str, s: i64, order: i64) -> Result<ResidualReport> {
    if s < 1 {
        return Err(Error::RegionViolation(format!("triple product needs z = ζq^s with s >= 1, got s = {s}")));
    }
    let ring = ring_for(order);
    let z = QTerm::symbol(2, s);
    let lhs = formal_bilateral(&ring, order, 2, |n| triple_term(&z, n))?;
    let rhs = theta_product(&z)?.expand(&ring, order)?;
    ResidualReport::new(TRIPLE, instance, Backend::Formal)
        .param("z", describe_term(&z, ring.symbols()))
        .formal(&lhs, &rhs, order)
}

/// The triple product as a limit of the ₁ψ₁ sum: with `a = 1/α`, `b = 0` and
/// `z ↦ αz`, each summand is a polynomial in `α` whose value at `α = 0` is the
/// theta summand. The summed series at `α = 0` must equal `θ(ζq)`.
pub fn verify_triple_from_psi11(order: i64) -> Result<ResidualReport> {
    let ring = ring_for(order);
    let a = QTerm::new(GaussianRational::one(), crate::algebra::Monomial::var(0, -1), 0);
    let b = QTerm::scalar(GaussianRational::zero());
    let z = QTerm::symbol(2, 1);
    let az = QTerm::symbol(0, 0).mul(&z);
    let sum = formal_bilateral(&ring, order, 2, |n| psi11_term(&a, &b, &az, n))?;
    let limit = sum.substitute(0, &QTerm::scalar(GaussianRational::zero()))?;
    let theta = theta_product(&z)?.expand(&ring, order)?;
    ResidualReport::new(TRIPLE, "psi11-limit", Backend::Formal)
        .param("a", "1/alpha")
        .param("b", "0")
        .param("z", "alpha*zeta*q")
        .param("limit", "alpha -> 0")
        .formal(&limit, &theta, order)
}

pub fn triple_lhs_num(ctx: &NumericContext, z: &BigComplex) -> Result<Estimate> {
    if z.is_zero() {
        return Err(Error::RegionViolation("triple product needs z != 0".into()));
    }
    let q = ctx.q_f64();
    let za = z.abs_f64();
    let mz = -z;
    let term = |n: i64| {
        let zn = mz.pow_i64(n).expect("nonzero");
        Ok(&zn * &ctx.qpow(n * (n - 1) / 2))
    };
    let fwd = RatioBound::rigorous(move |m| za * q.powi(m as i32));
    let bwd = RatioBound::rigorous(move |m| q.powi(m as i32 + 1) / za);
    let s = eval_bilateral(ctx, term, fwd, bwd)?;
    Ok(Estimate { value: s.value, error: s.error })
}

pub fn verify_triple_product_numeric(instance: &str, p: &NumParams, prec: u32, tol: f64) -> Result<ResidualReport> {
    let ctx = p.context(prec, tol)?;
    let z = p.get(&ctx, "z")?;
    let lhs = triple_lhs_num(&ctx, &z)?;
    let rhs = theta_num(&ctx, &z)?;
    Ok(ResidualReport::new(TRIPLE, instance, Backend::Numeric).params(p.iter()).numeric(&lhs, &rhs, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{LaurentPoly, Monomial};

    #[test]
    fn formal_small() {
        for s in 1..=3 {
            let r = verify_triple_product_formal("t", s, 12).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert!(verify_triple_product_formal("t", 0, 12).is_err());
    }

    #[test]
    fn first_power_of_zeta() {
        let ring = ring_for(5);
        let z = QTerm::symbol(2, 1);
        let t = triple_term(&z, 1).unwrap().expand(&ring, 5).unwrap();
        assert_eq!(t.coeff(1), LaurentPoly::term((-1).into(), Monomial::var(2, 1)));
    }

    #[test]
    fn psi11_limit() {
        assert!(verify_triple_from_psi11(12).unwrap().pass);
    }

    #[test]
    fn numeric_points() {
        let p = NumParams::new([("q", "1/3"), ("z", "-1")]);
        assert!(verify_triple_product_numeric("t", &p, 256, 1e-30).unwrap().pass);
        let p = NumParams::new([("q", "1/3"), ("z", "1")]);
        let r = verify_triple_product_numeric("t", &p, 256, 1e-30).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
