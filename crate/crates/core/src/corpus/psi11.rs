//! The bilateral ₁ψ₁ sum, the q-binomial theorem and Ismail's specialisation.

use std::sync::Arc;

use super::formal_sum::{formal_bilateral, formal_unilateral};
use super::report::{describe_term, Backend, ResidualReport};
use super::NumParams;
use crate::algebra::{QTerm, Ring, SymbolTable};
use crate::error::{Error, Result};
use crate::numeric::{eval_bilateral, BigComplex, BilateralSum, Estimate, NumericContext, RatioBound};
use crate::qpoch::numeric::{poch, poch_ratio, recip_poch};
use crate::qpoch::PochProduct;

pub const PSI11: &str = "1psi1";
pub const QBINOMIAL: &str = "q-binomial";

pub fn symbols() -> SymbolTable {
    SymbolTable::new(&["alpha", "beta", "zeta"]).expect("static symbols")
}

/// Formal parameters of one ₁ψ₁ instance.
#[derive(Clone, Debug)]
pub struct Psi11Formal {
    pub a: QTerm,
    pub b: QTerm,
    pub z: QTerm,
}

impl Psi11Formal {
    /// `a = α`, `b = βq²`, `z = ζq`.
    pub fn canonical() -> Self {
        Self { a: QTerm::symbol(0, 0), b: QTerm::symbol(1, 2), z: QTerm::symbol(2, 1) }
    }

    /// Both `z` and `b/(az)` must carry positive q-order for the sum to truncate.
    pub fn validate(&self) -> Result<()> {
        let b_az = self.b.div(&self.a.mul(&self.z))?;
        if self.z.qpow < 1 || b_az.qpow < 1 {
            return Err(Error::RegionViolation(format!(
                "formal scheme needs q-order >= 1 for z and b/(az), got {} and {}",
                self.z.qpow, b_az.qpow
            )));
        }
        Ok(())
    }
}

/// `(a)_n / (b)_n · zⁿ`.
pub fn psi11_term(a: &QTerm, b: &QTerm, z: &QTerm, n: i64) -> Result<PochProduct> {
    Ok(PochProduct::from_term(z.pow(n)?).poch(a, n).over_poch(b, n))
}

/// `(az)_∞ (q/az)_∞ (b/a)_∞ (q)_∞ / ((z)_∞ (b/az)_∞ (q/a)_∞ (b)_∞)`.
pub fn psi11_rhs(a: &QTerm, b: &QTerm, z: &QTerm) -> Result<PochProduct> {
    let q = QTerm::q_power(1);
    let az = a.mul(z);
    Ok(PochProduct::one()
        .inf(&az)
        .inf(&q.div(&az)?)
        .inf(&b.div(a)?)
        .inf(&q)
        .over_inf(z)
        .over_inf(&b.div(&az)?)
        .over_inf(&q.div(a)?)
        .over_inf(b))
}

fn formal_params(r: ResidualReport, ring: &Ring, ps: &[(&str, &QTerm)]) -> ResidualReport {
    r.params(ps.iter().map(|(k, t)| (k.to_string(), describe_term(t, ring.symbols()))))
}

/// Exact check of the ₁ψ₁ sum to `order` under the given scheme.
pub fn verify_1psi1_formal(instance: &str, p: &Psi11Formal, order: i64) -> Result<ResidualReport> {
    p.validate()?;
    let ring = Ring::new(symbols(), order);
    let lhs = formal_bilateral(&ring, order, 2, |n| psi11_term(&p.a, &p.b, &p.z, n))?;
    let rhs = psi11_rhs(&p.a, &p.b, &p.z)?.expand(&ring, order)?;
    let r = ResidualReport::new(PSI11, instance, Backend::Formal);
    formal_params(r, &ring, &[("a", &p.a), ("b", &p.b), ("z", &p.z)]).formal(&lhs, &rhs, order)
}

/// Ismail's argument as a test: at `b = q^{k+1}` the bilateral sum starts at
/// `n = -k`, and shifting it gives the q-binomial theorem with `a ↦ a q^{-k}`.
/// Both the ₁ψ₁ product and the shifted q-binomial product must match the sum.
pub fn verify_ismail(k: i64, order: i64) -> Result<ResidualReport> {
    let ring = Ring::new(symbols(), order);
    let a = QTerm::symbol(0, 0);
    let b = QTerm::q_power(k + 1);
    let z = QTerm::symbol(2, 1);
    let lhs = formal_bilateral(&ring, order, k + 2, |n| psi11_term(&a, &b, &z, n))?;
    let rhs = psi11_rhs(&a, &b, &z)?.expand(&ring, order)?;
    // Σ_{n>=-k} (a)_n/(q^{k+1})_n zⁿ = (a)_{-k} z^{-k}/(q^{k+1})_{-k} · (a q^{-k} z)_∞/(z)_∞
    let shifted = PochProduct::from_term(z.pow(-k)?)
        .poch(&a, -k)
        .over_poch(&b, -k)
        .inf(&a.shift(-k).mul(&z))
        .over_inf(&z)
        .expand(&ring, order)?;
    let r = ResidualReport::new(QBINOMIAL, &format!("ismail-k{k}"), Backend::Formal).param("k", k);
    let r = formal_params(r, &ring, &[("a", &a), ("b", &b), ("z", &z)]);
    let against_binomial = ResidualReport::new(PSI11, "", Backend::Formal).formal(&lhs, &shifted, order)?;
    let mut r = r.formal(&lhs, &rhs, order)?;
    if !against_binomial.pass {
        r.pass = false;
        r.first_difference = against_binomial.first_difference;
        r.residual = against_binomial.residual;
        r.outcome = Some("sum differs from the shifted q-binomial product".into());
    }
    Ok(r)
}

/// `Σ_{n>=0} (a)_n/(q)_n zⁿ = (az)_∞/(z)_∞`, with `a = α`, `z = ζq`.
pub fn verify_qbinomial_formal(instance: &str, a: &QTerm, z: &QTerm, order: i64) -> Result<ResidualReport> {
    if z.qpow < 1 {
        return Err(Error::RegionViolation("q-binomial scheme needs z of q-order >= 1".into()));
    }
    let ring = Ring::new(symbols(), order);
    let q = QTerm::q_power(1);
    let lhs = formal_unilateral(&ring, order, 1, |n| psi11_term(a, &q, z, n))?;
    let rhs = PochProduct::one().inf(&a.mul(z)).over_inf(z).expand(&ring, order)?;
    let r = ResidualReport::new(QBINOMIAL, instance, Backend::Formal);
    formal_params(r, &ring, &[("a", a), ("z", z)]).formal(&lhs, &rhs, order)
}

/// Numeric `(a)_n/(b)_n zⁿ`, with `1/(b)_n = 0` at poles of `(b)_n`.
pub fn psi11_term_num(ctx: &NumericContext, a: &BigComplex, b: &BigComplex, z: &BigComplex, n: i64) -> Result<BigComplex> {
    let rb = recip_poch(ctx, b, n)?;
    if rb.is_zero() {
        return Ok(rb);
    }
    let zn = z.pow_i64(n).ok_or_else(|| Error::ZeroDivisor("z = 0".into()))?;
    Ok(&(&poch(ctx, a, n)? * &rb) * &zn)
}

/// Forward and backward ratio majorants for the ₁ψ₁ summand.
///
/// Forward: `|z|(1 + |a|qᵐ)/(1 - |b|qᵐ)`. Backward:
/// `(|b| + q^{m+1}) / (|z|(|a| - q^{m+1}))`.
pub fn psi11_bounds<'a>(q: f64, a: f64, b: f64, z: f64) -> (RatioBound<'a>, RatioBound<'a>) {
    let fwd = move |m: u64| {
        let qm = q.powi(m.min(i32::MAX as u64) as i32);
        let den = 1.0 - b * qm;
        if den <= 0.0 {
            f64::INFINITY
        } else {
            z * (1.0 + a * qm) / den
        }
    };
    let bwd = move |m: u64| {
        let qm = q.powi((m + 1).min(i32::MAX as u64) as i32);
        let den = z * (a - qm);
        if den <= 0.0 {
            f64::INFINITY
        } else {
            (b + qm) / den
        }
    };
    (RatioBound::rigorous(fwd), RatioBound::rigorous(bwd))
}

pub fn psi11_lhs_num(ctx: &NumericContext, a: &BigComplex, b: &BigComplex, z: &BigComplex) -> Result<BilateralSum> {
    let (f, bw) = psi11_bounds(ctx.q_f64(), a.abs_f64(), b.abs_f64(), z.abs_f64());
    eval_bilateral(ctx, |n| psi11_term_num(ctx, a, b, z, n), f, bw)
}

pub fn psi11_rhs_num(ctx: &NumericContext, a: &BigComplex, b: &BigComplex, z: &BigComplex) -> Result<Estimate> {
    let q = ctx.q();
    let az = a * z;
    let div = |x: &BigComplex, y: &BigComplex| x.div(y).ok_or_else(|| Error::ZeroDivisor("zero parameter".into()));
    poch_ratio(
        ctx,
        &[az.clone(), div(&q, &az)?, div(b, a)?, q.clone()],
        &[z.clone(), div(b, &az)?, div(&q, a)?, b.clone()],
    )
}

/// `|b/a| < |z| < 1` and `a, q/b ∉ {q, q², …}`.
pub fn check_psi11_region(ctx: &NumericContext, a: &BigComplex, b: &BigComplex, z: &BigComplex) -> Result<()> {
    let (za, zb, zz) = (a.abs_f64(), b.abs_f64(), z.abs_f64());
    if za == 0.0 || !(zb / za < zz && zz < 1.0) {
        return Err(Error::RegionViolation(format!("need |b/a| < |z| < 1, got |b/a| = {}, |z| = {zz}", zb / za)));
    }
    let q = ctx.q();
    let mut qj = q.clone();
    for j in 1..200 {
        let near = |x: &BigComplex| (x - &qj).abs_f64() < 1e-20 * qj.abs_f64();
        if near(a) || (!b.is_zero() && near(&q.div(b).expect("nonzero"))) {
            return Err(Error::RegionViolation(format!("a or q/b equals q^{j}")));
        }
        qj = &qj * &q;
    }
    Ok(())
}

pub fn verify_1psi1_numeric(instance: &str, p: &NumParams, prec: u32, tol: f64) -> Result<ResidualReport> {
    let ctx = p.context(prec, tol)?;
    let (a, b, z) = (p.get(&ctx, "a")?, p.get(&ctx, "b")?, p.get(&ctx, "z")?);
    check_psi11_region(&ctx, &a, &b, &z)?;
    let lhs = psi11_lhs_num(&ctx, &a, &b, &z)?;
    let rhs = psi11_rhs_num(&ctx, &a, &b, &z)?;
    let lhs = Estimate { value: lhs.value, error: lhs.error };
    Ok(ResidualReport::new(PSI11, instance, Backend::Numeric).params(p.iter()).numeric(&lhs, &rhs, tol))
}

pub fn qbinomial_lhs_num(ctx: &NumericContext, a: &BigComplex, z: &BigComplex) -> Result<BilateralSum> {
    let q = ctx.q();
    let (f, _) = psi11_bounds(ctx.q_f64(), a.abs_f64(), ctx.q_f64(), z.abs_f64());
    // every n < 0 summand carries 1/(q)_n = 0
    eval_bilateral(ctx, |n| psi11_term_num(ctx, a, &q, z, n), f, RatioBound::constant(0.0))
}

pub fn verify_qbinomial_numeric(instance: &str, p: &NumParams, prec: u32, tol: f64) -> Result<ResidualReport> {
    let ctx = p.context(prec, tol)?;
    let (a, z) = (p.get(&ctx, "a")?, p.get(&ctx, "z")?);
    if z.abs_f64() >= 1.0 {
        return Err(Error::RegionViolation("q-binomial theorem needs |z| < 1".into()));
    }
    let lhs = qbinomial_lhs_num(&ctx, &a, &z)?;
    let rhs = poch_ratio(&ctx, &[&a * &z], std::slice::from_ref(&z))?;
    let lhs = Estimate { value: lhs.value, error: lhs.error };
    Ok(ResidualReport::new(QBINOMIAL, instance, Backend::Numeric).params(p.iter()).numeric(&lhs, &rhs, tol))
}

pub fn ring_for(order: i64) -> Arc<Ring> {
    Ring::new(symbols(), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GaussianRational, LaurentPoly, Monomial, QLaurentSeries};

    #[test]
    fn canonical_scheme_small_order() {
        let r = verify_1psi1_formal("t", &Psi11Formal::canonical(), 8).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.residual, "0");
    }

    #[test]
    fn scheme_without_positive_order_is_rejected() {
        let p = Psi11Formal { a: QTerm::symbol(0, 0), b: QTerm::symbol(1, 1), z: QTerm::symbol(2, 1) };
        assert!(matches!(verify_1psi1_formal("t", &p, 5), Err(Error::RegionViolation(_))));
    }

    #[test]
    fn negative_summands_have_valuation_m_minus_one() {
        let p = Psi11Formal::canonical();
        for m in 1..8 {
            let v = psi11_term(&p.a, &p.b, &p.z, -m).unwrap().valuation().unwrap();
            assert_eq!(v, Some(m - 1));
        }
    }

    #[test]
    fn b_equal_q_matches_qbinomial_termwise() {
        let ring = ring_for(10);
        let a = QTerm::symbol(0, 0);
        let z = QTerm::symbol(2, 1);
        let q = QTerm::q_power(1);
        for n in 0..6 {
            let x = psi11_term(&a, &q, &z, n).unwrap().expand(&ring, 10).unwrap();
            let y = PochProduct::from_term(z.pow(n).unwrap()).poch(&a, n).over_poch(&q, n).expand(&ring, 10).unwrap();
            assert!(x.agree_to_order(&y, 10).unwrap().equal);
        }
        for n in -4..0 {
            assert_eq!(psi11_term(&a, &q, &z, n).unwrap().valuation().unwrap(), None);
        }
    }

    #[test]
    fn qbinomial_special_cases() {
        let ring = ring_for(10);
        let z = QTerm::symbol(2, 1);
        // a = q: (qz)_∞/(z)_∞ = 1/(1 - z)
        let q = QTerm::q_power(1);
        let lhs = formal_unilateral(&ring, 10, 1, |n| psi11_term(&q, &q, &z, n)).unwrap();
        let geo = QLaurentSeries::one(&ring, 10).div_one_minus(&z).unwrap();
        assert!(lhs.agree_to_order(&geo, 10).unwrap().equal);
        // a = 0: Euler
        let zero = QTerm::scalar(GaussianRational::zero());
        let lhs = formal_unilateral(&ring, 10, 1, |n| psi11_term(&zero, &q, &z, n)).unwrap();
        let euler = PochProduct::one().over_inf(&z).expand(&ring, 10).unwrap();
        assert!(lhs.agree_to_order(&euler, 10).unwrap().equal);
        assert_eq!(lhs.coeff(1), LaurentPoly::term(1.into(), Monomial::var(2, 1)));
    }

    #[test]
    fn ismail_specialisations() {
        for k in 0..3 {
            let r = verify_ismail(k, 12).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn qbinomial_formal() {
        let r = verify_qbinomial_formal("t", &QTerm::symbol(0, 0), &QTerm::symbol(2, 1), 12).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn numeric_qbinomial() {
        let p = NumParams::new([("q", "0.3"), ("a", "-1.5"), ("z", "0.6")]);
        assert!(verify_qbinomial_numeric("t", &p, 256, 1e-25).unwrap().pass);
    }

    #[test]
    fn numeric_instance() {
        let p = NumParams::new([("q", "0.3"), ("a", "2"), ("b", "0.1"), ("z", "0.4")]);
        let r = verify_1psi1_numeric("t", &p, 256, 1e-25).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn numeric_region_is_enforced() {
        let p = NumParams::new([("q", "0.3"), ("a", "2"), ("b", "1"), ("z", "0.4")]);
        assert!(matches!(verify_1psi1_numeric("t", &p, 256, 1e-25), Err(Error::RegionViolation(_))));
    }
}
