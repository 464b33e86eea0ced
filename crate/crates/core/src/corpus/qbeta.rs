//! The q-beta integral as a Jackson integral, and its reflection case.

use rug::Float;

use super::psi11::psi11_lhs_num;
use super::report::{Backend, ResidualReport};
use super::NumParams;
use crate::error::{Error, Result};
use crate::numeric::{eval_bilateral, BigComplex, Estimate, NumericContext, RatioBound};
use crate::qpoch::numeric::{est_div, est_mul, poch_general, q_gamma, theta};

pub const QBETA: &str = "q-beta-integral";
pub const REFLECTION: &str = "reflection";

/// `∫_0^{c·∞} t^{α-1} / (-t)_{α+β} d_q t`.
///
/// At `t = cqⁿ` the Pochhammer is `(-c)_{α+β}` times a finite product, so
/// summands far out on the negative side never form huge infinite products.
pub fn qbeta_lhs(ctx: &NumericContext, alpha: &BigComplex, beta: &BigComplex, c: &BigComplex) -> Result<Estimate> {
    let s = alpha + beta;
    let qs = ctx.qpow_complex(&s);
    let qa = ctx.qpow_complex(alpha);
    let ca = c.powc(alpha).ok_or_else(|| Error::ZeroDivisor("c = 0".into()))?;
    let base = poch_general(ctx, &-c, &s)?;
    let one = ctx.one();
    let term = |n: i64| {
        // (-cqⁿ)_s / (-c)_s
        let mut rel = ctx.one();
        if n >= 0 {
            for j in 0..n {
                let qj = ctx.qpow(j);
                let num = &one + &(&(c * &qs) * &qj);
                let den = &one + &(c * &qj);
                rel = (&rel * &num).div(&den).ok_or_else(|| Error::FactorNearZero("1 + cq^j".into()))?;
            }
        } else {
            for j in 1..=-n {
                let qj = ctx.qpow(-j);
                let num = &one + &(c * &qj);
                let den = &one + &(&(c * &qs) * &qj);
                rel = (&rel * &num).div(&den).ok_or_else(|| Error::FactorNearZero("1 + cq^{s-j}".into()))?;
            }
        }
        let zn = qa.pow_i64(n).expect("q^α != 0");
        (&ca * &zn).div(&rel).ok_or_else(|| Error::FactorNearZero("(-cqⁿ)_{α+β}".into()))
    };
    let q = ctx.q_f64();
    let (ra, rs) = (alpha.re().to_f64(), s.re().to_f64());
    let cm = c.abs_f64();
    // n → n+1: q^α (1 + c qⁿ)/(1 + c q^{n+α+β})
    let fwd = RatioBound::rigorous(move |m| {
        let den = 1.0 - cm * q.powf(m as f64 + rs);
        if den <= 0.0 {
            f64::INFINITY
        } else {
            q.powf(ra) * (1.0 + cm * q.powi(m as i32)) / den
        }
    });
    // n → n-1 from n = -m: q^{-α} (1 + c q^{-m-1+α+β})/(1 + c q^{-m-1})
    let bwd = RatioBound::rigorous(move |m| {
        let u = cm * q.powf(-(m as f64) - 1.0);
        if u <= 1.0 {
            f64::INFINITY
        } else {
            q.powf(-ra) * (1.0 + u * q.powf(rs)) / (u - 1.0)
        }
    });
    let sum = eval_bilateral(ctx, term, fwd, bwd)?;
    let w = &one - &ctx.q();
    let inner = Estimate { value: &sum.value * &w, error: sum.error * w.abs_f64() };
    est_div(ctx, &inner, &base)
}

/// `c^α θ(-c q^α)/θ(-c) · Γ_q(α)Γ_q(β)/Γ_q(α+β)`.
pub fn qbeta_rhs(ctx: &NumericContext, alpha: &BigComplex, beta: &BigComplex, c: &BigComplex) -> Result<Estimate> {
    let ca = c.powc(alpha).ok_or_else(|| Error::RegionViolation("c = 0".into()))?;
    let qa = ctx.qpow_complex(alpha);
    let t1 = theta(ctx, &-&(c * &qa))?;
    let t2 = theta(ctx, &-c)?;
    let g = est_div(ctx, &est_mul(&q_gamma(ctx, alpha)?, &q_gamma(ctx, beta)?), &q_gamma(ctx, &(alpha + beta))?)?;
    let th = est_div(ctx, &t1, &t2)?;
    let v = est_mul(&th, &g);
    Ok(Estimate { error: v.error * ca.abs_f64(), value: &v.value * &ca })
}

/// The same integral through the ₁ψ₁ sum at `(a, b, z) = (-c, -c q^{α+β}, q^α)`:
/// `(1 - q) c^α/(-c)_{α+β} · Σ (-c)_n/(-cq^{α+β})_n q^{nα}`.
pub fn qbeta_via_psi11(ctx: &NumericContext, alpha: &BigComplex, beta: &BigComplex, c: &BigComplex) -> Result<Estimate> {
    let s = alpha + beta;
    let a = -c;
    let b = &a * &ctx.qpow_complex(&s);
    let z = ctx.qpow_complex(alpha);
    let sum = psi11_lhs_num(ctx, &a, &b, &z)?;
    let ca = c.powc(alpha).ok_or_else(|| Error::RegionViolation("c = 0".into()))?;
    let pre = poch_general(ctx, &a, &s)?;
    let w = &ctx.one() - &ctx.q();
    let scale = (&ca * &w).div(&pre.value).ok_or_else(|| Error::FactorNearZero("(-c)_{α+β}".into()))?;
    Ok(Estimate { value: &sum.value * &scale, error: (sum.error + pre.error) * scale.abs_f64() * 2.0 })
}

fn check_region(alpha: &BigComplex, beta: &BigComplex, c: &BigComplex) -> Result<()> {
    if *alpha.re() <= 0 || *beta.re() <= 0 {
        return Err(Error::RegionViolation("q-beta integral needs Re α, Re β > 0".into()));
    }
    if c.is_zero() {
        return Err(Error::RegionViolation("q-beta integral needs c != 0".into()));
    }
    Ok(())
}

/// Jackson side against the theta/q-gamma side, plus the ₁ψ₁ route as a plumbing check.
pub fn verify_qbeta(identity: &str, instance: &str, p: &NumParams, prec: u32, tol: f64) -> Result<ResidualReport> {
    let ctx = p.context(prec, tol)?;
    let (alpha, beta) = if identity == REFLECTION {
        let x = p.get(&ctx, "x")?;
        let one_minus = &ctx.one() - &x;
        (x, one_minus)
    } else {
        (p.get(&ctx, "alpha")?, p.get(&ctx, "beta")?)
    };
    let c = p.get(&ctx, "c")?;
    check_region(&alpha, &beta, &c)?;
    let lhs = qbeta_lhs(&ctx, &alpha, &beta, &c)?;
    let rhs = qbeta_rhs(&ctx, &alpha, &beta, &c)?;
    let mut r = ResidualReport::new(identity, instance, Backend::Numeric).params(p.iter()).numeric(&lhs, &rhs, tol);
    let via = qbeta_via_psi11(&ctx, &alpha, &beta, &c)?;
    let gap = (&via.value - &lhs.value).abs();
    if gap >= Float::with_val(64, tol) {
        r.pass = false;
        r.outcome = Some(format!("1psi1 route differs from the Jackson sum by {}", gap.to_f64()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acceptance_parameter_sets() {
        for (a, b, c, q) in [("1", "1", "1", "1/3"), ("1/2", "1/2", "1", "1/4"), ("2", "3", "1/2", "1/5")] {
            let p = NumParams::new([("alpha", a), ("beta", b), ("c", c), ("q", q)]);
            let r = verify_qbeta(QBETA, "t", &p, 256, 1e-25).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn reflection_case() {
        let p = NumParams::new([("x", "1/2"), ("c", "1"), ("q", "1/3")]);
        let r = verify_qbeta(REFLECTION, "t", &p, 256, 1e-30).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn region() {
        let p = NumParams::new([("alpha", "-1"), ("beta", "1"), ("c", "1"), ("q", "1/3")]);
        assert!(matches!(verify_qbeta(QBETA, "t", &p, 256, 1e-25), Err(Error::RegionViolation(_))));
    }
}
