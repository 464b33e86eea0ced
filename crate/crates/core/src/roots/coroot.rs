//! The coroot-lattice form of the affine Poincaré identity, numerically.

use super::poincare::t_height;
use super::system::{ip, Orbit, RootSystemData};
use crate::corpus::psi11::psi11_rhs_num;
use crate::corpus::{Backend, NumParams, ResidualReport};
use crate::error::{Error, Result};
use crate::numeric::{eval_lattice, BigComplex, Estimate, NumericContext};
use crate::qpoch::numeric::{est_mul, poch, poch_ratio};

pub const MACDONALD_COROOT: &str = "macdonald-coroot";

/// Largest sup-norm radius tried before giving up on stabilisation.
pub const MAX_RADIUS: i64 = 160;

/// Numeric `t_long`, `t_short` and the ambient coordinates `xᵢ = e^{εᵢ}`.
pub struct CorootPoint {
    pub t_long: BigComplex,
    pub t_short: BigComplex,
    pub x: Vec<BigComplex>,
}

impl CorootPoint {
    /// Reads `t` (or `t_long`/`t_short`) and `x1..x{dim}`.
    pub fn from_params(ctx: &NumericContext, sys: &RootSystemData, p: &NumParams) -> Result<Self> {
        let (t_long, t_short) = if p.raw("t").is_ok() {
            let t = p.get(ctx, "t")?;
            (t.clone(), t)
        } else {
            (p.get(ctx, "t_long")?, p.get(ctx, "t_short")?)
        };
        if sys.is_simply_laced() && t_long != t_short {
            return Err(Error::InvalidConfig("simply-laced systems take a single t".into()));
        }
        let x = (1..=sys.dim).map(|i| p.get(ctx, &format!("x{i}"))).collect::<Result<_>>()?;
        Ok(Self { t_long, t_short, x })
    }

    fn t(&self, o: Orbit) -> &BigComplex {
        match o {
            Orbit::Long => &self.t_long,
            Orbit::Short => &self.t_short,
        }
    }

    fn exp(&self, v: &[i64]) -> Result<BigComplex> {
        let mut acc = BigComplex::one(self.x[0].prec());
        for (xi, &k) in self.x.iter().zip(v) {
            acc = &acc * &xi.pow_i64(k).ok_or_else(|| Error::ZeroDivisor("x = 0".into()))?;
        }
        Ok(acc)
    }
}

/// The summand `∏_{α∈R} (q e^α)_{⟨α,γ⟩} / (t_α q e^α)_{⟨α,γ⟩}` with `γ` given in the coroot basis.
pub struct CorootSummand {
    factors: Vec<(Vec<i64>, BigComplex, BigComplex)>,
}

impl CorootSummand {
    pub fn new(ctx: &NumericContext, sys: &RootSystemData, pt: &CorootPoint) -> Result<Self> {
        let q = ctx.q();
        let factors = sys
            .roots
            .iter()
            .map(|a| {
                let qe = &q * &pt.exp(a)?;
                let tqe = pt.t(sys.orbit_of(a)) * &qe;
                let pairing = sys.coroot_basis.iter().map(|c| ip(a, c)).collect();
                Ok((pairing, qe, tqe))
            })
            .collect::<Result<_>>()?;
        Ok(Self { factors })
    }

    pub fn term(&self, ctx: &NumericContext, m: &[i64]) -> Result<BigComplex> {
        let mut acc = ctx.one();
        for (pairing, qe, tqe) in &self.factors {
            let k: i64 = pairing.iter().zip(m).map(|(p, mi)| p * mi).sum();
            let num = poch(ctx, qe, k)?;
            let den = poch(ctx, tqe, k)?;
            acc = (&acc * &num).div(&den).ok_or_else(|| Error::FactorNearZero("(t q e^α)_k".into()))?;
        }
        Ok(acc)
    }
}

/// Lattice sum by sup-norm shells in the coroot basis.
pub fn coroot_lhs(ctx: &NumericContext, sys: &RootSystemData, pt: &CorootPoint) -> Result<Estimate> {
    let summand = CorootSummand::new(ctx, sys, pt)?;
    let s = eval_lattice(ctx, sys.rank, |m| summand.term(ctx, m), MAX_RADIUS)?;
    Ok(Estimate { value: s.value, error: s.error })
}

/// Product side; `q^{χ(α∈B)}` enters only for simple roots.
pub fn coroot_rhs(ctx: &NumericContext, sys: &RootSystemData, pt: &CorootPoint) -> Result<Estimate> {
    let q = ctx.q();
    let mut acc = Estimate { value: ctx.one(), error: 0.0 };
    for (a, o) in sys.positive.iter().zip(&sys.orbits) {
        let (el, es) = t_height(sys, a)?;
        let pw = |x: &BigComplex, k: i64| x.pow_i64(k).ok_or_else(|| Error::ZeroDivisor("t = 0".into()));
        let th = &pw(&pt.t_long, el)? * &pw(&pt.t_short, es)?;
        let ta = pt.t(*o);
        let chi = if sys.simple.contains(a) { q.clone() } else { ctx.one() };
        let e = pt.exp(a)?;
        let ei = e.inv().ok_or_else(|| Error::ZeroDivisor("e^α = 0".into()))?;
        let div = |x: &BigComplex, y: &BigComplex| x.div(y).ok_or_else(|| Error::ZeroDivisor("t = 0".into()));
        let f = poch_ratio(
            ctx,
            &[&(ta * &th) * &q, div(&(&th * &chi), ta)?, &q * &e, &q * &ei],
            &[&th * &q, th.clone(), &(ta * &q) * &e, &(ta * &q) * &ei],
        )?;
        acc = est_mul(&acc, &f);
    }
    Ok(acc)
}

fn check_region(ctx: &NumericContext, pt: &CorootPoint) -> Result<()> {
    let q = ctx.q_f64();
    for t in [&pt.t_long, &pt.t_short] {
        let m = t.abs_f64();
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::RegionViolation(format!("need 0 < |t| < 1, got {m}")));
        }
    }
    for x in &pt.x {
        if x.is_zero() {
            return Err(Error::RegionViolation("x must be nonzero".into()));
        }
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::RegionViolation("need 0 < q < 1".into()));
    }
    Ok(())
}

pub fn verify_macdonald_coroot(instance: &str, sys: &RootSystemData, p: &NumParams, prec: u32, tol: f64) -> Result<ResidualReport> {
    let ctx = p.context(prec, tol)?;
    let pt = CorootPoint::from_params(&ctx, sys, p)?;
    check_region(&ctx, &pt)?;
    let lhs = coroot_lhs(&ctx, sys, &pt)?;
    let rhs = coroot_rhs(&ctx, sys, &pt)?;
    let mut r = ResidualReport::new(MACDONALD_COROOT, instance, Backend::Numeric)
        .param("system", sys.name())
        .params(p.iter())
        .numeric(&lhs, &rhs, tol);
    if sys.rank == 1 {
        let gap = a1_psi11_gap(&ctx, sys, &pt, &lhs)?;
        if gap.abs_f64() >= tol {
            r.pass = false;
            r.outcome = Some(format!("A1 sum and the 1psi1 product differ by {}", gap.abs_f64()));
        }
    }
    Ok(r)
}

/// With `x = e^α`: `₁ψ₁ RHS(x/t, tx, t) = LHS · (1 - x)(1 + t)/(1 - tx)`.
pub fn a1_psi11_gap(ctx: &NumericContext, sys: &RootSystemData, pt: &CorootPoint, lhs: &Estimate) -> Result<BigComplex> {
    let x = pt.exp(&sys.positive[0])?;
    let t = &pt.t_long;
    let a = x.div(t).ok_or_else(|| Error::ZeroDivisor("t = 0".into()))?;
    let b = t * &x;
    let psi = psi11_rhs_num(ctx, &a, &b, t)?;
    let one = ctx.one();
    let scale = (&x.one_minus() * &(&one + t)).div(&b.one_minus()).ok_or_else(|| Error::SingularFactor("tx = 1".into()))?;
    Ok(&psi.value - &(&lhs.value * &scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::system::{build_root_system, Family};

    #[test]
    fn a1_matches_psi11() {
        let s = build_root_system(Family::A, 1).unwrap();
        let p = NumParams::new([("q", "0.2"), ("t", "0.3"), ("x1", "0.7"), ("x2", "1")]);
        let r = verify_macdonald_coroot("t", &s, &p, 256, 1e-20).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn origin_term_is_one() {
        let s = build_root_system(Family::A, 2).unwrap();
        let ctx = NumericContext::parse(128, "0.2", 1e-20).unwrap();
        let p = NumParams::new([("q", "0.2"), ("t", "0.3"), ("x1", "1.37"), ("x2", "0.91"), ("x3", "0.53")]);
        let pt = CorootPoint::from_params(&ctx, &s, &p).unwrap();
        let summand = CorootSummand::new(&ctx, &s, &pt).unwrap();
        assert_eq!(summand.term(&ctx, &[0, 0]).unwrap(), ctx.one());
    }

    #[test]
    fn a2_and_b2() {
        let a2 = build_root_system(Family::A, 2).unwrap();
        let p = NumParams::new([("q", "0.2"), ("t", "0.3"), ("x1", "1.37"), ("x2", "0.91"), ("x3", "0.53")]);
        let r = verify_macdonald_coroot("t", &a2, &p, 256, 1e-20).unwrap();
        assert!(r.pass, "{r:?}");
        let b2 = build_root_system(Family::B, 2).unwrap();
        let p = NumParams::new([("q", "0.2"), ("t_long", "0.3"), ("t_short", "0.35"), ("x1", "1.23"), ("x2", "0.87")]);
        let r = verify_macdonald_coroot("t", &b2, &p, 256, 1e-20).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
