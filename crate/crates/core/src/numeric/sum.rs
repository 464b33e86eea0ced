use rayon::prelude::*;
use serde::Serialize;

use super::{BigComplex, NumericContext};
use crate::error::{Error, Result};

/// A value together with an upper bound on its absolute error.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: BigComplex,
    pub error: f64,
}

/// Certificate that the omitted tail of a series is small: every ratio of
/// consecutive terms past `start` is at most `ratio`, so the tail is bounded
/// by `term_bound · ratio / (1 - ratio)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailCertificate {
    pub start: i64,
    pub ratio: f64,
    pub term_bound: f64,
    pub tail_bound: f64,
    /// False when the ratio is an asymptotic limit checked against observed
    /// ratios rather than an a-priori majorant.
    pub rigorous: bool,
}

/// Source of the geometric ratio used for a tail certificate in one direction.
pub enum RatioBound<'a> {
    /// `f(m)` bounds `|s_{i+1} / s_i|` for every `i >= m`, where `s_m` is the
    /// `m`-th term along the direction. Must be non-increasing in `m`.
    Rigorous(Box<dyn Fn(u64) -> f64 + Sync + 'a>),
    /// The limit of `|s_{i+1} / s_i|`. Used with the relative `margin` once the
    /// last `settle` observed ratios lie below `limit·(1 + margin)`.
    Asymptotic { limit: f64, margin: f64, settle: usize },
}

impl<'a> RatioBound<'a> {
    pub fn rigorous(f: impl Fn(u64) -> f64 + Sync + 'a) -> Self {
        RatioBound::Rigorous(Box::new(f))
    }

    pub fn constant(rho: f64) -> Self {
        RatioBound::Rigorous(Box::new(move |_| rho))
    }

    pub fn asymptotic(limit: f64) -> Self {
        RatioBound::Asymptotic { limit, margin: 0.25, settle: 4 }
    }
}

#[derive(Clone, Debug)]
pub struct BilateralSum {
    pub value: BigComplex,
    /// Both tail bounds plus accumulated rounding.
    pub error: f64,
    pub forward: TailCertificate,
    pub backward: TailCertificate,
}

const MAX_TERMS: u64 = 200_000;

/// `(a)_∞ = ∏_{k≥0} (1 - a q^k)` with relative truncation error below the work tolerance.
///
/// The tail `∏_{k≥K}` differs from 1 by at most `exp(|a| q^K / (1 - q)) - 1`.
pub fn eval_poch_infinite(ctx: &NumericContext, a: &BigComplex) -> Result<Estimate> {
    if a.is_zero() {
        return Ok(Estimate { value: ctx.one(), error: 0.0 });
    }
    let tol = ctx.work_tol();
    let q = ctx.q();
    let qf = ctx.q_f64();
    let mut term = a.clone();
    let mut prod = ctx.one();
    let mut k: u64 = 0;
    loop {
        let f = term.one_minus();
        if f.is_zero() {
            return Ok(Estimate { value: ctx.zero(), error: 0.0 });
        }
        let fabs = f.abs_f64();
        if fabs < tol {
            return Err(Error::FactorNearZero(format!("|1 - a q^{k}| = {fabs:e}")));
        }
        prod = &prod * &f;
        term = &term * &q;
        k += 1;
        let s = term.abs_f64() / (1.0 - qf);
        if s < tol {
            let rel = s.exp_m1() + ctx.rounding(2 * k);
            let err = prod.abs_f64() * rel;
            return Ok(Estimate { value: prod, error: err });
        }
        if k > MAX_TERMS {
            return Err(Error::NonConvergentTail("infinite product did not reach tolerance".into()));
        }
    }
}

struct Direction<'a> {
    name: &'static str,
    sign: i64,
    first: u64,
    bound: RatioBound<'a>,
}

/// `Σ_{n∈ℤ} term(n)`, truncated in each direction once the certified tail
/// falls below a quarter of the work tolerance.
///
/// Observed term ratios are checked against the certificate; a contradiction
/// aborts instead of returning a silently wrong sum.
pub fn eval_bilateral<F>(
    ctx: &NumericContext,
    term: F,
    forward: RatioBound<'_>,
    backward: RatioBound<'_>,
) -> Result<BilateralSum>
where
    F: Fn(i64) -> Result<BigComplex> + Sync,
{
    let tol = ctx.work_tol();
    let fwd = Direction { name: "forward", sign: 1, first: 0, bound: forward };
    let bwd = Direction { name: "backward", sign: -1, first: 1, bound: backward };
    let (f, b) = rayon::join(|| sum_direction(ctx, &term, &fwd, tol), || sum_direction(ctx, &term, &bwd, tol));
    let (fv, fe, fc) = f?;
    let (bv, be, bc) = b?;
    Ok(BilateralSum { value: &fv + &bv, error: fe + be, forward: fc, backward: bc })
}

fn sum_direction<F>(
    ctx: &NumericContext,
    term: &F,
    dir: &Direction<'_>,
    tol: f64,
) -> Result<(BigComplex, f64, TailCertificate)>
where
    F: Fn(i64) -> Result<BigComplex>,
{
    let mut sum = ctx.zero();
    let mut mass = 0.0f64;
    let mut prev: Option<f64> = None;
    let mut settled = 0usize;
    let mut m = dir.first;
    loop {
        let n = dir.sign * m as i64;
        let t = term(n)?;
        let a = t.abs_f64();
        sum = &sum + &t;
        mass += a * (m as f64 + 8.0);

        let observed = prev.filter(|&p| p > 0.0).map(|p| a / p);
        let rho = match &dir.bound {
            RatioBound::Rigorous(f) => {
                if let (Some(obs), true) = (observed, m > dir.first) {
                    let allowed = f(m - 1);
                    if obs > allowed * (1.0 + 1e-9) {
                        return Err(Error::CertificateContradicted { index: n, observed: obs, bound: allowed });
                    }
                }
                Some(f(m))
            }
            RatioBound::Asymptotic { limit, margin, settle } => {
                let cap = limit * (1.0 + margin);
                match observed {
                    Some(obs) if obs <= cap => settled += 1,
                    Some(obs) if settled >= *settle => {
                        return Err(Error::CertificateContradicted { index: n, observed: obs, bound: cap });
                    }
                    Some(_) => settled = 0,
                    None if a == 0.0 => settled += 1,
                    None => {}
                }
                (settled >= *settle).then_some(cap)
            }
        };
        if let Some(rho) = rho {
            if rho < 1.0 {
                let tail = a * rho / (1.0 - rho);
                if tail < tol / 4.0 {
                    let cert = TailCertificate {
                        start: n,
                        ratio: rho,
                        term_bound: a,
                        tail_bound: tail,
                        rigorous: matches!(dir.bound, RatioBound::Rigorous(_)),
                    };
                    let err = tail + mass * ctx.rounding(0);
                    return Ok((sum, err, cert));
                }
            }
        }
        prev = Some(a);
        m += 1;
        if m > MAX_TERMS {
            return match rho {
                Some(r) if r < 1.0 => Err(Error::NonConvergentTail(format!("{} tail above tolerance", dir.name))),
                _ => Err(Error::DivergentDirection(dir.name)),
            };
        }
        if m > 2000 && rho.map_or(true, |r| r >= 1.0) {
            return Err(Error::DivergentDirection(dir.name));
        }
    }
}

#[derive(Clone, Debug)]
pub struct LatticeSum {
    pub value: BigComplex,
    /// Mass of the last two shells; an empirical, not certified, error estimate.
    pub error: f64,
    pub radius: i64,
    pub points: u64,
}

/// Sum over `ℤ^dim` by sup-norm shells until two consecutive shells carry
/// total modulus below a tenth of the work tolerance.
///
/// Shell points are evaluated in parallel and reduced in a fixed order.
pub fn eval_lattice<F>(ctx: &NumericContext, dim: usize, term: F, max_radius: i64) -> Result<LatticeSum>
where
    F: Fn(&[i64]) -> Result<BigComplex> + Sync,
{
    let tol = ctx.work_tol();
    let mut sum = ctx.zero();
    let mut quiet = 0;
    let mut last = [0.0f64; 2];
    let mut points = 0u64;
    for r in 0..=max_radius {
        let shell = shell_points(dim, r);
        points += shell.len() as u64;
        let values: Vec<BigComplex> = shell.par_iter().map(|p| term(p)).collect::<Result<_>>()?;
        let mut mass = 0.0;
        for v in &values {
            mass += v.abs_f64();
            sum = &sum + v;
        }
        last = [last[1], mass];
        if mass < tol / 10.0 {
            quiet += 1;
            if quiet >= 2 {
                return Ok(LatticeSum { value: sum, error: last[0] + last[1], radius: r, points });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonStabilisedLatticeSum(max_radius))
}

/// Points of `ℤ^dim` with sup-norm exactly `r`, in lexicographic order.
pub(crate) fn shell_points(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut p = vec![-r; dim];
    if dim == 0 {
        if r == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    loop {
        if p.iter().any(|x| x.abs() == r) {
            out.push(p.clone());
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if p[i] < r {
                p[i] += 1;
                for x in &mut p[i + 1..] {
                    *x = -r;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> NumericContext {
        NumericContext::parse(256, "1/2", 1e-30).unwrap()
    }

    #[test]
    fn poch_of_zero_and_one() {
        let c = ctx();
        let z = eval_poch_infinite(&c, &c.zero()).unwrap();
        assert_eq!(z.value, c.one());
        let o = eval_poch_infinite(&c, &c.one()).unwrap();
        assert!(o.value.is_zero());
    }

    #[test]
    fn near_zero_factor_is_reported() {
        let c = ctx();
        let a = &c.num(2.0) * &c.one();
        let a = &a + &c.num(1e-50);
        // 1 - a q = 1 - (2 + ε)/2 ≈ -ε/2
        assert!(matches!(eval_poch_infinite(&c, &a), Err(Error::FactorNearZero(_))));
    }

    #[test]
    fn geometric_bilateral() {
        let c = NumericContext::parse(256, "0.3", 1e-30).unwrap();
        let z = c.num(0.4);
        let w = c.num(0.05);
        let term = |n: i64| {
            Ok(if n >= 0 { z.pow_i64(n).unwrap() } else { w.pow_i64(-n).unwrap() })
        };
        let s = eval_bilateral(&c, term, RatioBound::constant(0.4), RatioBound::constant(0.05)).unwrap();
        // 1/(1-z) + w/(1-w)
        let expect = 1.0 / 0.6 + 0.05 / 0.95;
        assert!((s.value.re().to_f64() - expect).abs() < 1e-14);
        assert!(s.error < 1e-40);
        assert!(s.forward.rigorous && s.backward.rigorous);
    }

    #[test]
    fn zero_terms_sum_to_zero() {
        let c = ctx();
        let s = eval_bilateral(&c, |_| Ok(c.zero()), RatioBound::constant(0.5), RatioBound::constant(0.5)).unwrap();
        assert!(s.value.is_zero());
    }

    #[test]
    fn divergent_direction_detected() {
        let c = ctx();
        let r = eval_bilateral(&c, |_| Ok(c.one()), RatioBound::constant(1.5), RatioBound::constant(0.5));
        assert!(matches!(r, Err(Error::DivergentDirection("forward"))));
    }

    #[test]
    fn contradicted_certificate_aborts() {
        let c = ctx();
        let r = eval_bilateral(
            &c,
            |n| Ok(c.num(0.9f64.powi(n.abs() as i32))),
            RatioBound::constant(0.5),
            RatioBound::constant(0.95),
        );
        assert!(matches!(r, Err(Error::CertificateContradicted { .. })));
    }

    #[test]
    fn shells_partition_the_box() {
        let total: usize = (0..=3).map(|r| shell_points(2, r).len()).sum();
        assert_eq!(total, 49);
        assert_eq!(shell_points(3, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn lattice_product_of_geometrics() {
        let c = NumericContext::parse(256, "0.5", 1e-30).unwrap();
        let x = c.num(0.3);
        let s = eval_lattice(&c, 2, |p| Ok(x.pow_i64(p[0].abs() + p[1].abs()).unwrap()), 200).unwrap();
        let one_dim = 1.3 / 0.7;
        assert!((s.value.re().to_f64() - one_dim * one_dim).abs() < 1e-13);
    }
}
