//! The noncommutative ₁ψ₁ sum over a matrix model of a Banach algebra.
//!
//! `b` and `q` are central and stored as scalars; `a` and `z` are square
//! matrices. Norms are Frobenius norms, which dominate the operator norm and
//! are submultiplicative, so every tail bound below is an upper bound.

mod matrix;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use matrix::Mat;

use crate::corpus::{Backend, NumParams, ResidualReport};
use crate::error::{Error, Result};
use crate::numeric::{BigComplex, NumericContext};

pub const NONCOMMUTATIVE: &str = "noncommutative-1psi1";

const MAX_FACTORS: i64 = 20_000;

/// An element of the model algebra: central scalars never become matrices
/// until they meet one.
#[derive(Clone, Debug)]
pub enum AlgebraElement {
    Central(BigComplex),
    Matrix(Mat),
}

impl AlgebraElement {
    pub fn to_matrix(&self, d: usize) -> Mat {
        match self {
            Self::Central(c) => Mat::scalar(d, c),
            Self::Matrix(m) => m.clone(),
        }
    }

    /// Upper bound for the operator norm.
    pub fn norm(&self) -> f64 {
        match self {
            Self::Central(c) => c.abs_f64(),
            Self::Matrix(m) => m.norm(),
        }
    }

    fn is_one(&self) -> bool {
        matches!(self, Self::Central(c) if c.re() == &1 && c.im().is_zero())
    }
}

/// `∏_{i=m}^n a_i` with the three-case convention: `1` when `n = m - 1`,
/// `a_m ⋯ a_n` when `n >= m`, and `a_{m-1}^{-1} ⋯ a_{n+1}^{-1}` when `n < m - 1`.
pub fn ordered_prod<F>(d: usize, prec: u32, m: i64, n: i64, factor: F) -> Result<Mat>
where
    F: Fn(i64) -> Result<Mat>,
{
    let mut acc = Mat::identity(d, prec);
    if n >= m {
        for i in m..=n {
            acc = &acc * &factor(i)?;
        }
    } else if n < m - 1 {
        for i in (n + 1..m).rev() {
            acc = &acc * &factor(i)?.inverse()?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Factors in increasing `i`.
    Plus,
    /// Factors in decreasing `i`.
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsIndex {
    Finite(i64),
    Infinite,
}

/// One bracket of the symbol: `z ∏_s (1 - a_s q^{i-1})(1 - b_s q^{i-1})^{-1}`, `s` ascending.
fn ms_factor(
    ctx: &NumericContext,
    d: usize,
    a: &[AlgebraElement],
    b: &[AlgebraElement],
    z: &AlgebraElement,
    i: i64,
) -> Result<Mat> {
    let qi = ctx.qpow(i - 1);
    let mut f = if z.is_one() { Mat::identity(d, ctx.prec) } else { z.to_matrix(d) };
    for (as_, bs) in a.iter().zip(b) {
        let num = as_.to_matrix(d).one_minus_scaled(&qi);
        let den = match bs {
            AlgebraElement::Central(c) => {
                let v = (c * &qi).one_minus();
                Mat::scalar(d, &v.inv().ok_or_else(|| Error::SingularFactor(format!("1 - b q^{}", i - 1)))?)
            }
            AlgebraElement::Matrix(m) => m.one_minus_scaled(&qi).inverse()?,
        };
        f = &(&f * &num) * &den;
    }
    Ok(f)
}

/// The symbol `[a_1..a_r; b_1..b_r; z]_k^±`.
///
/// `+` multiplies brackets `i = 1..k` left to right (with the inverse
/// convention of [`ordered_prod`] for `k < 0`); `-` uses the reversed order.
/// `k = ∞` requires `z = 1` and is truncated once the remaining brackets are
/// certified to move the product by less than the work tolerance.
pub fn ms_symbol(
    ctx: &NumericContext,
    d: usize,
    a: &[AlgebraElement],
    b: &[AlgebraElement],
    z: &AlgebraElement,
    k: MsIndex,
    sign: Orientation,
) -> Result<Mat> {
    assert_eq!(a.len(), b.len(), "parameter lists must pair up");
    let f = |i: i64| ms_factor(ctx, d, a, b, z, i);
    match k {
        MsIndex::Finite(k) => {
            let mats: Vec<Mat> = if k >= 0 {
                (1..=k).map(f).collect::<Result<_>>()?
            } else {
                (k + 1..=0).rev().map(|i| f(i)?.inverse()).collect::<Result<_>>()?
            };
            let mut acc = Mat::identity(d, ctx.prec);
            match sign {
                Orientation::Plus => mats.iter().for_each(|m| acc = &acc * m),
                Orientation::Minus => mats.iter().for_each(|m| acc = m * &acc),
            }
            Ok(acc)
        }
        MsIndex::Infinite => Ok(ms_infinite(ctx, d, a, b, z, sign)?.0),
    }
}

/// Partial product plus a certified bound on its distance from the infinite product.
fn ms_infinite(
    ctx: &NumericContext,
    d: usize,
    a: &[AlgebraElement],
    b: &[AlgebraElement],
    z: &AlgebraElement,
    sign: Orientation,
) -> Result<(Mat, f64)> {
    if !z.is_one() {
        return Err(Error::NonConvergentProduct("an infinite symbol needs z = 1".into()));
    }
    let q = ctx.q_f64();
    // ‖(1 - a_s Q)(1 - b_s Q)^{-1} - 1‖ <= ‖b_s - a_s‖ Q / (1 - ‖b_s‖ Q) <= 2‖b_s - a_s‖ Q once ‖b_s‖ Q <= 1/2
    let spread: f64 = a.iter().zip(b).map(|(x, y)| (&y.to_matrix(d) - &x.to_matrix(d)).norm()).sum();
    let bmax = b.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let tol = ctx.work_tol() / 8.0;
    let mut acc = Mat::identity(d, ctx.prec);
    for k in 1..=MAX_FACTORS {
        let m = ms_factor(ctx, d, a, b, z, k)?;
        acc = match sign {
            Orientation::Plus => &acc * &m,
            Orientation::Minus => &m * &acc,
        };
        let qk = q.powi(k.min(i32::MAX as i64) as i32);
        if bmax * qk <= 0.5 {
            let eps = (2.0 * spread * qk / (1.0 - q)).exp_m1();
            let err = acc.norm() * eps;
            if err < tol {
                return Ok((acc, err));
            }
        }
    }
    Err(Error::NonConvergentProduct(format!("no certified cutoff within {MAX_FACTORS} factors")))
}

/// Matrix sum with certified error.
pub struct MatEstimate {
    pub value: Mat,
    pub error: f64,
}

/// `Σ_{k∈ℤ} [a; b; z]_k^+` with central `b`.
pub fn nc_psi11_lhs(ctx: &NumericContext, a: &Mat, b: &BigComplex, z: &Mat) -> Result<MatEstimate> {
    let d = a.dim();
    let q = ctx.q_f64();
    let tol = ctx.work_tol() / 4.0;
    let (na, nz, nb) = (a.norm(), z.norm(), b.abs_f64());
    let ainv = a.inverse()?;
    let naz = (&ainv * &z.inverse()?).norm();
    let nai = ainv.norm();
    let ae = [AlgebraElement::Matrix(a.clone())];
    let be = [AlgebraElement::Central(b.clone())];
    let ze = AlgebraElement::Matrix(z.clone());

    let mut sum = Mat::identity(d, ctx.prec);
    let mut mass = 1.0;
    let mut error = 0.0;

    // forward: P_k = P_{k-1} F_k, ‖F_{k+1}‖ <= ‖z‖(1 + ‖a‖q^k)/(1 - |b|q^k)
    let mut p = Mat::identity(d, ctx.prec);
    let mut done = false;
    for k in 1..=MAX_FACTORS {
        p = &p * &ms_factor(ctx, d, &ae, &be, &ze, k)?;
        sum = &sum + &p;
        let n = p.norm();
        mass += n;
        let qk = q.powi(k as i32);
        let den = 1.0 - nb * qk;
        if den > 0.0 {
            let rho = nz * (1.0 + na * qk) / den;
            if rho < 1.0 && n * rho / (1.0 - rho) < tol {
                error += n * rho / (1.0 - rho);
                done = true;
                break;
            }
        }
    }
    if !done {
        return Err(Error::NonConvergentTail("forward direction".into()));
    }

    // backward: P_{-m} = P_{-m+1} F_{-m+1}^{-1},
    // ‖F_{-m}^{-1}‖ <= (|b| + q^{m+1}) ‖a^{-1}z^{-1}‖ / (1 - q^{m+1}‖a^{-1}‖)
    let mut p = Mat::identity(d, ctx.prec);
    done = false;
    for m in 1..=MAX_FACTORS {
        p = &p * &ms_factor(ctx, d, &ae, &be, &ze, 1 - m)?.inverse()?;
        sum = &sum + &p;
        let n = p.norm();
        mass += n;
        let qm = q.powi(m as i32 + 1);
        let den = 1.0 - qm * nai;
        if den > 0.0 {
            let rho = (nb + qm) * naz / den;
            if rho < 1.0 && n * rho / (1.0 - rho) < tol {
                error += n * rho / (1.0 - rho);
                done = true;
                break;
            }
        }
    }
    if !done {
        return Err(Error::NonConvergentTail("backward direction".into()));
    }
    Ok(MatEstimate { value: sum, error: error + mass * ctx.rounding(4 * d as u64) })
}

/// `[za; z; 1]^-_∞ · [qa^{-1}z^{-1}; qza^{-1}z^{-1}; 1]^+_∞ · [bza^{-1}z^{-1}, q; ba^{-1}z^{-1}, b; 1]^-_∞`.
pub fn nc_psi11_rhs(ctx: &NumericContext, a: &Mat, b: &BigComplex, z: &Mat) -> Result<MatEstimate> {
    let d = a.dim();
    let q = ctx.q();
    let one = AlgebraElement::Central(ctx.one());
    let m = |x: Mat| AlgebraElement::Matrix(x);
    let azi = &a.inverse()? * &z.inverse()?;
    let zazi = z * &azi;
    let (p1, e1) = ms_infinite(ctx, d, &[m(z * a)], &[m(z.clone())], &one, Orientation::Minus)?;
    let (p2, e2) = ms_infinite(ctx, d, &[m(azi.scale(&q))], &[m(zazi.scale(&q))], &one, Orientation::Plus)?;
    let (p3, e3) = ms_infinite(
        ctx,
        d,
        &[m(zazi.scale(b)), AlgebraElement::Central(q.clone())],
        &[m(azi.scale(b)), AlgebraElement::Central(b.clone())],
        &one,
        Orientation::Minus,
    )?;
    let (n1, n2, n3) = (p1.norm(), p2.norm(), p3.norm());
    let value = &(&p1 * &p2) * &p3;
    // (P1 + E1)(P2 + E2)(P3 + E3) - P1P2P3, first order plus a crude second-order allowance
    let error = (e1 * n2 * n3 + n1 * e2 * n3 + n1 * n2 * e3) * 1.01 + value.norm() * ctx.rounding(8 * d as u64);
    Ok(MatEstimate { value, error })
}

/// `max{|q|, ‖z‖, ‖ba^{-1}z^{-1}‖} < 1`.
pub fn check_norm_condition(ctx: &NumericContext, a: &Mat, b: &BigComplex, z: &Mat) -> Result<(f64, f64)> {
    let nz = z.norm();
    let nbaz = (&a.inverse()? * &z.inverse()?).scale(b).norm();
    if !(ctx.q_f64() < 1.0 && nz < 1.0 && nbaz < 1.0) {
        return Err(Error::NormConditionViolated(format!("‖z‖ = {nz}, ‖b a^-1 z^-1‖ = {nbaz}")));
    }
    Ok((nz, nbaz))
}

pub fn verify_noncommutative_1psi1(
    instance: &str,
    ctx: &NumericContext,
    a: &Mat,
    b: &BigComplex,
    z: &Mat,
    tol: f64,
) -> Result<ResidualReport> {
    let (nz, nbaz) = check_norm_condition(ctx, a, b, z)?;
    let lhs = nc_psi11_lhs(ctx, a, b, z)?;
    let rhs = nc_psi11_rhs(ctx, a, b, z)?;
    let diff = (&lhs.value - &rhs.value).norm();
    Ok(ResidualReport::new(NONCOMMUTATIVE, instance, Backend::Numeric)
        .param("d", a.dim())
        .param("norm_z", format!("{nz:.6}"))
        .param("norm_b_ainv_zinv", format!("{nbaz:.6}"))
        .numeric_residual(&ctx.num(diff), lhs.error + rhs.error, tol))
}

/// Seeded non-commuting `a`, `z`, rescaled so `‖z‖ = ‖b a^{-1} z^{-1}‖ = 1/2`.
pub fn seeded_matrices(ctx: &NumericContext, d: usize, b: &BigComplex, seed: u64) -> Result<(Mat, Mat)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = |shift: f64| {
        let e = (0..d * d)
            .map(|k| {
                let x: f64 = rng.gen_range(-1.0..1.0);
                let diag = if k % (d + 1) == 0 { shift } else { 0.0 };
                ctx.num(x + diag)
            })
            .collect();
        Mat::from_rows(d, e)
    };
    let a = random(2.0);
    let z = random(1.0);
    let z = z.scale(&ctx.num(0.5 / z.norm()));
    let s = (&a.inverse()? * &z.inverse()?).scale(b).norm();
    // ‖b (ca)^{-1} z^{-1}‖ = s / c
    let a = a.scale(&ctx.num(2.0 * s));
    Ok((a, z))
}

/// Registry entry point: `d` and `seed` pick the matrices, `q` and `b` come from the parameters.
pub fn verify_noncommutative_seeded(instance: &str, d: usize, seed: u64, p: &NumParams, prec: u32, tol: f64) -> Result<ResidualReport> {
    let ctx = p.context(prec, tol)?;
    let b = p.get(&ctx, "b")?;
    let (a, z) = seeded_matrices(&ctx, d, &b, seed)?;
    Ok(verify_noncommutative_1psi1(instance, &ctx, &a, &b, &z, tol)?.params(p.iter()).param("seed", seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::psi11::{psi11_lhs_num, psi11_rhs_num};

    fn ctx() -> NumericContext {
        NumericContext::parse(256, "0.2", 1e-15).unwrap()
    }

    #[test]
    fn ordered_product_conventions() {
        let c = ctx();
        let f = |i: i64| Ok(Mat::scalar(1, &c.num(i as f64 + 1.0)));
        assert_eq!(ordered_prod(1, c.prec, 3, 2, f).unwrap(), Mat::identity(1, c.prec));
        assert_eq!(*ordered_prod(1, c.prec, 1, 2, f).unwrap().get(0, 0), c.num(6.0));
        // n = m - 3: a_{m-1}^{-1} a_{m-2}^{-1}
        let v = ordered_prod(1, c.prec, 5, 2, f).unwrap();
        assert!((&(v.get(0, 0) * &c.num(20.0)) - &c.one()).abs_f64() < 1e-60);
    }

    #[test]
    fn symbol_orientation() {
        let c = ctx();
        let d = 2;
        let (a, z) = seeded_matrices(&c, d, &c.num(0.05), 3).unwrap();
        let ae = [AlgebraElement::Matrix(a)];
        let be = [AlgebraElement::Central(c.num(0.05))];
        let ze = AlgebraElement::Matrix(z);
        assert_eq!(ms_symbol(&c, d, &ae, &be, &ze, MsIndex::Finite(0), Orientation::Plus).unwrap(), Mat::identity(d, c.prec));
        let p = ms_symbol(&c, d, &ae, &be, &ze, MsIndex::Finite(3), Orientation::Plus).unwrap();
        let m = ms_symbol(&c, d, &ae, &be, &ze, MsIndex::Finite(3), Orientation::Minus).unwrap();
        assert!((&p - &m).norm() > 1e-6);
        // scalars: k = 2 unrolled
        let s = |x: f64| AlgebraElement::Central(c.num(x));
        let v = ms_symbol(&c, 1, &[s(0.5)], &[s(0.1)], &s(0.3), MsIndex::Finite(2), Orientation::Plus).unwrap();
        let expect = 0.3 * (1.0 - 0.5) / (1.0 - 0.1) * 0.3 * (1.0 - 0.5 * 0.2) / (1.0 - 0.1 * 0.2);
        assert!((v.get(0, 0).abs_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn scalar_case_is_classical() {
        let c = ctx();
        let (a, b, z) = (c.num(2.0), c.num(0.05), c.num(0.4));
        let lhs = nc_psi11_lhs(&c, &Mat::scalar(1, &a), &b, &Mat::scalar(1, &z)).unwrap();
        let classical = psi11_lhs_num(&c, &a, &b, &z).unwrap();
        assert!((lhs.value.get(0, 0) - &classical.value).abs_f64() < 1e-25);
        let r = verify_noncommutative_1psi1("d1", &c, &Mat::scalar(1, &a), &b, &Mat::scalar(1, &z), 1e-15).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn diagonal_case_is_entrywise() {
        let c = ctx();
        let b = c.num(0.05);
        let (a1, a2, z1, z2) = (c.num(2.0), c.num(1.5), c.num(0.4), c.num(0.3));
        let a = Mat::diagonal(&[a1.clone(), a2.clone()]);
        let z = Mat::diagonal(&[z1.clone(), z2.clone()]);
        let lhs = nc_psi11_lhs(&c, &a, &b, &z).unwrap();
        for (i, (ai, zi)) in [(a1, z1), (a2, z2)].iter().enumerate() {
            let rhs = psi11_rhs_num(&c, ai, &b, zi).unwrap();
            assert!((lhs.value.get(i, i) - &rhs.value).abs_f64() < 1e-25);
        }
        assert!(verify_noncommutative_1psi1("diag", &c, &a, &b, &z, 1e-15).unwrap().pass);
    }

    #[test]
    fn seeded_noncommuting() {
        let p = NumParams::new([("q", "0.2"), ("b", "0.05")]);
        for d in [2, 3] {
            for seed in 0..2 {
                let r = verify_noncommutative_seeded("s", d, seed, &p, 256, 1e-15).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn norm_condition() {
        let c = ctx();
        let a = Mat::scalar(2, &c.num(2.0));
        let z = Mat::scalar(2, &c.num(0.9));
        assert!(matches!(
            verify_noncommutative_1psi1("x", &c, &a, &c.num(0.05), &z, 1e-15),
            Err(Error::NormConditionViolated(_))
        ));
    }
}
