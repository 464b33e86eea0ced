//! The multi-parameter Poincaré polynomial identity, checked as a polynomial identity.

use rayon::prelude::*;
use rug::Rational;

use super::system::{ip, Orbit, RootSystemData, WeylGroupData};
use crate::algebra::{GaussianRational, LaurentPoly, Monomial, SymbolTable};
use crate::corpus::{Backend, ResidualReport};
use crate::error::{Error, Result};

pub const POINCARE: &str = "poincare";

/// Which formal symbols stand for `t_α`: one shared `t`, or `t_long` and `t_short`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitParams {
    Equal,
    Split,
}

struct Layout {
    dim: usize,
    split: bool,
}

impl Layout {
    fn symbols(&self) -> SymbolTable {
        let mut names: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        if self.split {
            names.push("t_long".into());
            names.push("t_short".into());
        } else {
            names.push("t".into());
        }
        SymbolTable::new(&names).expect("at most 7 symbols")
    }

    fn t_index(&self, o: Orbit) -> usize {
        match (self.split, o) {
            (true, Orbit::Short) => self.dim + 1,
            _ => self.dim,
        }
    }

    fn exp(&self, v: &[i64]) -> Monomial {
        Monomial::from_exponents(v)
    }
}

fn one_minus(c: &GaussianRational, m: Monomial) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    p.add_term(m, &-c);
    p
}

/// Exponents of `𝒕^{ht α}` per orbit: `Σ_{β>0 in orbit} ⟨β, α⟩/‖α‖²`.
pub fn t_height(sys: &RootSystemData, alpha: &[i64]) -> Result<(i64, i64)> {
    let n = ip(alpha, alpha);
    let mut long = Rational::new();
    let mut short = Rational::new();
    for (b, o) in sys.positive.iter().zip(&sys.orbits) {
        let r = Rational::from((ip(b, alpha), n));
        match o {
            Orbit::Long => long += r,
            Orbit::Short => short += r,
        }
    }
    let int = |r: Rational| {
        if *r.denom() == 1 {
            r.numer().to_i64().ok_or_else(|| Error::Internal("exponent overflow".into()))
        } else {
            Err(Error::Internal(format!("fractional t-height {r} for {alpha:?}")))
        }
    };
    Ok((int(long)?, int(short)?))
}

/// Result of one Poincaré check: the report plus `W(𝒕)` as a polynomial in the t-symbols.
pub struct PoincareOutcome {
    pub report: ResidualReport,
    pub polynomial: LaurentPoly,
    pub symbols: SymbolTable,
    /// `W` evaluated at all `t_α = 1`.
    pub at_one: GaussianRational,
}

/// `Σ_w ∏_{α>0} (1 - t_α e^{wα})/(1 - e^{wα})` against the product side.
///
/// With `D = ∏_{α>0} (1 - e^α)(1 - e^{-α})` each Weyl term times `D` is the
/// polynomial `∏_{α>0} (1 - t_α e^{wα})(1 - e^{-wα})`, so the sum is computed
/// without fractions and divided exactly by `D`.
pub fn verify_poincare(sys: &RootSystemData, params: OrbitParams) -> Result<PoincareOutcome> {
    let lay = Layout { dim: sys.dim, split: params == OrbitParams::Split };
    let symbols = lay.symbols();
    let weyl = WeylGroupData::generate(sys);
    let one = GaussianRational::one();
    let t_of = |o: Orbit| Monomial::var(lay.t_index(o), 1);

    let parts: Vec<LaurentPoly> = weyl
        .elements
        .par_iter()
        .map(|w| {
            let mut acc = LaurentPoly::one();
            for (a, o) in sys.positive.iter().zip(&sys.orbits) {
                let wa = WeylGroupData::act(w, a);
                let m = lay.exp(&wa);
                acc = &acc * &one_minus(&one, t_of(*o) * m);
                acc = &acc * &one_minus(&one, m.inverse());
            }
            acc
        })
        .collect();
    let mut numer = LaurentPoly::zero();
    for p in &parts {
        numer.add_assign_ref(p);
    }
    let mut denom = LaurentPoly::one();
    for a in &sys.positive {
        let m = lay.exp(a);
        denom = &denom * &one_minus(&one, m);
        denom = &denom * &one_minus(&one, m.inverse());
    }
    let w_poly = numer.div_exact(&denom)?;
    if w_poly.iter().any(|(m, _)| (0..sys.dim).any(|i| m.exponent(i) != 0)) {
        return Err(Error::Internal("Weyl sum depends on the formal exponentials".into()));
    }

    // product side, cross-multiplied: W·∏(1 - 𝒕^{ht α}) = ∏(1 - t_α 𝒕^{ht α})
    let mut lhs = w_poly.clone();
    let mut rhs = LaurentPoly::one();
    for ((a, o), h) in sys.positive.iter().zip(&sys.orbits).zip(&sys.coroot_heights) {
        let (el, es) = t_height(sys, a)?;
        if !lay.split && el + es != *h {
            return Err(Error::Internal(format!("t-height {} differs from coroot height {h} for {a:?}", el + es)));
        }
        let th = Monomial::var(lay.t_index(Orbit::Long), el) * Monomial::var(lay.t_index(Orbit::Short), es);
        let th = if lay.split { th } else { Monomial::var(lay.dim, el + es) };
        lhs = &lhs * &one_minus(&one, th);
        rhs = &rhs * &one_minus(&one, t_of(*o) * th);
    }
    let diff = &lhs - &rhs;

    let mut at_one = w_poly.clone();
    for i in sys.dim..symbols.len() {
        at_one = at_one.substitute(i, &one, Monomial::ONE)?;
    }
    let at_one = at_one.as_scalar().expect("all symbols substituted");

    let mut report = ResidualReport::new(
        POINCARE,
        &format!("{}-{}", sys.name(), if lay.split { "split" } else { "equal" }),
        Backend::Formal,
    )
    .param("system", sys.name())
    .param("t", if lay.split { "t_long, t_short" } else { "t" })
    .param("W", w_poly.display(&symbols));
    report.pass = diff.is_zero() && at_one == GaussianRational::from_int(weyl.len() as i64);
    report.residual = if diff.is_zero() { "0".into() } else { diff.display(&symbols).to_string() };
    if !report.pass && diff.is_zero() {
        report.outcome = Some(format!("W(1) = {at_one}, expected {}", weyl.len()));
    }
    Ok(PoincareOutcome { report, polynomial: w_poly, symbols, at_one })
}

/// `∏ᵢ (1 + t + ⋯ + t^{dᵢ-1})` in the single symbol at index `t`.
pub fn degree_product(degrees: &[i64], t: usize) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for &d in degrees {
        let mut f = LaurentPoly::zero();
        for k in 0..d {
            f.add_term(Monomial::var(t, k), &GaussianRational::one());
        }
        p = &p * &f;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::system::{build_root_system, Family};

    #[test]
    fn rank_two_and_three() {
        for (f, r) in [(Family::A, 1), (Family::A, 2), (Family::A, 3), (Family::B, 2), (Family::C, 2)] {
            let s = build_root_system(f, r).unwrap();
            let out = verify_poincare(&s, OrbitParams::Equal).unwrap();
            assert!(out.report.pass, "{:?}", out.report);
            assert_eq!(out.polynomial, degree_product(&s.degrees(), s.dim));
        }
        let b2 = build_root_system(Family::B, 2).unwrap();
        let out = verify_poincare(&b2, OrbitParams::Split).unwrap();
        assert!(out.report.pass, "{:?}", out.report);
        assert_eq!(out.at_one, GaussianRational::from_int(8));
    }

    #[test]
    fn a1_is_one_plus_t() {
        let s = build_root_system(Family::A, 1).unwrap();
        let out = verify_poincare(&s, OrbitParams::Equal).unwrap();
        assert_eq!(out.report.parameters["W"], "1*t + 1");
    }
}
