//! Sums of squares: enumeration, divisor formulas and generating functions.

use serde::Serialize;

use crate::algebra::{GaussianRational, LaurentPoly, QLaurentSeries, QTerm, Ring, SymbolTable};
use crate::error::{Error, Result};
use crate::qpoch::PochProduct;

/// `r_s(n)` for `0 <= n <= max_n`; representations are ordered, signed tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepCountTable {
    pub s: u32,
    pub max_n: u64,
    pub counts: Vec<u64>,
}

/// Number of `(x_1, …, x_s) ∈ ℤ^s` with `Σ x_i² = n`.
pub fn rs_bruteforce(n: u64, s: u32) -> u64 {
    fn go(rest: u64, k: u32) -> u64 {
        if k == 0 {
            return (rest == 0) as u64;
        }
        let r = rest.isqrt();
        let mut total = go(rest, k - 1);
        for x in 1..=r {
            total += 2 * go(rest - x * x, k - 1);
        }
        total
    }
    assert!(s >= 1, "at least one square");
    go(n, s)
}

/// `r_s(n)` for every `n <= max_n` by one pruned enumeration of the ball.
pub fn rs_bruteforce_table(s: u32, max_n: u64) -> RepCountTable {
    fn go(acc: u64, k: u32, max_n: u64, counts: &mut [u64], weight: u64) {
        if k == 0 {
            counts[acc as usize] += weight;
            return;
        }
        go(acc, k - 1, max_n, counts, weight);
        let mut x = 1u64;
        while acc + x * x <= max_n {
            go(acc + x * x, k - 1, max_n, counts, 2 * weight);
            x += 1;
        }
    }
    let mut counts = vec![0u64; max_n as usize + 1];
    go(0, s, max_n, &mut counts, 1);
    RepCountTable { s, max_n, counts }
}

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n.isqrt()).filter(move |d| n % d == 0).flat_map(move |d| {
        let e = n / d;
        if e == d {
            vec![d]
        } else {
            vec![d, e]
        }
    })
}

/// `8 Σ_{d | n, 4 ∤ d} d`.
pub fn r4_divisor(n: u64) -> u64 {
    assert!(n >= 1);
    8 * divisors(n).filter(|d| d % 4 != 0).sum::<u64>()
}

/// `4 (d₁(n) - d₃(n))`.
pub fn r2_divisor(n: u64) -> u64 {
    assert!(n >= 1);
    let (d1, d3) = divisors(n).fold((0i64, 0i64), |(a, b), d| match d % 4 {
        1 => (a + 1, b),
        3 => (a, b + 1),
        _ => (a, b),
    });
    u64::try_from(4 * (d1 - d3)).expect("d1 >= d3")
}

fn integer_coeffs(s: &QLaurentSeries, upto: i64) -> Result<Vec<i64>> {
    (0..upto)
        .map(|e| {
            let c = s.coeff(e);
            let g = c.as_scalar().ok_or_else(|| Error::Internal(format!("non-scalar coefficient at q^{e}")))?;
            g.as_integer()
                .and_then(|i| i.to_i64())
                .ok_or_else(|| Error::Internal(format!("non-integer coefficient {g} at q^{e}")))
        })
        .collect()
}

fn scalar_ring(order: i64) -> std::sync::Arc<Ring> {
    Ring::new(SymbolTable::empty(), order)
}

/// `(Σ_m (-1)^m q^{m²})^s` to order `order`.
pub fn signed_theta_power(s: u32, order: i64) -> Result<QLaurentSeries> {
    let ring = scalar_ring(order);
    let r = (order as f64).sqrt() as i64 + 1;
    let base = QLaurentSeries::from_terms(
        &ring,
        order,
        (-r..=r).map(|m| (m * m, LaurentPoly::constant(GaussianRational::from_int(if m % 2 == 0 { 1 } else { -1 })))),
    )?;
    let mut acc = QLaurentSeries::one(&ring, order);
    for _ in 0..s {
        acc = acc.mul(&base)?;
    }
    Ok(acc)
}

/// `((q)_∞ / (-q)_∞)^s` to order `order`.
pub fn eta_quotient_power(s: u32, order: i64) -> Result<QLaurentSeries> {
    let ring = scalar_ring(order);
    let q = QTerm::q_power(1);
    let mq = q.neg();
    let mut p = PochProduct::one();
    for _ in 0..s {
        p = p.inf(&q).over_inf(&mq);
    }
    p.expand(&ring, order)
}

/// Unfold `Σ c_n q^n = Σ r(n) (-q)^n` into `r(n) = (-1)^n c_n`.
pub fn unfold_signed(coeffs: &[i64]) -> Result<Vec<u64>> {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, &c)| {
            let r = if n % 2 == 0 { c } else { -c };
            u64::try_from(r).map_err(|_| Error::Internal(format!("negative count {r} at n = {n}")))
        })
        .collect()
}

/// `r_s(n)` for `n <= max_n` from the generating function, computed both as
/// the lacunary theta power and as the product form; the two must agree.
pub fn rs_from_theta(s: u32, max_n: u64) -> Result<RepCountTable> {
    let order = max_n as i64 + 1;
    let lac = signed_theta_power(s, order)?;
    let prod = eta_quotient_power(s, order)?;
    let ag = lac.agree_to_order(&prod, order)?;
    if !ag.equal {
        return Err(Error::Internal(format!(
            "theta power and product form differ at q^{}",
            ag.first_difference.unwrap_or(-1)
        )));
    }
    let counts = unfold_signed(&integer_coeffs(&lac, order)?)?;
    Ok(RepCountTable { s, max_n, counts })
}

/// Coefficients of `1 + 8 Σ_m (-q)^m Σ_{4∤d|m} d` in powers of `q`, below `order`.
pub fn four_square_divisor_series(order: i64) -> Vec<i64> {
    (0..order)
        .map(|m| {
            if m == 0 {
                1
            } else {
                let sign = if m % 2 == 0 { 1 } else { -1 };
                sign * r4_divisor(m as u64) as i64
            }
        })
        .collect()
}

/// Number of squares the table command supports.
pub const SUPPORTED_SQUARES: [u32; 5] = [1, 2, 3, 4, 6];

/// One row of the sums-of-squares table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquaresRow {
    pub n: u64,
    pub enumeration: u64,
    /// Divisor formula; only `s ∈ {2, 4}` have one here.
    pub formula: Option<u64>,
    pub generating_function: u64,
    pub matches: bool,
}

/// Enumeration against divisor formula and generating function for `n <= max_n`.
pub fn squares_table(s: u32, max_n: u64) -> Result<Vec<SquaresRow>> {
    if !SUPPORTED_SQUARES.contains(&s) {
        return Err(Error::InvalidConfig(format!("unsupported number of squares s = {s} (supported: 1, 2, 3, 4, 6)")));
    }
    let brute = rs_bruteforce_table(s, max_n);
    let gf = rs_from_theta(s, max_n)?;
    Ok((0..=max_n)
        .map(|n| {
            let enumeration = brute.counts[n as usize];
            let formula = match (s, n) {
                (2 | 4, 0) => Some(1),
                (2, _) => Some(r2_divisor(n)),
                (4, _) => Some(r4_divisor(n)),
                _ => None,
            };
            let generating_function = gf.counts[n as usize];
            let matches = enumeration == generating_function && formula.map_or(true, |f| f == enumeration);
            SquaresRow { n, enumeration, formula, generating_function, matches }
        })
        .collect())
}

pub(crate) fn series_integers(s: &QLaurentSeries, upto: i64) -> Result<Vec<i64>> {
    integer_coeffs(s, upto)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_table_rows() {
        let t = squares_table(4, 10).unwrap();
        assert_eq!(t.len(), 11);
        assert!(t.iter().all(|r| r.matches));
        let t = squares_table(2, 0).unwrap();
        assert_eq!(t, vec![SquaresRow { n: 0, enumeration: 1, formula: Some(1), generating_function: 1, matches: true }]);
        assert!(matches!(squares_table(5, 10), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn small_counts() {
        assert_eq!(rs_bruteforce(0, 4), 1);
        assert_eq!(rs_bruteforce(1, 4), 8);
        assert_eq!(rs_bruteforce(3, 2), 0);
        assert_eq!(rs_bruteforce_table(4, 10).counts, (0..=10).map(|n| rs_bruteforce(n, 4)).collect::<Vec<_>>());
    }

    #[test]
    fn divisor_formulas() {
        assert_eq!([r4_divisor(1), r4_divisor(2), r4_divisor(4)], [8, 24, 24]);
        assert_eq!([r2_divisor(1), r2_divisor(3), r2_divisor(5)], [4, 0, 8]);
    }

    #[test]
    fn theta_tables() {
        assert_eq!(rs_from_theta(4, 2).unwrap().counts, vec![1, 8, 24]);
        assert_eq!(rs_from_theta(1, 4).unwrap().counts, vec![1, 2, 0, 0, 2]);
        assert_eq!(rs_from_theta(2, 5).unwrap().counts, vec![1, 4, 4, 0, 4, 8]);
    }

    #[test]
    fn divisor_series_head() {
        assert_eq!(four_square_divisor_series(3), vec![1, -8, 24]);
    }
}
