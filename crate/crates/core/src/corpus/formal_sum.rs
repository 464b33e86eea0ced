//! Truncated evaluation of formal bilateral and lattice sums.

use std::sync::Arc;

use crate::algebra::{QLaurentSeries, Ring};
use crate::error::{Error, Result};
use crate::numeric::shell_points;
use crate::qpoch::PochProduct;

/// Consecutive summands at or above the truncation order needed to stop a direction.
const QUIET: usize = 3;
/// Steps over which a non-increasing valuation counts as divergence.
const WINDOW: usize = 6;

/// `Σ_{n∈ℤ} term(n)` to absolute order `order`.
///
/// Each direction stops once `|n| >= stable_from` and the last few summands
/// have valuation at least `order` (or vanish). A valuation that has stopped
/// growing below `order` is a `FormalDivergence`.
pub fn formal_bilateral<F>(ring: &Arc<Ring>, order: i64, stable_from: i64, term: F) -> Result<QLaurentSeries>
where
    F: Fn(i64) -> Result<PochProduct> + Sync,
{
    let (f, b) = rayon::join(
        || formal_direction(ring, order, stable_from, 1, 0, &term),
        || formal_direction(ring, order, stable_from, -1, 1, &term),
    );
    f?.add(&b?)
}

/// One-sided sum `Σ_{n>=0} term(n)`.
pub fn formal_unilateral<F>(ring: &Arc<Ring>, order: i64, stable_from: i64, term: F) -> Result<QLaurentSeries>
where
    F: Fn(i64) -> Result<PochProduct>,
{
    formal_direction(ring, order, stable_from, 1, 0, &term)
}

fn formal_direction<F>(
    ring: &Arc<Ring>,
    order: i64,
    stable_from: i64,
    sign: i64,
    first: i64,
    term: &F,
) -> Result<QLaurentSeries>
where
    F: Fn(i64) -> Result<PochProduct>,
{
    let mut sum = QLaurentSeries::zero(ring, order);
    let mut quiet = 0;
    let mut history: Vec<i64> = Vec::new();
    let mut m = first;
    loop {
        let n = sign * m;
        let p = term(n)?;
        match p.valuation()? {
            Some(v) if v < order => {
                quiet = 0;
                sum = sum.add(&p.expand(ring, order)?)?;
                history.push(v);
                if m >= stable_from && history.len() > WINDOW {
                    let back = history[history.len() - 1 - WINDOW];
                    if v <= back {
                        return Err(Error::FormalDivergence(format!(
                            "summand valuation stays at {v} (was {back} {WINDOW} steps earlier) at n = {n}"
                        )));
                    }
                }
            }
            _ => quiet += 1,
        }
        if m >= stable_from && quiet >= QUIET {
            return Ok(sum);
        }
        m += 1;
    }
}

/// `Σ_{r∈ℤ^dim} term(r)` to absolute order `order`, by sup-norm shells.
///
/// Stops once three consecutive shells beyond `stable_from` contribute
/// nothing below the order; a shell minimum valuation that stops growing is a
/// `FormalDivergence`.
pub fn formal_lattice<F>(ring: &Arc<Ring>, order: i64, dim: usize, stable_from: i64, term: F) -> Result<QLaurentSeries>
where
    F: Fn(&[i64]) -> Result<PochProduct> + Sync,
{
    use rayon::prelude::*;
    let mut sum = QLaurentSeries::zero(ring, order);
    let mut quiet = 0;
    let mut mins: Vec<i64> = Vec::new();
    for r in 0.. {
        let pts = shell_points(dim, r);
        let parts: Vec<Option<(i64, QLaurentSeries)>> = pts
            .par_iter()
            .map(|p| {
                let t = term(p)?;
                match t.valuation()? {
                    Some(v) if v < order => Ok(Some((v, t.expand(ring, order)?))),
                    _ => Ok(None),
                }
            })
            .collect::<Result<_>>()?;
        let mut shell_min = i64::MAX;
        for (v, s) in parts.into_iter().flatten() {
            shell_min = shell_min.min(v);
            sum = sum.add(&s)?;
        }
        if shell_min == i64::MAX {
            quiet += 1;
            if r >= stable_from && quiet >= QUIET {
                return Ok(sum);
            }
            continue;
        }
        quiet = 0;
        mins.push(shell_min);
        if r >= stable_from && mins.len() > WINDOW {
            let back = mins[mins.len() - 1 - WINDOW];
            if shell_min <= back {
                return Err(Error::FormalDivergence(format!(
                    "lattice shell {r} still has valuation {shell_min} (was {back} {WINDOW} shells earlier)"
                )));
            }
        }
    }
    unreachable!()
}
