//! Classical root systems in their standard coordinates, with Weyl groups.

use std::collections::BTreeSet;
use std::fmt;

use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orbit {
    Long,
    Short,
}

pub type Vector = Vec<i64>;

/// A root system with `R⁺`, a base, and the simple-root expansion of every
/// positive root. Vectors live in ℤ^m with the standard inner product.
#[derive(Clone, Debug)]
pub struct RootSystemData {
    pub family: Family,
    pub rank: usize,
    /// Ambient dimension: `rank + 1` for type A, `rank` otherwise.
    pub dim: usize,
    pub roots: Vec<Vector>,
    pub positive: Vec<Vector>,
    pub simple: Vec<Vector>,
    /// `⟨αᵢ, αⱼ⟩` over the base.
    pub gram: Vec<Vec<i64>>,
    /// `2αᵢ/⟨αᵢ, αᵢ⟩`, integral in these coordinates.
    pub coroot_basis: Vec<Vector>,
    /// Simple-root coefficients of each positive root, aligned with `positive`.
    pub expansion: Vec<Vec<i64>>,
    pub heights: Vec<i64>,
    /// Height of `α∨` over the simple coroots; equals `heights` when simply laced.
    pub coroot_heights: Vec<i64>,
    pub orbits: Vec<Orbit>,
}

pub fn ip(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(dim: usize, i: usize, s: i64) -> Vector {
    let mut v = vec![0; dim];
    v[i] = s;
    v
}

fn add(a: &[i64], b: &[i64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[i64]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystemData> {
    let supported = match family {
        Family::A => (1..=4).contains(&rank),
        Family::B | Family::C => (2..=3).contains(&rank),
        Family::D => rank == 4,
    };
    if !supported {
        return Err(Error::UnsupportedRootSystem(format!("{family}{rank}")));
    }
    let dim = if family == Family::A { rank + 1 } else { rank };
    let e = |i: usize| unit(dim, i, 1);
    let mut positive = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            positive.push(add(&e(i), &neg(&e(j))));
            if family != Family::A {
                positive.push(add(&e(i), &e(j)));
            }
        }
        match family {
            Family::B => positive.push(e(i)),
            Family::C => positive.push(unit(dim, i, 2)),
            _ => {}
        }
    }
    let mut simple: Vec<Vector> = (0..dim - 1).map(|i| add(&e(i), &neg(&e(i + 1)))).collect();
    match family {
        Family::A => {}
        Family::B => simple.push(e(dim - 1)),
        Family::C => simple.push(unit(dim, dim - 1, 2)),
        Family::D => simple.push(add(&e(dim - 2), &e(dim - 1))),
    }
    let gram = simple.iter().map(|a| simple.iter().map(|b| ip(a, b)).collect()).collect();
    let coroot_basis: Vec<Vector> = simple.iter().map(|a| coroot(a)).collect::<Result<_>>()?;
    let expansion = positive
        .iter()
        .map(|r| expand_in_base(r, &simple))
        .collect::<Result<Vec<_>>>()?;
    let heights = expansion.iter().map(|c| c.iter().sum()).collect();
    let coroot_heights = positive
        .iter()
        .map(|r| Ok(expand_in_base(&coroot(r)?, &coroot_basis)?.iter().sum()))
        .collect::<Result<_>>()?;
    let longest = positive.iter().map(|r| ip(r, r)).max().unwrap_or(0);
    let orbits = positive.iter().map(|r| if ip(r, r) == longest { Orbit::Long } else { Orbit::Short }).collect();
    let mut roots = positive.clone();
    roots.extend(positive.iter().map(|r| neg(r)));
    let sys = RootSystemData { family, rank, dim, roots, positive, simple, gram, coroot_basis, expansion, heights, coroot_heights, orbits };
    sys.check()?;
    Ok(sys)
}

fn coroot(a: &[i64]) -> Result<Vector> {
    let n = ip(a, a);
    a.iter()
        .map(|x| {
            if (2 * x) % n == 0 {
                Ok(2 * x / n)
            } else {
                Err(Error::Internal("non-integral coroot".into()))
            }
        })
        .collect()
}

/// Coefficients of `r` over the base: solve `G c = (⟨r, αⱼ⟩)ⱼ` exactly.
fn expand_in_base(r: &[i64], simple: &[Vector]) -> Result<Vec<i64>> {
    let n = simple.len();
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| Rational::from(ip(&simple[i], &simple[j]))).collect();
            row.push(Rational::from(ip(r, &simple[i])));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| m[i][col] != 0).ok_or_else(|| Error::Internal("singular Gram matrix".into()))?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in &mut m[col] {
            *x /= &p;
        }
        for i in 0..n {
            if i != col && m[i][col] != 0 {
                let f = m[i][col].clone();
                for j in col..=n {
                    let d = Rational::from(&f * &m[col][j]);
                    m[i][j] -= d;
                }
            }
        }
    }
    m.iter()
        .map(|row| {
            let c = &row[n];
            if *c.denom() == 1 {
                c.numer().to_i64().ok_or_else(|| Error::Internal("coefficient overflow".into()))
            } else {
                Err(Error::Internal(format!("{r:?} is not in the root lattice")))
            }
        })
        .collect()
}

impl RootSystemData {
    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn orbit_of(&self, root: &[i64]) -> Orbit {
        let longest = self.positive.iter().map(|r| ip(r, r)).max().unwrap_or(0);
        if ip(root, root) == longest {
            Orbit::Long
        } else {
            Orbit::Short
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        self.orbits.iter().all(|o| *o == Orbit::Long)
    }

    pub fn coxeter_number(&self) -> i64 {
        match self.family {
            Family::A => self.rank as i64 + 1,
            Family::B | Family::C => 2 * self.rank as i64,
            Family::D => 2 * self.rank as i64 - 2,
        }
    }

    /// Degrees of the basic invariants.
    pub fn degrees(&self) -> Vec<i64> {
        let n = self.rank as i64;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<i64> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
        }
    }

    pub fn weyl_order(&self) -> usize {
        self.degrees().iter().product::<i64>() as usize
    }

    fn check(&self) -> Result<()> {
        let expect = match self.family {
            Family::A => self.rank * (self.rank + 1) / 2,
            Family::B | Family::C => self.rank * self.rank,
            Family::D => self.rank * (self.rank - 1),
        };
        let pos: BTreeSet<&Vector> = self.positive.iter().collect();
        let negs: BTreeSet<Vector> = self.positive.iter().map(|r| neg(r)).collect();
        let ok = self.positive.len() == expect
            && pos.len() == expect
            && negs.iter().all(|r| !pos.contains(r))
            && self.expansion.iter().all(|c| c.iter().all(|&x| x >= 0))
            && self.heights.iter().max().copied().unwrap_or(0) + 1 == self.coxeter_number();
        if ok {
            Ok(())
        } else {
            Err(Error::Internal(format!("{} failed its structural checks", self.name())))
        }
    }
}

/// Weyl group as integer matrices acting on column vectors of ℤ^dim.
#[derive(Clone, Debug)]
pub struct WeylGroupData {
    pub dim: usize,
    pub elements: Vec<Vec<Vec<i64>>>,
}

impl WeylGroupData {
    pub fn generate(sys: &RootSystemData) -> Self {
        let dim = sys.dim;
        let identity: Vec<Vec<i64>> = (0..dim).map(|i| unit(dim, i, 1)).collect();
        let gens: Vec<Vec<Vec<i64>>> = sys.simple.iter().map(|a| reflection(a)).collect();
        let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        let mut order = vec![identity.clone()];
        seen.insert(identity);
        let mut head = 0;
        while head < order.len() {
            let w = order[head].clone();
            head += 1;
            for g in &gens {
                let p = matmul(g, &w);
                if seen.insert(p.clone()) {
                    order.push(p);
                }
            }
        }
        Self { dim, elements: order }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn act(w: &[Vec<i64>], v: &[i64]) -> Vector {
        w.iter().map(|row| ip(row, v)).collect()
    }
}

/// `s_α(v) = v - 2⟨v, α⟩/⟨α, α⟩ α` as a matrix.
fn reflection(a: &[i64]) -> Vec<Vec<i64>> {
    let n = ip(a, a);
    let dim = a.len();
    (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j) - 2 * a[i] * a[j] / n).collect())
        .collect()
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_counts() {
        for (f, r, npos, w) in [
            (Family::A, 1, 1, 2),
            (Family::A, 2, 3, 6),
            (Family::A, 3, 6, 24),
            (Family::A, 4, 10, 120),
            (Family::B, 2, 4, 8),
            (Family::B, 3, 9, 48),
            (Family::C, 2, 4, 8),
            (Family::C, 3, 9, 48),
            (Family::D, 4, 12, 192),
        ] {
            let s = build_root_system(f, r).unwrap();
            assert_eq!(s.positive.len(), npos);
            let g = WeylGroupData::generate(&s);
            assert_eq!(g.len(), w, "{}", s.name());
            assert_eq!(s.weyl_order(), w);
            for el in &g.elements {
                for a in &s.roots {
                    assert!(s.roots.contains(&WeylGroupData::act(el, a)));
                }
            }
        }
    }

    #[test]
    fn heights_and_orbits() {
        let a2 = build_root_system(Family::A, 2).unwrap();
        let mut h = a2.heights.clone();
        h.sort();
        assert_eq!(h, vec![1, 1, 2]);
        let b2 = build_root_system(Family::B, 2).unwrap();
        let mut h = b2.heights.clone();
        h.sort();
        assert_eq!(h, vec![1, 1, 2, 3]);
        assert_eq!(b2.orbits.iter().filter(|o| **o == Orbit::Long).count(), 2);
        let i = b2.positive.iter().position(|r| r == &vec![1, 1]).unwrap();
        assert_eq!((b2.heights[i], b2.coroot_heights[i]), (3, 2));
        assert!(build_root_system(Family::D, 3).is_err());
        assert!(build_root_system(Family::A, 5).is_err());
    }
}
