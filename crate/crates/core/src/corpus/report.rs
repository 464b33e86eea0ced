use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{QLaurentSeries, QTerm, SymbolTable};
use crate::error::Result;
use crate::numeric::{BigComplex, Estimate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Formal,
    Numeric,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Formal => "formal",
            Backend::Numeric => "numeric",
        })
    }
}

/// Outcome of checking one identity instance. Numbers are decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub identity: String,
    pub instance: String,
    pub backend: Backend,
    pub parameters: BTreeMap<String, String>,
    /// Truncation order of a formal comparison.
    #[serde(serialize_with = "int_as_string")]
    pub order: Option<i64>,
    pub tolerance: Option<String>,
    /// Formal: `0` or the offending coefficient. Numeric: `|LHS - RHS|`.
    pub residual: String,
    #[serde(serialize_with = "int_as_string")]
    pub first_difference: Option<i64>,
    pub certified_error: Option<String>,
    pub wall_time: Option<String>,
    pub pass: bool,
    /// Diagnostic for failures and recorded engine outcomes.
    pub outcome: Option<String>,
}

impl ResidualReport {
    pub fn new(identity: &str, instance: &str, backend: Backend) -> Self {
        Self {
            identity: identity.to_owned(),
            instance: instance.to_owned(),
            backend,
            parameters: BTreeMap::new(),
            order: None,
            tolerance: None,
            residual: String::new(),
            first_difference: None,
            certified_error: None,
            wall_time: None,
            pass: false,
            outcome: None,
        }
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.parameters.insert(name.to_owned(), value.to_string());
        self
    }

    pub fn params<I, K, V>(mut self, ps: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: ToString,
        V: ToString,
    {
        for (k, v) in ps {
            self.parameters.insert(k.to_string(), v.to_string());
        }
        self
    }

    pub fn with_outcome(mut self, note: impl Into<String>) -> Self {
        self.outcome = Some(note.into());
        self
    }

    /// Exact coefficient comparison below `order`.
    pub fn formal(mut self, lhs: &QLaurentSeries, rhs: &QLaurentSeries, order: i64) -> Result<Self> {
        let ag = lhs.agree_to_order(rhs, order)?;
        self.order = Some(order);
        self.pass = ag.equal;
        self.first_difference = ag.first_difference;
        self.residual = match ag.difference {
            None => "0".to_owned(),
            Some(d) => d.display(lhs.ring().symbols()).to_string(),
        };
        Ok(self)
    }

    /// Numeric comparison: passes when `|lhs - rhs|` and the certified error are both below `tol`.
    pub fn numeric(self, lhs: &Estimate, rhs: &Estimate, tol: f64) -> Self {
        let diff = &lhs.value - &rhs.value;
        self.numeric_residual(&diff, lhs.error + rhs.error, tol)
    }

    pub fn numeric_residual(mut self, diff: &BigComplex, certified: f64, tol: f64) -> Self {
        let r = diff.abs();
        self.residual = fmt_f(&r);
        self.certified_error = Some(format!("{certified:.3e}"));
        self.tolerance = Some(format!("{tol:e}"));
        self.pass = r < tol && certified < tol;
        self
    }
}

fn int_as_string<S: serde::Serializer>(v: &Option<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(i) => s.serialize_str(&i.to_string()),
        None => s.serialize_none(),
    }
}

fn fmt_f(f: &rug::Float) -> String {
    if f.is_zero() {
        "0".to_owned()
    } else {
        f.to_string_radix(10, Some(6))
    }
}

/// Human-readable `c·m·q^k` using the ring's symbol names.
pub fn describe_term(t: &QTerm, symbols: &SymbolTable) -> String {
    let mut parts = Vec::new();
    let mono = crate::algebra::LaurentPoly::term(t.coeff.clone(), t.mono);
    let m = mono.display(symbols).to_string();
    parts.push(m);
    if t.qpow != 0 {
        parts.push(if t.qpow == 1 { "q".to_owned() } else { format!("q^{}", t.qpow) });
    }
    parts.join("*")
}
