//! Identity registry and suite runs.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::guo_schlosser::{self, GUO_SCHLOSSER};
use crate::corpus::kronecker::{self, KRONECKER};
use crate::corpus::psi11::{self, Psi11Formal, PSI11, QBINOMIAL};
use crate::corpus::qbeta::{verify_qbeta, QBETA, REFLECTION};
use crate::corpus::triple::{self, TRIPLE};
use crate::corpus::{Backend, NumParams, ResidualReport};
use crate::algebra::QTerm;
use crate::error::{Error, Result};
use crate::ncalg::{self, Mat, NONCOMMUTATIVE};
use crate::roots::{self, build_root_system, Family, OrbitParams};

/// Registry names in run order.
pub const IDENTITIES: [&str; 12] = [
    PSI11,
    QBINOMIAL,
    TRIPLE,
    QBETA,
    REFLECTION,
    KRONECKER,
    GUO_SCHLOSSER,
    roots::POINCARE,
    roots::MACDONALD_COROOT,
    roots::GUSTAFSON_MILNE,
    roots::NEW_MULTIPLE,
    NONCOMMUTATIVE,
];

/// Formal checks over 2-dimensional lattices are capped at this order.
pub const LATTICE_ORDER_CAP: i64 = 15;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendSelection {
    Formal,
    Numeric,
    Both,
}

impl BackendSelection {
    pub fn includes(self, b: Backend) -> bool {
        matches!((self, b), (Self::Both, _) | (Self::Formal, Backend::Formal) | (Self::Numeric, Backend::Numeric))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    Named(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub backend: BackendSelection,
    pub order: i64,
    pub precision: u32,
    pub tolerance: f64,
    pub seed: u64,
    pub selection: Selection,
    /// Matrix dimension for the noncommutative instances; `None` runs the default set.
    pub dim: Option<usize>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    /// Record wall time per instance. Off makes reports byte-reproducible.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            backend: BackendSelection::Both,
            order: 30,
            precision: 256,
            tolerance: 1e-25,
            seed: 0,
            selection: Selection::Named(Vec::new()),
            dim: None,
            format: OutputFormat::Text,
            out: None,
            timing: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::InvalidConfig(format!("order must be >= 1, got {}", self.order)));
        }
        if self.precision < 64 {
            return Err(Error::InvalidConfig(format!("precision must be >= 64 bits, got {}", self.precision)));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if let Some(d) = self.dim {
            if !(1..=8).contains(&d) {
                return Err(Error::InvalidConfig(format!("matrix dimension must be in 1..=8, got {d}")));
            }
        }
        Ok(())
    }

    /// Selected names in run order, deduplicated; unknown names are an error.
    pub fn identities(&self) -> Result<Vec<&'static str>> {
        match &self.selection {
            Selection::All => Ok(IDENTITIES.to_vec()),
            Selection::Named(names) => {
                let mut out = Vec::new();
                for n in names {
                    let id = IDENTITIES
                        .iter()
                        .find(|&&id| id == n)
                        .ok_or_else(|| Error::UnknownIdentity(n.clone()))?;
                    if !out.contains(id) {
                        out.push(*id);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Tolerance actually applied to `identity`: the configured one, loosened
    /// to the identity's floor where its sums cannot reach tighter.
    pub fn tolerance_for(&self, identity: &str) -> f64 {
        let floor = match identity {
            x if x == roots::MACDONALD_COROOT || x == roots::GUSTAFSON_MILNE || x == roots::NEW_MULTIPLE => 1e-20,
            NONCOMMUTATIVE => 1e-15,
            _ => 0.0,
        };
        self.tolerance.max(floor)
    }
}

type Job = Box<dyn Fn(&RunConfig) -> Result<ResidualReport> + Send + Sync>;

/// One planned check.
pub struct Instance {
    pub identity: &'static str,
    pub name: String,
    pub backend: Backend,
    job: Job,
}

impl Instance {
    fn new<F>(identity: &'static str, name: impl Into<String>, backend: Backend, job: F) -> Self
    where
        F: Fn(&RunConfig) -> Result<ResidualReport> + Send + Sync + 'static,
    {
        Self { identity, name: name.into(), backend, job: Box::new(job) }
    }

    /// Errors become failing reports so one bad instance never hides the rest.
    pub fn run(&self, cfg: &RunConfig) -> ResidualReport {
        let start = Instant::now();
        let result = (self.job)(cfg);
        let elapsed = start.elapsed().as_secs_f64();
        let mut r = match result {
            Ok(r) => r,
            Err(e) => {
                let mut r = ResidualReport::new(self.identity, &self.name, self.backend);
                r.residual = "error".into();
                r.outcome = Some(e.to_string());
                r
            }
        };
        r.identity = self.identity.to_owned();
        r.instance = self.name.clone();
        r.wall_time = cfg.timing.then(|| format!("{elapsed:.3}"));
        r
    }
}

fn np(pairs: &[(&str, &str)]) -> NumParams {
    NumParams::new(pairs.iter().copied())
}

fn numeric<F>(id: &'static str, name: &str, p: NumParams, f: F) -> Instance
where
    F: Fn(&str, &NumParams, u32, f64) -> Result<ResidualReport> + Send + Sync + 'static,
{
    let inst = name.to_owned();
    Instance::new(id, name, Backend::Numeric, move |c: &RunConfig| f(&inst, &p, c.precision, c.tolerance_for(id)))
}

fn instances_for(id: &'static str, cfg: &RunConfig) -> Vec<Instance> {
    use Backend::{Formal, Numeric};
    let mut v = Vec::new();
    match id {
        PSI11 => {
            v.push(Instance::new(id, "canonical", Formal, |c: &RunConfig| {
                psi11::verify_1psi1_formal("canonical", &Psi11Formal::canonical(), c.order)
            }));
            v.push(numeric(id, "real", np(&[("q", "0.3"), ("a", "2"), ("b", "0.1"), ("z", "0.4")]), psi11::verify_1psi1_numeric));
            v.push(numeric(id, "negative-a", np(&[("q", "0.25"), ("a", "-3"), ("b", "0.2"), ("z", "-0.5")]), psi11::verify_1psi1_numeric));
        }
        QBINOMIAL => {
            v.push(Instance::new(id, "canonical", Formal, |c: &RunConfig| {
                psi11::verify_qbinomial_formal("canonical", &QTerm::symbol(0, 0), &QTerm::symbol(2, 1), c.order)
            }));
            for k in 0..=2 {
                v.push(Instance::new(id, format!("ismail-k{k}"), Formal, move |c: &RunConfig| psi11::verify_ismail(k, c.order)));
            }
            v.push(numeric(id, "real", np(&[("q", "0.3"), ("a", "-1.5"), ("z", "0.6")]), psi11::verify_qbinomial_numeric));
        }
        TRIPLE => {
            v.push(Instance::new(id, "s1", Formal, |c: &RunConfig| triple::verify_triple_product_formal("s1", 1, c.order)));
            v.push(Instance::new(id, "psi11-limit", Formal, |c: &RunConfig| triple::verify_triple_from_psi11(c.order)));
            v.push(numeric(id, "z-1", np(&[("q", "1/3"), ("z", "-1")]), triple::verify_triple_product_numeric));
            v.push(numeric(id, "z1", np(&[("q", "1/3"), ("z", "1")]), triple::verify_triple_product_numeric));
        }
        QBETA => {
            for (name, a, b, c, q) in [
                ("set1", "1", "1", "1", "1/3"),
                ("set2", "1/2", "1/2", "1", "1/4"),
                ("set3", "2", "3", "1/2", "1/5"),
            ] {
                let p = np(&[("alpha", a), ("beta", b), ("c", c), ("q", q)]);
                v.push(numeric(id, name, p, |i, p, prec, tol| verify_qbeta(QBETA, i, p, prec, tol)));
            }
        }
        REFLECTION => {
            for (name, x) in [("half", "1/2"), ("third", "1/3")] {
                let p = np(&[("x", x), ("c", "1"), ("q", "1/3")]);
                v.push(numeric(id, name, p, |i, p, prec, tol| verify_qbeta(REFLECTION, i, p, prec, tol)));
            }
        }
        KRONECKER => {
            v.push(Instance::new(id, "cleared", Formal, |c: &RunConfig| kronecker::verify_kronecker_formal(c.order)));
            v.push(Instance::new(id, "four-squares", Formal, |c: &RunConfig| kronecker::verify_kronecker_four_squares(c.order)));
            v.push(Instance::new(id, "two-squares", Formal, |c: &RunConfig| kronecker::verify_kronecker_two_squares(c.order)));
            v.push(numeric(id, "real", np(&[("a", "0.7"), ("b", "0.5"), ("q", "0.2")]), kronecker::verify_kronecker_numeric));
        }
        GUO_SCHLOSSER => {
            let point = np(&[("q", "0.25"), ("a", "3"), ("b", "0.05"), ("z", "0.4"), ("c", "1.2")]);
            v.push(numeric(id, "fixed", point, guo_schlosser::verify_guo_schlosser));
            let c1 = np(&[("q", "0.3"), ("a", "2"), ("b", "0.1"), ("z", "0.4"), ("c", "1")]);
            v.push(numeric(id, "c1", c1, guo_schlosser::verify_guo_schlosser));
            for k in 0..3 {
                let seed = cfg.seed.wrapping_add(k);
                let p = guo_schlosser::seeded_params(seed);
                v.push(numeric(id, &format!("seed{seed}"), p, guo_schlosser::verify_guo_schlosser));
            }
        }
        roots::POINCARE => {
            let systems = [
                (Family::A, 1, OrbitParams::Equal),
                (Family::A, 2, OrbitParams::Equal),
                (Family::A, 3, OrbitParams::Equal),
                (Family::B, 2, OrbitParams::Equal),
                (Family::B, 2, OrbitParams::Split),
                (Family::C, 2, OrbitParams::Equal),
                (Family::B, 3, OrbitParams::Split),
                (Family::C, 3, OrbitParams::Equal),
                (Family::A, 4, OrbitParams::Equal),
            ];
            for (f, n, o) in systems {
                let name = format!("{f:?}{n}-{}", if o == OrbitParams::Split { "split" } else { "equal" });
                v.push(Instance::new(id, name, Formal, move |_: &RunConfig| {
                    Ok(roots::verify_poincare(&build_root_system(f, n)?, o)?.report)
                }));
            }
        }
        roots::MACDONALD_COROOT => {
            let sets: [(&str, Family, usize, &[(&str, &str)]); 3] = [
                ("A1", Family::A, 1, &[("q", "0.2"), ("t", "0.3"), ("x1", "0.7"), ("x2", "1")]),
                ("A2", Family::A, 2, &[("q", "0.2"), ("t", "0.3"), ("x1", "1.37"), ("x2", "0.91"), ("x3", "0.53")]),
                ("B2", Family::B, 2, &[("q", "0.2"), ("t_long", "0.3"), ("t_short", "0.35"), ("x1", "1.23"), ("x2", "0.87")]),
            ];
            for (name, f, n, p) in sets {
                let p = np(p);
                v.push(numeric(id, name, p, move |i, p, prec, tol| {
                    roots::verify_macdonald_coroot(i, &build_root_system(f, n)?, p, prec, tol)
                }));
            }
        }
        roots::GUSTAFSON_MILNE | roots::NEW_MULTIPLE => {
            v.push(Instance::new(id, "n1-reduction", Formal, move |c: &RunConfig| roots::verify_reduction_n1(id, c.order, 5)));
            v.push(Instance::new(id, "n2-formal", Formal, move |c: &RunConfig| {
                let order = c.order.min(LATTICE_ORDER_CAP);
                if id == roots::GUSTAFSON_MILNE {
                    roots::verify_gustafson_milne_formal(2, order)
                } else {
                    roots::verify_new_multiple_formal(2, order)
                }
            }));
            if id == roots::GUSTAFSON_MILNE {
                let general = np(&[
                    ("q", "0.2"),
                    ("a1", "2"),
                    ("a2", "1.5"),
                    ("b1", "0.05"),
                    ("b2", "0.04"),
                    ("z", "0.3"),
                    ("x1", "1"),
                    ("x2", "0.6"),
                ]);
                let milne = general.clone().set("b2", "0.05");
                let gm = |i: &str, p: &NumParams, prec, tol| roots::verify_gustafson_milne_numeric(i, 2, p, prec, tol);
                v.push(numeric(id, "n2-general", general, gm));
                v.push(numeric(id, "n2-milne", milne, gm));
            } else {
                let p = np(&[("q", "0.2"), ("t", "0.4"), ("a", "2"), ("b", "0.05"), ("z", "0.3"), ("x1", "1"), ("x2", "0.55")]);
                v.push(numeric(id, "n2", p, |i, p, prec, tol| roots::verify_new_multiple_numeric(i, 2, p, prec, tol)));
            }
        }
        NONCOMMUTATIVE => {
            let base = np(&[("q", "0.2"), ("b", "0.05")]);
            let dims: Vec<usize> = cfg.dim.map_or(vec![2, 3], |d| vec![d]);
            if cfg.dim.is_none() {
                v.push(Instance::new(id, "scalar", Numeric, |c: &RunConfig| nc_fixed(c, false)));
                v.push(Instance::new(id, "diagonal", Numeric, |c: &RunConfig| nc_fixed(c, true)));
            }
            for d in dims {
                let seed = cfg.seed;
                let name = format!("d{d}-seed{seed}");
                let p = base.clone();
                v.push(numeric(id, &name, p, move |i, p, prec, tol| {
                    ncalg::verify_noncommutative_seeded(i, d, seed, p, prec, tol)
                }));
            }
        }
        _ => unreachable!("registry names are closed"),
    }
    v.retain(|i| cfg.backend.includes(i.backend));
    v
}

/// Commuting cases: `d = 1`, or diagonal `d = 2`.
fn nc_fixed(cfg: &RunConfig, diagonal: bool) -> Result<ResidualReport> {
    let p = np(&[("q", "0.2"), ("b", "0.05")]);
    let tol = cfg.tolerance_for(NONCOMMUTATIVE);
    let ctx = p.context(cfg.precision, tol)?;
    let b = p.get(&ctx, "b")?;
    let n = |s: &str| ctx.parse_num(s);
    let (a, z) = if diagonal {
        (Mat::diagonal(&[n("2")?, n("1.5")?]), Mat::diagonal(&[n("0.4")?, n("0.3")?]))
    } else {
        (Mat::scalar(1, &n("2")?), Mat::scalar(1, &n("0.4")?))
    };
    Ok(ncalg::verify_noncommutative_1psi1("", &ctx, &a, &b, &z, tol)?.params(p.iter()))
}

/// Every instance the configuration selects, in deterministic order.
pub fn plan(cfg: &RunConfig) -> Result<Vec<Instance>> {
    cfg.validate()?;
    Ok(cfg.identities()?.into_iter().flat_map(|id| instances_for(id, cfg)).collect())
}

/// Run the selection in parallel; reports come back in plan order.
pub fn corpus_run(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    let plan = plan(cfg)?;
    Ok(plan.par_iter().map(|i| i.run(cfg)).collect())
}

pub fn all_pass(reports: &[ResidualReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

#[derive(Serialize)]
struct Document<'a> {
    schema: u32,
    reports: &'a [ResidualReport],
}

/// `{"schema": 1, "reports": [...]}`, pretty-printed with a trailing newline.
pub fn reports_json(reports: &[ResidualReport]) -> String {
    let mut s = serde_json::to_string_pretty(&Document { schema: SCHEMA_VERSION, reports })
        .expect("reports serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_selection() {
        let r = corpus_run(&RunConfig::default()).unwrap();
        assert!(r.is_empty());
        assert_eq!(reports_json(&r), "{\n  \"schema\": 1,\n  \"reports\": []\n}\n");
    }

    #[test]
    fn unknown_identity() {
        let cfg = RunConfig { selection: Selection::Named(vec!["bogus".into()]), ..Default::default() };
        assert_eq!(corpus_run(&cfg).unwrap_err(), Error::UnknownIdentity("bogus".into()));
    }

    #[test]
    fn config_bounds() {
        for cfg in [
            RunConfig { order: 0, ..Default::default() },
            RunConfig { precision: 32, ..Default::default() },
            RunConfig { tolerance: 0.0, ..Default::default() },
        ] {
            assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        }
    }

    #[test]
    fn backend_filter_and_order() {
        let cfg = RunConfig {
            selection: Selection::Named(vec![TRIPLE.into(), PSI11.into(), TRIPLE.into()]),
            backend: BackendSelection::Numeric,
            ..Default::default()
        };
        let names: Vec<_> = plan(&cfg).unwrap().iter().map(|i| format!("{}/{}", i.identity, i.name)).collect();
        assert_eq!(names, ["triple-product/z-1", "triple-product/z1", "1psi1/real", "1psi1/negative-a"]);
    }

    #[test]
    fn single_formal_run() {
        let cfg = RunConfig {
            selection: Selection::Named(vec![PSI11.into()]),
            backend: BackendSelection::Formal,
            order: 12,
            timing: false,
            ..Default::default()
        };
        let r = corpus_run(&cfg).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].pass);
        assert_eq!(r[0].residual, "0");
        assert!(r[0].wall_time.is_none());
    }
}
