//! Root systems, Weyl groups and the identities indexed by them.

pub mod coroot;
pub mod multiple;
pub mod poincare;
pub mod system;

pub use coroot::{verify_macdonald_coroot, MACDONALD_COROOT};
pub use multiple::{
    verify_gustafson_milne_formal, verify_gustafson_milne_numeric, verify_new_multiple_formal,
    verify_new_multiple_numeric, verify_reduction_n1, GUSTAFSON_MILNE, NEW_MULTIPLE,
};
pub use poincare::{verify_poincare, OrbitParams, POINCARE};
pub use system::{build_root_system, Family, Orbit, RootSystemData, WeylGroupData};
