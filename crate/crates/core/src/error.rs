use thiserror::Error;

/// Everything that can go wrong inside the kernel.
///
/// Formal-backend failures (`FloorViolation`, `NonInvertibleLeadingCoefficient`, ...)
/// are hard errors: the engine never silently truncates or approximates.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("series belong to different symbol tables")]
    SymbolTableMismatch,

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("too many symbols: {0} (at most {max})", max = crate::algebra::MAX_SYMBOLS)]
    TooManySymbols(usize),

    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),

    #[error("q-exponent {exponent} falls below the configured floor {floor}")]
    FloorViolation { exponent: i64, floor: i64 },

    #[error("leading coefficient `{0}` is not a unit (scalar times monomial)")]
    NonInvertibleLeadingCoefficient(String),

    #[error("cannot invert the zero series")]
    ZeroSeries,

    #[error("zero divisor: factor {0} vanishes")]
    ZeroDivisor(String),

    #[error("argument has negative q-order; infinite product does not stabilise")]
    NonPositiveQOrder,

    #[error("exact division failed: {0}")]
    InexactDivision(String),

    #[error("requested order {requested} exceeds known precision {available}")]
    OrderExceedsPrecision { requested: i64, available: i64 },

    #[error("formal sum does not truncate: {0}")]
    FormalDivergence(String),

    #[error("factor near zero: {0}")]
    FactorNearZero(String),

    #[error("series diverges in the {0} direction (no ratio certificate below 1)")]
    DivergentDirection(&'static str),

    #[error("ratio certificate contradicted at index {index}: observed {observed:e} > bound {bound:e}")]
    CertificateContradicted { index: i64, observed: f64, bound: f64 },

    #[error("tail does not converge: {0}")]
    NonConvergentTail(String),

    #[error("infinite product does not converge: {0}")]
    NonConvergentProduct(String),

    #[error("lattice sum did not stabilise within radius {0}")]
    NonStabilisedLatticeSum(i64),

    #[error("q-gamma has a pole at {0}")]
    PoleAtNonPositiveInteger(String),

    #[error("parameters outside the validity region: {0}")]
    RegionViolation(String),

    #[error("singular factor: {0}")]
    SingularFactor(String),

    #[error("norm condition violated: {0}")]
    NormConditionViolated(String),

    #[error("unsupported root system {0}")]
    UnsupportedRootSystem(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
