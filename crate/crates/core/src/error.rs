use thiserror::Error;

/// Errors raised across the library. Scenario-level failures carry enough
/// context for the CLI to render a diagnostic without further lookups.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: [{0}] vs [{1}]")]
    DomainMismatch(String, String),
    #[error("invalid piecewise-linear data: {0}")]
    InvalidPl(String),
    #[error("point {0} lies outside the domain [{1}]")]
    OutOfDomain(String, String),

    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("the zero series has no Gauss norm")]
    ZeroSeries,
    #[error("Gauss norm undefined: every head coefficient is zero or below precision and the tail is not known to vanish")]
    UndefinedNorm,
    #[error("index {index} lies beyond the truncation order {order} and no tail bound is declared")]
    BeyondTruncation { index: usize, order: usize },
    #[error("uncertified: {0}")]
    Uncertified(String),
    #[error("invalid tail bound: {0}")]
    InvalidTail(String),
    #[error("order cap exceeded: requested {requested}, cap {cap}")]
    OrderCap { requested: usize, cap: usize },
    #[error("composition requires an inner series without constant term or a polynomial outer series")]
    InvalidComposition,

    #[error("form is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("variable count mismatch: expected {expected}, got {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("the map is contained in hypersurface {0}")]
    ContainedInHypersurface(String),
    #[error("containment of the map in hypersurface {0} is undetermined at this truncation order")]
    ContainmentUndetermined(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("the variety X is contained in hypersurface {0}")]
    VarietyInHypersurface(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("the ideal has a nonempty projective locus")]
    NonemptyLocus,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no separating hyperplane found for point {0} within the search lattice")]
    LatticeExhausted(String),
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("multiplicity M could not be certified and no value was declared")]
    MultiplicityUnavailable,

    #[error("First Main Theorem defect is not constant for {0}; this is an internal error")]
    FmtNotConstant(String),

    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown builtin: {0}")]
    UnknownBuiltin(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
