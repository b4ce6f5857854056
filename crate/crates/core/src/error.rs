use thiserror::Error;

use crate::rational::Rational;

/// Errors raised by the engine. Every operation that can leave the
/// representable class or a mean's domain reports one of these.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cluster windows overlap or a child template does not fit its window")]
    OverlappingClusterWindows,
    #[error("result is not representable: {0}")]
    UnrepresentableResult(String),
    #[error("invalid interval: lower bound {lo} exceeds upper bound {hi}")]
    InvalidInterval {
        lo: Box<Rational>,
        hi: Box<Rational>,
    },
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("set contains intervals, so its derived-set level is infinite")]
    InfiniteLevel,
    #[error("set has no accumulation points")]
    EmptyDerivedSet,
    #[error("set is empty")]
    EmptySet,
    #[error("part of the set has no declared density")]
    OutsideSupport,
    #[error("clusters of depth {0} are not supported by this operation")]
    UnsupportedDepth(usize),
    #[error("set is not compact in its representation")]
    NotCompact,
    #[error("set has Lebesgue (or mu) measure zero")]
    NullSet,
    #[error("set is not finite")]
    NotFinite,
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("the retained set is empty")]
    EmptySlice,
    #[error("limit did not converge: last estimate {estimate} (spread {spread})")]
    NoConvergence { estimate: f64, spread: f64 },
    #[error("set is degenerate (inf = sup)")]
    DegenerateSet,
    #[error("neighbourhood slice at delta = {0} leaves the mean's domain")]
    DomainExit(Box<Rational>),
    #[error("operation is not supported for mean {0}")]
    UnsupportedMean(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("bad generator configuration: {0}")]
    BadConfig(String),
    #[error("property is not applicable: {0}")]
    NotApplicable(String),
    #[error("distance could not be resolved within the enumeration budget")]
    Unresolved,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
