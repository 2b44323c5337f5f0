use thiserror::Error;

/// Errors raised by the library. Variants are grouped by the layer that
/// detects them; the CLI maps them onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("undefined valuation: {0}")]
    UndefinedValuation(String),
    #[error("inconsistent root choice: {0}")]
    InconsistentRoot(String),
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("not exactly divisible: {0}")]
    NotDivisible(String),
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),
    #[error("containment error: {0}")]
    Containment(String),
    #[error("Steinberg violation: {0}")]
    SteinbergViolation(String),
    #[error("correspondence failure: {0}")]
    CorrespondenceFailure(String),
    #[error("internal consistency: {0}")]
    InternalConsistency(String),
    #[error("no Hecke data for {0}")]
    ProviderMissing(String),
    #[error("bad specialisation: {0}")]
    BadSpecialisation(String),
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("degree integrality: {0}")]
    DegreeIntegrality(String),
    #[error("invalid q: {0}")]
    InvalidQ(String),
    #[error("unsupported stabiliser: {0}")]
    UnsupportedStabiliser(String),
    #[error("falsification evidence: {0}")]
    Falsification(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
