use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("outside the convergence domain: {0}")]
    Domain(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("residue is not a simple root (derivative vanishes mod p)")]
    NotSimpleRoot,
    #[error("tail certificate does not cover the query: {0}")]
    UncertifiedTail(String),
    #[error("series is identically zero in its certified range")]
    ZeroSeries,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("element is zero")]
    ZeroElement,
    #[error("no solution meeting the height bound was found: {0}")]
    NoSolutionFound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent differential system: {0}")]
    InconsistentSystem(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("addition formula undefined at this translate")]
    AdditionFormulaUndefined,
    #[error("derivative value is exactly zero")]
    ZeroValue,
    #[error("linear form vanishes")]
    LinearFormZero,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
