use thiserror::Error;

/// Errors raised across the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate prime {0} in residue list")]
    DuplicatePrime(u64),
    #[error("repeated abscissa {0}")]
    RepeatedAbscissa(u64),
    #[error("need at least {need} points, got {have}")]
    NotEnoughPoints { need: usize, have: usize },
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("arity or rank mismatch: {0}")]
    Mismatch(String),
    #[error("both factors carry module components")]
    ComponentClash,
    #[error("zero operator has no leading term")]
    ZeroOperator,
    #[error("coefficient field has no parameter t")]
    NoParameter,
    #[error("unlucky evaluation point or prime")]
    Unlucky,
    #[error("monomial order violates the finiteness hypothesis")]
    OrderNotFinite,
    #[error("degree ceiling {0} reached")]
    DegreeCeiling(usize),
    #[error("tracer replay mismatch")]
    UnluckyTracer,
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("series too short: {0}")]
    SeriesTooShort(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
