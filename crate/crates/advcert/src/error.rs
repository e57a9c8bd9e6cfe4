use thiserror::Error;

/// Errors produced by the certification toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain too large: {n} coordinates over alphabet {q} gives {strings} strings (cap {cap})")]
    DomainTooLarge { n: usize, q: usize, strings: u128, cap: usize },

    #[error("enumeration overflow: {count} assignments of weight <= {kmax} (cap {cap})")]
    EnumerationOverflow { count: u128, kmax: usize, cap: usize },

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("boolean-only operation: alphabet size is {q}, expected 2")]
    BooleanOnly { q: usize },

    #[error("degree out of range: require 0 <= d < n, got d = {d}, n = {n}")]
    DegreeOutOfRange { d: usize, n: usize },

    #[error("trivial function: {0}")]
    TrivialFunction(String),

    #[error("invalid dual polynomial: {0}")]
    InvalidDual(String),

    #[error("gram mismatch at level {level}: deviation {deviation:.3e} at pair ({alpha}, {beta})")]
    GramMismatch { level: usize, deviation: f64, alpha: String, beta: String },

    #[error("marginal mismatch at assignment {alpha}: mu gives {mu_marginal}, nu gives {nu_marginal}")]
    MarginalMismatch { alpha: String, mu_marginal: f64, nu_marginal: f64 },

    #[error("m too large: level {m} needs marginal matching up to weight {required}, only {available} certified")]
    MTooLarge { m: usize, required: usize, available: usize },

    #[error("internal solver error: {0}")]
    Solver(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
