use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("{0} is not a discriminant (must be nonzero and congruent to 0 or 1 mod 4)")]
    NotDiscriminant(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is a perfect square")]
    SquareDiscriminant(i64),
    #[error("{what} evaluated within {distance:e} of a pole")]
    PoleProximity { what: &'static str, distance: f64 },
    #[error("endpoint singularity: {0}")]
    EndpointSingularity(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("L(1) routes disagree for d = {d}: finite sum {finite_sum}, class number {class_number}")]
    RouteDisagreement { d: i64, finite_sum: f64, class_number: f64 },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
