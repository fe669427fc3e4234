use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("eigensolver failed to converge: {0}")]
    Convergence(String),
    #[error("singular profile: {0}")]
    SingularProfile(String),
    #[error("spectral truncation: requested lambda {requested} exceeds basis limit {limit}")]
    Truncation { requested: f64, limit: f64 },
    #[error("quadrature under-resolves the integrand: {0}")]
    Resolution(String),
    #[error("degenerate transversal Hessian: {0}")]
    Degeneracy(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("critical-set scan failed: {0}")]
    Scan(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
