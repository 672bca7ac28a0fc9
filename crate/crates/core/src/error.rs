use thiserror::Error;

use crate::rbf::ChainLevel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:e} exceeds 1e-12")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("eigen-decomposition did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("matrix is singular or indefinite: eigenvalues span [{min:e}, {max:e}]")]
    Conditioning { min: f64, max: f64 },

    #[error("{what} = {value} is outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid configuration: {field} {bound}")]
    Config { field: String, bound: String },

    #[error("config line {line}: {key}: {message}")]
    ConfigParse {
        line: usize,
        key: String,
        message: String,
    },

    #[error("degenerate channel: {0}")]
    DegenerateChannel(&'static str),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    #[error("rank-one update at level {level} is singular (|1 + v^T Z^-1 u| = {modulus:e})")]
    UpdateSingular { level: ChainLevel, modulus: f64 },

    #[error("unsupported scenario: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, bound: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            bound: bound.into(),
        }
    }
}
