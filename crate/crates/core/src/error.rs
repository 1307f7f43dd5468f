use thiserror::Error;

use crate::graph::Side;

/// Errors raised by the library. Cap refusals, invalid input and failed
/// property checks are kept apart so front ends can map them to distinct
/// exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what}: size {actual} exceeds the desk-scale cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("family is empty")]
    EmptyFamily,

    #[error("family is not intersecting: {0} and {1} are disjoint")]
    NotIntersecting(String, String),

    #[error("graph is not biregular: {side:?}-vertex {vertex} has degree {degree}, expected {expected}")]
    NotBiregular {
        side: Side,
        vertex: usize,
        degree: usize,
        expected: usize,
    },

    #[error("no vertex of {0} can be covered")]
    Uncoverable(String),

    #[error("no valid T0 after {attempts} samples (|N(A)| = {neighborhood})")]
    T0NotFound { attempts: u32, neighborhood: usize },

    #[error("bisection for C(x, {m}) = {target} did not converge")]
    NoConvergence { m: u32, target: f64 },

    #[error("property violated: {property}: {witness}")]
    Violation { property: String, witness: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn violation(property: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Violation {
            property: property.into(),
            witness: witness.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
