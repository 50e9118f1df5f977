use thiserror::Error;

use crate::series::FunctionCase;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("series tail {tail:e} at |u| = {u} exceeds tolerance {tol:e}")]
    TailTooLarge { u: f64, tail: f64, tol: f64 },

    #[error("radicand {radicand} at z = {z} is not positive; no real branch")]
    Branch { z: f64, radicand: f64 },

    #[error("need {needed} coefficients beyond a0, stream has {available}")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("no closed form of order {order} is printed for {case}")]
    UnsupportedOrder { case: FunctionCase, order: usize },

    #[error("power sum of order {order} is not positive ({value:e})")]
    NonPositiveSum { order: usize, value: f64 },

    #[error("bracket [{lower}, {upper}] is empty or inverted")]
    DegenerateBracket { lower: f64, upper: f64 },

    #[error("no sign change found for {case} up to u = {limit}")]
    BracketFailure { case: FunctionCase, limit: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Branch { .. })
    }
}
