use thiserror::Error;

use crate::quadrature::{Estimate, QuadError};
use crate::specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{what} = {value} is outside the allowed domain: {reason}")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("quadrature failed: {source}")]
    Quadrature {
        #[from]
        source: QuadError,
    },
    #[error("the cutoff-dependent kernel diverges at s = 0 (value {} at omega_upper = {omega_upper})", estimate.value)]
    CutoffDependent {
        omega_upper: f64,
        estimate: Estimate,
    },
    #[error("state invariant violated at t = {t}: {reason}")]
    Invariant { t: f64, reason: String },
    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        reason,
    }
}
