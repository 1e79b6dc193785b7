use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::PageId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("undefined input: {0}")]
    UndefinedInput(&'static str),
    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("power iteration did not converge after {iterations} iterations (L1 residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("page {0} is not part of the snapshot")]
    UnknownNode(PageId),
    #[error("correlation undefined: a series has zero variance")]
    UndefinedCorrelation,
    #[error("incompatible inputs: {0}")]
    Incompatible(&'static str),
    #[error("predictor column {0} is constant")]
    DegenerateColumn(usize),
    #[error("design matrix is rank deficient")]
    SingularDesign,
    #[error("value {value} at position {index} is outside the domain of {what}")]
    Domain {
        what: &'static str,
        index: usize,
        value: f64,
    },
    #[error("kappa undefined: expected chance agreement is 1")]
    UndefinedKappa,
    #[error("redirect cycle: {}", .0.join(" -> "))]
    RedirectCycle(Vec<String>),
    #[error("invalid corpus: {0}")]
    InvalidCorpus(String),
}
