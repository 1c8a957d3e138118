use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("lag {lag} outside [1, {max}]")]
    LagOutOfRange { lag: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty distribution")]
    EmptyDistribution,

    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),

    #[error("need at least two distinct lags, got {0}")]
    TooFewLags(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
