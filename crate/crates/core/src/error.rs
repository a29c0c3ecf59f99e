use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n = {n} exceeds the enumeration cap of {cap} (raise it with FLATPERM_MAX_N)")]
    CapExceeded { n: usize, cap: usize },

    #[error("{what} = {value} is outside {lo}..={hi}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid cycle form: {0}")]
    InvalidCycleForm(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid marked partition: {0}")]
    InvalidPartition(String),

    /// An exact division left a remainder, or two routes that must agree did not.
    #[error("identity violated: {0}")]
    IdentityViolation(String),

    /// Input lies outside the domain of a map (e.g. a bijection's source set).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
