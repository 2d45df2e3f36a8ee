use alloc::string::String;

/// Errors raised by the core crate.
///
/// `Contract` covers precondition violations (bad parameters, mismatched
/// sizes). `Capacity` is raised by exhaustive routines whose search budget is
/// exceeded; callers are expected to fall back to a cheaper method.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("vertex set has {got} slots but the hypergraph has {expected} vertices")]
    SizeMismatch { expected: usize, got: usize },
    #[error("capacity exceeded in {what}: {got} > {limit}")]
    Capacity {
        what: &'static str,
        limit: u64,
        got: u64,
    },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err($crate::Error::Contract(alloc::format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;
