use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe size {0} outside [1, 63]")]
    SizeOutOfRange(u64),
    #[error("mask {mask:#b} has bits at or above position {n}")]
    MaskOutOfRange { mask: u64, n: u32 },
    #[error("family set {0} is empty")]
    EmptyFamilySet(usize),
    #[error("value a_{0} must be a positive integer")]
    ZeroValue(usize),
    #[error("target must be a positive integer")]
    ZeroTarget,
    #[error("subset-sum instance needs between 1 and 63 values, got {0}")]
    ValueCount(usize),
    #[error("sum of values overflows 64-bit moment arithmetic")]
    SumOverflow,
    #[error("moment {k} outside [0, 2^{n})")]
    MomentOutOfRange { k: u64, n: u32 },
    #[error("superset moments of the empty set are undefined (every moment would qualify)")]
    EmptySubset,
    #[error("instance too large to enumerate: n = {n} exceeds cap {cap}")]
    TooLarge { n: u32, cap: u32 },
    #[error("moment set of 2^{log2_len} members exceeds the materialization limit 2^{limit}")]
    SetTooLarge { log2_len: u32, limit: u32 },
    #[error("operation requires a {expected} device")]
    WrongDeviceKind { expected: &'static str },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
