use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("word width {0} outside supported range 3..=16")]
    UnsupportedWidth(u32),

    #[error("value {value:#x} does not fit in {width} bits")]
    ValueTooWide { value: u32, width: u32 },

    #[error("width mismatch: expected {expected} bits, got {actual}")]
    WidthMismatch { expected: u32, actual: u32 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no subkey supplied for round {0}")]
    MissingRoundKey(usize),

    #[error("search space has no marked element")]
    NoMarkedElement,

    #[error("capacity guard: {0}")]
    Capacity(String),

    #[error("collapsed simulation unavailable: {0}")]
    CollapsedUnavailable(String),

    #[error("no claw exists for this problem")]
    ClawAbsent,

    #[error("inconsistent recovery: {0}")]
    Inconsistent(String),

    #[error("search exhausted after {attempts} attempts in stage {stage}")]
    SearchExhausted { stage: &'static str, attempts: u32 },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
