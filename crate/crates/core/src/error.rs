use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mask width {found} does not match ground set size {expected}")]
    MaskWidth { expected: usize, found: usize },

    #[error("ground set has {size} elements, cap is {cap}")]
    GroundTooLarge { size: usize, cap: usize },

    #[error("k = {k} is outside the supported range 1..={cap}")]
    KTooLarge { k: usize, cap: usize },

    #[error("exact enumeration needs {iterations} iterations, cap is {cap}")]
    EnumCap { iterations: u128, cap: u128 },

    #[error("flat enumeration exceeded the cap of {cap} flats")]
    FlatExplosion { cap: usize },

    #[error("{m} does not divide {n}")]
    Divisibility { m: usize, n: usize },

    #[error("cannot embed dimension {m} into smaller dimension {n}")]
    EmbedDimension { m: usize, n: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("profile set is empty")]
    EmptyProfile,

    #[error("normalization {norm} is degenerate for a graph without edges")]
    DegenerateNormalization { norm: &'static str },

    #[error("graphon has zero total weight")]
    ZeroTotalWeight,

    #[error("graphs live on different node sets ({left} vs {right} nodes)")]
    NodeSetMismatch { left: usize, right: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid coloring: {0}")]
    InvalidColor(String),

    #[error("{what} is {value}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("strategy {strategy} cannot produce mode {mode}: {reason}")]
    InvalidStrategy {
        strategy: String,
        mode: String,
        reason: &'static str,
    },

    #[error("setfunction has nonzero value {0} on the empty set")]
    NonzeroEmpty(String),

    #[error("unsupported field size {0}: must be a prime power")]
    UnsupportedField(u64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// Errors raised because a configured enumeration or size cap was hit.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::GroundTooLarge { .. }
                | Error::KTooLarge { .. }
                | Error::EnumCap { .. }
                | Error::FlatExplosion { .. }
                | Error::CapExceeded { .. }
        )
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
