use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("input is empty")]
    EmptyInput,
    #[error("input contains the reserved sentinel byte 0x00 at offset {offset}")]
    SentinelByteInInput { offset: usize },
    #[error("pattern length {m} exceeds the text length {max} (sentinel excluded)")]
    PatternTooLong { m: usize, max: usize },
    #[error("text of {len} bytes exceeds the supported maximum")]
    TextTooLarge { len: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuccinctError {
    #[error("index {index} out of range 1..={len}")]
    OutOfRange { index: usize, len: usize },
    #[error("no occurrence number {k} of the requested symbol")]
    NoSuchOccurrence { k: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocateError {
    #[error("no retained First entry to wrap around to")]
    PredecessorMissing,
    #[error("phi is undefined at text position {0}")]
    PhiUndefined(usize),
    #[error("the sample of run {0} was removed")]
    SampleRemoved(usize),
    #[error(transparent)]
    Succinct(#[from] SuccinctError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubsampleError {
    #[error("variant must be 0, 1 or 2 (got {0})")]
    InvalidVariant(u8),
    #[error("sampling parameter s={s} must satisfy 1 <= s < n={n}")]
    STooLarge { s: usize, n: usize },
    #[error("operation requires variant {required} or above, index has variant {actual}")]
    WrongVariant { required: u8, actual: u8 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("pattern is empty")]
    EmptyPattern,
    #[error(transparent)]
    WrongVariant(#[from] SubsampleError),
    #[error("index invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes, not an index file")]
    BadMagic,
    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },
    #[error("corrupt index file: {0}")]
    Corrupt(String),
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Subsample(#[from] SubsampleError),
    #[error("invalid build options: {0}")]
    InvalidOptions(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("spot check failed for s={s}, variant={variant}, pattern #{pattern}: index gave {got} occurrences, scan gave {expected}")]
    SpotCheckFailed {
        s: usize,
        variant: u8,
        pattern: usize,
        got: usize,
        expected: usize,
    },
    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),
}
