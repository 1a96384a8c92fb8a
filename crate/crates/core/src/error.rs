use thiserror::Error;

/// Errors reported by code construction, encoding and decoding.
#[derive(Debug, Error)]
pub enum Error {
    #[error("block exponent must be at least 1, got {0}")]
    BlockExponent(u32),

    #[error("erasure probability must lie strictly inside (0, 1), got {0}")]
    ErasureProbability(f64),

    #[error("design Eb/N0 must be finite, got {0}")]
    DesignSnr(f64),

    #[error("rate must lie strictly inside (0, 1), got {0}")]
    Rate(f64),

    #[error("k + r = {kr} must be smaller than the block length N = {n}")]
    RateTooHigh { kr: usize, n: usize },

    #[error("reliability profile needs {expected} scores, got {got}")]
    ProfileLength { expected: usize, got: usize },

    #[error("reliability score {value} at index {index} is outside [0, 1]")]
    ProfileScore { index: usize, value: f64 },

    #[error("invalid channel index set: {0}")]
    IndexSet(String),

    #[error("expected a block of {expected} bits, got {got}")]
    BlockLength { expected: usize, got: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("bit value {0} is not 0 or 1")]
    BitValue(u8),

    #[error("invalid hex digit {0:?}")]
    HexDigit(char),

    #[error("hex string encodes {got} bits but {need} are required")]
    HexLength { need: usize, got: usize },

    #[error("CRC width {0} is unsupported, expected 1..=64")]
    CrcWidth(usize),

    #[error("no default CRC polynomial for width {0}; supply one explicitly")]
    CrcDefault(usize),

    #[error("CRC width {crc} does not match the code's r = {r}")]
    CrcMismatch { crc: usize, r: usize },

    #[error("flip index {0} is not a non-frozen channel index")]
    FlipIndex(usize),

    #[error("channel LLR at position {0} is NaN")]
    NanLlr(usize),

    #[error("invalid experiment plan: {0}")]
    Plan(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
