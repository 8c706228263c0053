use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("requested prefix of {requested} letters exceeds the cap of {cap} (set QUADWORD_MAX_PREFIX to raise it)")]
    PrefixCapExceeded { requested: u64, cap: u64 },

    #[error("position {position} is beyond the guaranteed horizon of this stream; deepen the slope expansion")]
    HorizonExceeded { position: u64 },

    #[error("prefix of {available} letters is too short for this check ({needed} required)")]
    UntrustedHorizon { needed: u64, available: u64 },

    #[error("length {requested} exceeds the trusted factor horizon {trusted}")]
    FactorHorizon { requested: u64, trusted: u64 },

    #[error("subword range [{from}, {to}] is invalid for a word of length {len}")]
    Range { from: usize, to: usize, len: usize },

    #[error("invalid slope: {0}")]
    InvalidSlope(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("no prefix of length >= {needed} ending with the previous anchor within {scanned} letters at stage {stage}; base may not be recurrent")]
    AnchorSearch {
        stage: usize,
        needed: u64,
        scanned: u64,
    },

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("materializing stage {stage} needs {needed} letters, above the cap of {cap}")]
    StageCapExceeded { stage: usize, needed: u64, cap: u64 },

    #[error("window [{lo}, {hi}] is insufficient: {reason}")]
    InsufficientWindow { lo: usize, hi: usize, reason: String },

    #[error("power {power} of \"{word}\" is not a verified factor at this horizon")]
    UnverifiedPower { word: String, power: u64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
