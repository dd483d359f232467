use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state count must be at least 2, got {0}")]
    StateCount(usize),

    #[error("rule name has {found} values, expected {expected} for n = {n}")]
    RuleArity { n: usize, expected: usize, found: usize },

    #[error("rule value {value} at position {position} is not a state of Z_{n}")]
    RuleDigit { n: usize, position: usize, value: String },

    #[error("digit-string rule names are limited to n <= 10; use comma-separated values for n = {0}")]
    DigitNameUnsupported(usize),

    #[error("enumeration of {size} items exceeds the configured cap of {cap}")]
    CapExceeded { size: f64, cap: u64 },

    #[error("malformed tile: {0}")]
    MalformedTile(String),

    #[error("tile is not simple (lag {lag})")]
    NotSimple { lag: usize },

    #[error("tile structure check failed: {0}")]
    Structure(String),

    #[error("s = {s} is not tau*sigma/d for any d dividing gcd({tau}, {sigma})")]
    InadmissibleStateCount { tau: usize, sigma: usize, s: usize },

    #[error("tiles assign different values to the same pair ({0}, {1})")]
    InconsistentAssignments(u16, u16),

    #[error("the two tiles are rotations of each other")]
    IdenticalTiles,

    #[error("label lengths differ: {0} vs {1}")]
    LabelLength(usize, usize),

    #[error("label state {state} out of range for n = {n}")]
    LabelState { n: usize, state: u16 },

    #[error("tau = {tau} exceeds n = {n}; no simple label exists")]
    NoSimpleLabel { n: usize, tau: usize },

    #[error("labels cannot right-extend under any rule: conflicting forced values")]
    ExtensionImpossible,

    #[error("window of width {width} cannot be evolved {steps} steps")]
    WindowExhausted { width: usize, steps: usize },

    #[error("windows do not cover a common range")]
    WindowMismatch,

    #[error("tile is not a periodic solution of the rule: {0}")]
    NotPeriodicSolution(String),

    #[error("horizon {horizon} is shorter than the minimum {minimum}")]
    Horizon { horizon: usize, minimum: usize },

    #[error("invalid period set: {0}")]
    PeriodSet(String),

    #[error("no period pair with sigma | tau; leading order is 1/n^{x}")]
    NoDivisiblePair { x: usize },

    #[error("sample count must be positive")]
    NoSamples,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
