//! Crate-wide error type.

/// Everything that can go wrong across the crate.
///
/// Domain errors carry enough context to name the violated constraint; file
/// errors distinguish malformed contents from plain I/O failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Instance parameters violate an invariant (the message names it).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Two objects that must agree on `n`/`b`/indices do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A partition-family or feedback blob failed to parse.
    #[error("malformed file: {0}")]
    MalformedFile(String),

    /// An exhaustive enumeration would exceed the configured guard.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// The two-user variable-length law is only defined for `n = 2^l`.
    #[error("n must be a power of two, got {0}")]
    NotPowerOfTwo(u64),

    /// No symbol carries positive probability.
    #[error("distribution has no positive-probability symbol")]
    EmptyDistribution,

    /// Failure probabilities must be strictly between 0 and 1.
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),

    /// No partition in the family separates the given activity pattern.
    #[error("activity pattern is covered by no partition in the family")]
    Uncovered,

    /// Decoding a listing message for a user that is not listed.
    #[error("user {user} is not listed in the message")]
    UserNotListed { user: usize },

    /// The random builder exhausted its retry budget without certifying.
    #[error("no certified family found after {rounds} round(s)")]
    BuildFailed { rounds: u32 },

    /// The displacement search for one hash bucket hit its limit.
    #[error("displacement search exhausted at bucket {bucket} (limit {limit})")]
    BuildExhausted { bucket: usize, limit: u32 },

    /// A bound was evaluated outside the regime where it is defined.
    #[error("outside the bound's domain: {0}")]
    DomainError(String),

    /// A measurement was requested over zero trials.
    #[error("experiment needs at least one trial")]
    EmptyExperiment,

    /// Underlying file-system error while reading or writing artifacts.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
