use std::fmt;

/// Errors reported by construction, validation, and solver routines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Alphabet must have at least one point.
    EmptyAlphabet,
    /// Two objects disagree on the alphabet size.
    AlphabetMismatch { left: usize, right: usize },
    /// A slice or tuple has the wrong length.
    LengthMismatch { expected: usize, got: usize },
    /// The dense support c^k would exceed the supported limit.
    SupportTooLarge { c: usize, k: usize, limit: usize },
    /// Matrix dimension exceeds what the permanent routine accepts.
    MatrixTooLarge { n: usize, limit: usize },
    /// Weight and kernel values must be strictly positive and finite.
    NonpositiveValue { index: usize, value: f64 },
    /// Probability entry below the negative-noise threshold.
    NegativeProbability { index: usize, value: f64 },
    /// Probabilities do not sum to 1 within tolerance.
    NotNormalized { sum: f64 },
    /// All weights vanished; nothing to normalize.
    ZeroMass,
    /// Kernel value differs across a permutation orbit.
    AsymmetricKernel { index: usize },
    /// The distribution is not weighted exchangeable for the given profile.
    NotExchangeable,
    /// An urn's conditional law disagrees with the permanent formula.
    ConditionalMismatch { urn: Vec<usize> },
    /// Rescaling factors must multiply to 1.
    ScaleProductNotOne { product: f64 },
    /// An urn must contain at least one ball.
    EmptyUrn,
    /// Urn size differs from the number of weight rows.
    UrnMismatch { urn_size: usize, profile_rows: usize },
    /// Prefix length k must satisfy 1 <= k <= n.
    KOutOfRange { k: usize, n: usize },
    /// The projection grid has no atoms.
    EmptyGrid,
    /// The linear program has no feasible point.
    Infeasible,
    /// The linear program is unbounded below.
    Unbounded,
    /// A parameter is outside its admissible range.
    InvalidParameter { what: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyAlphabet => write!(f, "alphabet must have at least one point"),
            Error::AlphabetMismatch { left, right } => {
                write!(f, "alphabet sizes differ: {left} vs {right}")
            }
            Error::LengthMismatch { expected, got } => {
                write!(f, "expected length {expected}, got {got}")
            }
            Error::SupportTooLarge { c, k, limit } => {
                write!(f, "dense support {c}^{k} exceeds limit {limit}")
            }
            Error::MatrixTooLarge { n, limit } => {
                write!(f, "matrix dimension {n} exceeds limit {limit}")
            }
            Error::NonpositiveValue { index, value } => {
                write!(f, "entry {index} must be positive and finite, got {value}")
            }
            Error::NegativeProbability { index, value } => {
                write!(f, "probability entry {index} is negative: {value}")
            }
            Error::NotNormalized { sum } => {
                write!(f, "probabilities sum to {sum}, not 1 within tolerance")
            }
            Error::ZeroMass => write!(f, "total mass is zero"),
            Error::AsymmetricKernel { index } => {
                write!(f, "kernel is not symmetric at flat index {index}")
            }
            Error::NotExchangeable => {
                write!(f, "distribution is not weighted exchangeable for this profile")
            }
            Error::ConditionalMismatch { urn } => {
                write!(f, "conditional law on urn {urn:?} deviates from the permanent formula")
            }
            Error::ScaleProductNotOne { product } => {
                write!(f, "rescaling factors multiply to {product}, not 1")
            }
            Error::EmptyUrn => write!(f, "urn must contain at least one ball"),
            Error::UrnMismatch { urn_size, profile_rows } => {
                write!(f, "urn holds {urn_size} balls but the profile has {profile_rows} rows")
            }
            Error::KOutOfRange { k, n } => write!(f, "k = {k} out of range 1..={n}"),
            Error::EmptyGrid => write!(f, "projection grid has no atoms"),
            Error::Infeasible => write!(f, "linear program is infeasible"),
            Error::Unbounded => write!(f, "linear program is unbounded"),
            Error::InvalidParameter { what } => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
