//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by sequence construction, eigensequence certification,
/// channel separation and the digital transmission path.
#[derive(Debug, Error)]
pub enum Error {
    /// A sequence must contain at least one sample.
    #[error("empty sequence: length must be at least 1")]
    EmptySequence,

    /// Samples must be finite complex numbers.
    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    /// A caller-supplied argument violates a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The input is degenerate for the requested operation (typically the
    /// all-zero sequence, which belongs to every eigenspace).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The sequence does not satisfy the claimed invariance within tolerance.
    #[error("not invariant: residual {residual:.3e} exceeds tolerance for eigenvalue {lambda}")]
    NotInvariant { lambda: String, residual: f64 },

    /// The eigenspace for this group is trivial at the given length, so no
    /// signature can be registered for it.
    #[error("empty eigenspace: group {group} has dimension 0 for length {n}")]
    EmptyEigenspace { group: u8, n: usize },

    /// A scheduling request could not pick a user for every group.
    #[error("scheduling error: group {group} has no eligible user ({reason})")]
    StarvedGroup { group: u8, reason: String },

    /// Bitstreams do not divide into whole words.
    #[error("framing error: {0}")]
    Framing(String),

    /// A coefficient lies outside the quantizer range.
    #[error("range error: coefficient {value} outside [-{peak}, {peak}]")]
    Range { value: f64, peak: f64 },

    /// A received frame could not be demodulated.
    #[error("demodulation error at frame {frame}: {source}")]
    Demodulation {
        frame: usize,
        #[source]
        source: Box<Error>,
    },

    /// A configuration parameter is outside its supported range.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical check that should hold in exact arithmetic failed.
    #[error("numerical consistency error: {0}")]
    NumericalConsistency(String),

    /// Internal invariant violation; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code, used by the HTTP layer and the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptySequence => "empty_sequence",
            Error::NonFiniteSample { .. } => "non_finite_sample",
            Error::InvalidInput(_) => "invalid_input",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::NotInvariant { .. } => "not_invariant",
            Error::EmptyEigenspace { .. } => "empty_eigenspace",
            Error::StarvedGroup { .. } => "scheduling",
            Error::Framing(_) => "framing",
            Error::Range { .. } => "range",
            Error::Demodulation { .. } => "demodulation",
            Error::Config(_) => "config",
            Error::NumericalConsistency(_) => "numerical_consistency",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
