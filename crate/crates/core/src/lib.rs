//! Expected 2-protected nodes in random digital search trees, computed three
//! independent ways.
//!
//! A digital search tree stores one binary string per node; each insertion
//! routes left on a `0` bit and right on a `1` bit until it finds an empty
//! slot. Under the random model (every routing bit a fair coin flip) the
//! expected number of 2-protected nodes — non-leaf nodes none of whose
//! children is a leaf — admits several exact descriptions that this crate
//! implements side by side so they can check each other:
//!
//! * [`exact_sequence`] — the direct recursion for the expectation `l_n`,
//!   the linearized coefficient recurrence `m_n` with its binomial
//!   transform, and the closed-form double sum, all in exact rational
//!   arithmetic;
//! * [`asymptotics`] — the leading constant `C = (1/Q_∞) Σ a_{m+1} b_m` of
//!   the large-`n` expansion `l_n ≈ C·n`, evaluated to arbitrary decimal
//!   precision with rigorous truncation bounds, plus residual analysis of
//!   the exact values against it;
//! * [`dst_sim`] — tree construction from explicit bit strings or from the
//!   random model, k-protected counting, exhaustive small-`n` enumeration,
//!   and deterministic Monte Carlo estimation.
//!
//! [`qseries`] supplies the shared q-Pochhammer quantities (`Q_m`, `Q_∞`,
//! `Q(x)`) and the alternating partition-series coefficients `a_{m+1}`;
//! [`precision`] supplies the fixed-point decimal type the high-precision
//! routes are built on.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature only forwards to the numeric dependencies.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(missing_docs)]

extern crate alloc;

pub mod asymptotics;
mod dyadic;
pub mod exact_sequence;
pub mod precision;
pub mod qseries;
pub mod dst_sim;

use alloc::string::String;
use core::fmt;

/// Exact arbitrary-precision fraction; the carrier for every exact value
/// (sequence entries, partial products, series coefficients).
pub type Rational = num_rational::BigRational;

/// Errors shared across the computation modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A precision configuration failed validation.
    InvalidPrecision(&'static str),
    /// A series or product could not reach the requested accuracy within
    /// the configured truncation cap.
    TruncationCapExceeded {
        /// The configured cap that was exhausted.
        cap: u32,
    },
    /// A sequence table does not extend far enough for the requested index.
    TableTooShort {
        /// Index that was requested.
        needed: usize,
        /// Number of entries actually present.
        len: usize,
    },
    /// The operation is undefined at the requested index.
    UnsupportedIndex {
        /// Offending index.
        index: usize,
        /// Why the index is rejected.
        reason: &'static str,
    },
    /// The truncated oscillation series was asked to include its `m = 0`
    /// term, which divides by zero as displayed.
    SingularFourierTerm,
    /// An input string ran out of routing bits before reaching an empty
    /// slot during tree construction.
    BitsExhausted {
        /// Zero-based position of the offending input.
        item: usize,
        /// Label of the offending input, when one was given.
        label: Option<String>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPrecision(why) => write!(f, "invalid precision config: {why}"),
            Error::TruncationCapExceeded { cap } => {
                write!(f, "truncation cap {cap} too small for the requested accuracy")
            }
            Error::TableTooShort { needed, len } => {
                write!(f, "sequence table of length {len} does not cover index {needed}")
            }
            Error::UnsupportedIndex { index, reason } => {
                write!(f, "index {index} not supported: {reason}")
            }
            Error::SingularFourierTerm => {
                write!(f, "the m = 0 oscillation term divides by zero; start the m range at 1")
            }
            Error::BitsExhausted { item, label } => match label {
                Some(l) => write!(f, "input {item} ({l:?}) ran out of bits before an empty slot"),
                None => write!(f, "input {item} ran out of bits before an empty slot"),
            },
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
