// SPDX-License-Identifier: Apache-2.0

use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// The variants map one-to-one onto the error classes the command-line tool
/// turns into exit codes, so keep them coarse.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("value {value:#x} does not fit in {width} bits")]
    Range { value: u32, width: u32 },

    #[error("bit width {0} outside 1..=32")]
    Width(u32),

    #[error("truncated input: {0}")]
    Truncated(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("corrupt data: {0}")]
    Corrupt(String),

    #[error("malformed token structure: {0}")]
    Structure(String),

    #[error("container was written with dictionary {expected:016x}, got {found:016x}")]
    WrongDictionary { expected: u64, found: u64 },

    #[error("line {line}: invalid word {word:?}: {reason}")]
    InvalidWord {
        line: usize,
        word: String,
        reason: InvalidReason,
    },

    #[error("dictionary capacity exceeded: {count} entries, at most {max} allowed")]
    Capacity { count: usize, max: usize },

    #[error("word {0:?} has no letters to classify")]
    NoLetters(String),

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Why a wordlist line was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvalidReason {
    /// A character outside the 6-bit literal word alphabet.
    Character(char),
    /// Apostrophe or hyphen at an edge or doubled.
    Shape,
    TooLong(usize),
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::Character(c) => write!(f, "character {c:?} is not in the word alphabet"),
            InvalidReason::Shape => f.write_str("apostrophes and hyphens must sit between letters"),
            InvalidReason::TooLong(n) => write!(f, "{n} characters, at most 64 allowed"),
        }
    }
}
