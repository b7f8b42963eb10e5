// SPDX-License-Identifier: Apache-2.0

//! Two-level text compression with a static word table.
//!
//! Text is first *reduced*: every word found in a [`Dictionary`] becomes a
//! 19-bit code, the single space between words is implied, and case,
//! spacing and out-of-table content ride on a small set of reserved codes.
//! The reduced payload can then be deflated as a second stage.
//!
//! ```
//! use wordpack::{compress, decompress, Dictionary, EncodeOptions};
//!
//! let dict = Dictionary::build(["he", "is", "a", "very", "good", "boy"]).unwrap();
//! let text = b"He is a very good boy.";
//! let packed = compress(text, &dict, EncodeOptions { second_stage: false }).unwrap();
//! assert_eq!(decompress(&packed, &dict).unwrap(), text);
//! ```

pub mod alphabet;
pub mod bitstream;
pub mod codec;
pub mod container;
pub mod dictionary;
mod error;
pub mod metrics;
pub mod tokenizer;

pub use bitstream::{BitBuffer, BitReader};
pub use codec::{case_plan, decode, encode, CasePlan, EncodeOptions, Payload};
pub use container::{compress, decompress, Container, Deflate, SecondStage};
pub use dictionary::{table_memory_bits, Code19, CodeLookup, DictEntry, Dictionary, ReservedToken};
pub use error::{Error, InvalidReason, Result};
pub use metrics::{estimate, report_table4, BitCost, Percent, ReductionReport};
pub use tokenizer::{
    classify_case, detokenize, tokenize, CaseClass, SpacingState, Token, TokenKind,
};
