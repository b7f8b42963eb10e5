// SPDX-License-Identifier: Apache-2.0

//! Benchmark inputs shared by the criterion targets.

use std::fs;
use std::path::{Path, PathBuf};

use wordpack::{tokenize, tokenizer, Dictionary};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/corpus")
}

/// The fixture texts concatenated `copies` times, and a dictionary covering
/// their vocabulary.
pub fn corpus(copies: usize) -> (Vec<u8>, Dictionary) {
    let mut paths: Vec<_> = fs::read_dir(fixture_dir())
        .expect("fixture corpus")
        .map(|e| e.expect("fixture entry").path())
        .collect();
    paths.sort();
    let mut one = Vec::new();
    for p in paths {
        one.extend(fs::read(p).expect("fixture text"));
    }
    let dict =
        Dictionary::build(tokenizer::vocabulary(&tokenize(&one))).expect("fixture words are valid");
    (one.repeat(copies), dict)
}
