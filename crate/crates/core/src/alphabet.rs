// SPDX-License-Identifier: Apache-2.0

//! The 6-bit literal alphabet and the lexical shape of a dictionary word.

use crate::error::InvalidReason;

/// The 27 punctuation symbols, in code order. Each one owns two dictionary
/// entries and one literal character code.
pub const PUNCTUATION: &[u8; 27] = b".,;:!?'\"-()[]{}/\\@#$%&*+=_~";

/// Longest surface a dictionary entry may hold.
pub const MAX_SURFACE_LEN: usize = 64;

/// Character code of the literal alphabet. Zero is the terminator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharCode6(u8);

impl CharCode6 {
    pub const TERMINATOR: CharCode6 = CharCode6(0);
    pub const WIDTH: u32 = 6;

    /// Code for a byte of the alphabet; uppercase letters have no code.
    pub fn encode(byte: u8) -> Option<CharCode6> {
        let code = match byte {
            b'a'..=b'z' => byte - b'a' + 1,
            b'0'..=b'9' => byte - b'0' + 27,
            _ => 37 + punctuation_index(byte)? as u8,
        };
        Some(CharCode6(code))
    }

    /// Inverse of [`encode`](Self::encode); `None` for the terminator and out of range values.
    pub fn decode(self) -> Option<u8> {
        match self.0 {
            1..=26 => Some(b'a' + self.0 - 1),
            27..=36 => Some(b'0' + self.0 - 27),
            37..=63 => Some(PUNCTUATION[(self.0 - 37) as usize]),
            _ => None,
        }
    }

    pub fn from_bits(bits: u32) -> Option<CharCode6> {
        (bits < 64).then_some(CharCode6(bits as u8))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

pub fn punctuation_index(byte: u8) -> Option<usize> {
    PUNCTUATION.iter().position(|&p| p == byte)
}

pub fn is_punctuation(byte: u8) -> bool {
    punctuation_index(byte).is_some()
}

/// Sentence-ending marks after which a capitalised word is the default.
pub fn ends_sentence(byte: u8) -> bool {
    matches!(byte, b'.' | b'!' | b'?')
}

pub fn is_joiner(byte: u8) -> bool {
    byte == b'\'' || byte == b'-'
}

/// Length of the word starting at `text[0]`: letters, with single
/// apostrophes or hyphens allowed only between two letters.
///
/// Returns 0 when `text` does not start with an ASCII letter.
pub fn word_len(text: &[u8]) -> usize {
    let mut end = 0;
    loop {
        while end < text.len() && text[end].is_ascii_alphabetic() {
            end += 1;
        }
        if end == 0 {
            return 0;
        }
        match (text.get(end), text.get(end + 1)) {
            (Some(&j), Some(&next)) if is_joiner(j) && next.is_ascii_alphabetic() => end += 1,
            _ => return end,
        }
    }
}

/// True when the whole of `text` is one word in the sense of [`word_len`].
pub fn is_word(text: &[u8]) -> bool {
    !text.is_empty() && word_len(text) == text.len()
}

/// Checks a lowercased dictionary surface.
pub fn validate_word(word: &str) -> Result<(), InvalidReason> {
    if let Some(c) = word
        .chars()
        .find(|&c| !(c.is_ascii_lowercase() || (c.is_ascii() && is_joiner(c as u8))))
    {
        return Err(InvalidReason::Character(c));
    }
    if !is_word(word.as_bytes()) {
        return Err(InvalidReason::Shape);
    }
    if word.len() > MAX_SURFACE_LEN {
        return Err(InvalidReason::TooLong(word.len()));
    }
    Ok(())
}
