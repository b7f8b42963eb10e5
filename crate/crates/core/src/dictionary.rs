// SPDX-License-Identifier: Apache-2.0

//! The word lookup table.
//!
//! Codes are dense from zero. The first 54 codes always belong to the
//! punctuation entries (each symbol with and without a trailing space), the
//! wordlist follows in first-seen order, and the top 256 codes of the 19-bit
//! space are reserved for control tokens.
//!
//! Lookups go through 27 first-character buckets (`a` to `z`, then
//! everything else), each kept sorted so that a lookup is one bucket select
//! plus a binary search.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hasher;

use fnv::FnvHasher;

use crate::alphabet::{self, CharCode6, PUNCTUATION};
use crate::bitstream::BitBuffer;
use crate::error::{Error, Result};

/// A 19-bit table address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code19(u32);

impl Code19 {
    pub const WIDTH: u32 = 19;
    pub const MAX: u32 = (1 << Self::WIDTH) - 1;

    pub fn new(value: u32) -> Option<Code19> {
        (value <= Self::MAX).then_some(Code19(value))
    }

    pub const fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Code19 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#07x}", self.0)
    }
}

/// Number of addresses a 19-bit table can hold.
pub const TABLE_CAPACITY: u64 = 1 << Code19::WIDTH;
pub const RESERVED_BASE: u32 = 0x7FF00;
pub const RESERVED_BAND: u32 = 256;
/// Entries available to punctuation plus words.
pub const MAX_ENTRIES: usize = (TABLE_CAPACITY as usize) - RESERVED_BAND as usize;
/// Two entries per punctuation symbol.
pub const PUNCTUATION_ENTRIES: usize = 2 * PUNCTUATION.len();

/// Control tokens living in the reserved band, in code order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u32)]
pub enum ReservedToken {
    LiteralBegin,
    RawBegin,
    CaseUpperSingle,
    CaseUpperBegin,
    CaseUpperEnd,
    CaseTitleSingle,
    CaseToggleSingle,
    CaseToggleBegin,
    CaseToggleEnd,
    SpaceExplicit,
    Newline,
    NoSpace,
    EndOfStream,
}

impl ReservedToken {
    pub const ALL: [ReservedToken; 13] = [
        ReservedToken::LiteralBegin,
        ReservedToken::RawBegin,
        ReservedToken::CaseUpperSingle,
        ReservedToken::CaseUpperBegin,
        ReservedToken::CaseUpperEnd,
        ReservedToken::CaseTitleSingle,
        ReservedToken::CaseToggleSingle,
        ReservedToken::CaseToggleBegin,
        ReservedToken::CaseToggleEnd,
        ReservedToken::SpaceExplicit,
        ReservedToken::Newline,
        ReservedToken::NoSpace,
        ReservedToken::EndOfStream,
    ];

    pub const fn code(self) -> Code19 {
        Code19(RESERVED_BASE + self as u32)
    }

    pub fn from_code(code: Code19) -> Option<ReservedToken> {
        let offset = code.0.checked_sub(RESERVED_BASE)?;
        Self::ALL.get(offset as usize).copied()
    }
}

pub fn is_reserved(code: Code19) -> bool {
    code.0 >= RESERVED_BASE
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub code: Code19,
    /// Lowercase word, or a single punctuation symbol.
    pub surface: String,
    /// Punctuation variant flag; always true for words.
    pub trailing_space: bool,
}

impl DictEntry {
    pub fn is_punctuation(&self) -> bool {
        (self.code.0 as usize) < PUNCTUATION_ENTRIES
    }
}

/// Result of resolving a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeLookup<'a> {
    Entry(&'a DictEntry),
    Reserved(ReservedToken),
    Absent,
}

const OTHER_BUCKET: usize = 26;
const BUCKETS: usize = 27;

fn bucket_of(surface: &[u8]) -> usize {
    match surface.first() {
        Some(&b @ b'a'..=b'z') => (b - b'a') as usize,
        _ => OTHER_BUCKET,
    }
}

/// Label of a bucket for reports: `a` to `z`, then `other`.
pub fn bucket_label(bucket: usize) -> String {
    if bucket < OTHER_BUCKET {
        ((b'a' + bucket as u8) as char).to_string()
    } else {
        "other".to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Dictionary {
    entries: Vec<DictEntry>,
    buckets: Vec<Vec<u32>>,
    digest: u64,
}

impl PartialEq for Dictionary {
    fn eq(&self, other: &Self) -> bool {
        self.digest == other.digest && self.entries == other.entries
    }
}

impl Eq for Dictionary {}

const MAGIC: &[u8; 4] = b"WPKD";
const FORMAT_VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 4 + 8;

impl Dictionary {
    /// Builds a table from wordlist lines.
    ///
    /// Blank lines and lines starting with `#` are skipped, words are
    /// lowercased and deduplicated. Line numbers in errors are 1-based.
    pub fn build<I, S>(lines: I) -> Result<Dictionary>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut entries = punctuation_entries();
        let mut seen = HashSet::new();
        for (idx, line) in lines.into_iter().enumerate() {
            let raw = line.as_ref().trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let word = raw.to_lowercase();
            alphabet::validate_word(&word).map_err(|reason| Error::InvalidWord {
                line: idx + 1,
                word: raw.to_string(),
                reason,
            })?;
            if seen.insert(word.clone()) {
                entries.push(DictEntry {
                    code: Code19(entries.len() as u32),
                    surface: word,
                    trailing_space: true,
                });
            }
        }
        if entries.len() > MAX_ENTRIES {
            return Err(Error::Capacity {
                count: entries.len(),
                max: MAX_ENTRIES,
            });
        }
        Ok(Self::from_entries(entries))
    }

    fn from_entries(entries: Vec<DictEntry>) -> Dictionary {
        let mut buckets = vec![Vec::new(); BUCKETS];
        for e in &entries {
            buckets[bucket_of(e.surface.as_bytes())].push(e.code.0);
        }
        for bucket in &mut buckets {
            bucket.sort_unstable_by(|&a, &b| {
                let (ea, eb) = (&entries[a as usize], &entries[b as usize]);
                (ea.surface.as_bytes(), ea.trailing_space)
                    .cmp(&(eb.surface.as_bytes(), eb.trailing_space))
            });
        }
        let digest = digest_of(&entries);
        Dictionary {
            entries,
            buckets,
            digest,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries excluding the auto-injected punctuation.
    pub fn word_count(&self) -> usize {
        self.entries.len() - PUNCTUATION_ENTRIES
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    pub fn words(&self) -> impl Iterator<Item = &DictEntry> {
        self.entries[PUNCTUATION_ENTRIES..].iter()
    }

    pub fn digest(&self) -> u64 {
        self.digest
    }

    /// Entry counts per first-character bucket, `a` to `z` then other.
    pub fn bucket_sizes(&self) -> Vec<usize> {
        self.buckets.iter().map(Vec::len).collect()
    }

    /// Mean surface length of the word entries, `None` without words.
    pub fn average_word_len(&self) -> Option<f64> {
        let n = self.word_count();
        (n > 0).then(|| self.words().map(|e| e.surface.len()).sum::<usize>() as f64 / n as f64)
    }

    /// Code of `(surface, trailing_space)`, if present. `surface` must be lowercase.
    pub fn lookup_code(&self, surface: &str, trailing_space: bool) -> Option<Code19> {
        let key = (surface.as_bytes(), trailing_space);
        let bucket = &self.buckets[bucket_of(surface.as_bytes())];
        bucket
            .binary_search_by(|&code| {
                let e = &self.entries[code as usize];
                (e.surface.as_bytes(), e.trailing_space).cmp(&key)
            })
            .ok()
            .map(|i| Code19(bucket[i]))
    }

    pub fn lookup_surface(&self, code: Code19) -> CodeLookup<'_> {
        if let Some(r) = ReservedToken::from_code(code) {
            return CodeLookup::Reserved(r);
        }
        match self.entries.get(code.0 as usize) {
            Some(e) if !is_reserved(code) => CodeLookup::Entry(e),
            _ => CodeLookup::Absent,
        }
    }

    /// Code of a punctuation symbol's entry.
    pub fn punctuation_code(symbol: u8, trailing_space: bool) -> Option<Code19> {
        let idx = alphabet::punctuation_index(symbol)?;
        Some(Code19((2 * idx + usize::from(!trailing_space)) as u32))
    }

    /// Compiled table: header followed by one bit-packed record per entry.
    ///
    /// Header: `WPKD`, version byte, entry count (u32 BE), digest (u64 BE).
    /// Record: 19-bit code, the surface as 6-bit characters, a `000000`
    /// terminator, then one bit for the trailing-space flag. Only the end of
    /// the record stream is padded.
    pub fn serialize_compiled(&self) -> Vec<u8> {
        let mut bits = BitBuffer::with_capacity(self.entries.len() * 68);
        for e in &self.entries {
            bits.write_bits(e.code.0, Code19::WIDTH)
                .expect("codes are 19-bit");
            for b in e.surface.bytes() {
                let c = CharCode6::encode(b).expect("surfaces are validated");
                bits.write_bits(c.value() as u32, CharCode6::WIDTH)
                    .expect("6-bit char");
            }
            bits.write_bits(0, CharCode6::WIDTH).expect("terminator");
            bits.write_bit(e.trailing_space);
        }
        bits.pad_to_byte();

        let mut out = Vec::with_capacity(HEADER_LEN + bits.as_bytes().len());
        out.extend_from_slice(MAGIC);
        out.push(FORMAT_VERSION);
        out.extend_from_slice(&(self.entries.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.digest.to_be_bytes());
        out.extend_from_slice(bits.as_bytes());
        out
    }

    pub fn load_compiled(bytes: &[u8]) -> Result<Dictionary> {
        if bytes.len() < 4 {
            return Err(Error::Truncated("dictionary header".into()));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::Format(format!(
                "bad dictionary magic {:?}",
                String::from_utf8_lossy(&bytes[..4])
            )));
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::Truncated("dictionary header".into()));
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported dictionary version {}",
                bytes[4]
            )));
        }
        let count = u32::from_be_bytes(bytes[5..9].try_into().unwrap()) as usize;
        let stored = u64::from_be_bytes(bytes[9..17].try_into().unwrap());
        if !(PUNCTUATION_ENTRIES..=MAX_ENTRIES).contains(&count) {
            return Err(Error::Corrupt(format!("implausible entry count {count}")));
        }

        let body = &bytes[HEADER_LEN..];
        let bits = BitBuffer::from_parts(body.to_vec(), body.len() * 8)?;
        let mut r = bits.reader();
        let mut entries = Vec::with_capacity(count);
        for index in 0..count {
            let code = r.read_bits(Code19::WIDTH)?;
            if code as usize != index {
                return Err(Error::Corrupt(format!(
                    "record {index} carries code {code:#x}"
                )));
            }
            let mut surface = String::new();
            loop {
                let c = CharCode6::from_bits(r.read_bits(CharCode6::WIDTH)?).unwrap();
                if c == CharCode6::TERMINATOR {
                    break;
                }
                if surface.len() == alphabet::MAX_SURFACE_LEN {
                    return Err(Error::Corrupt(format!("record {index} is unterminated")));
                }
                surface.push(c.decode().expect("nonzero codes decode") as char);
            }
            let trailing_space = r.read_bit()?;
            entries.push(DictEntry {
                code: Code19(code),
                surface,
                trailing_space,
            });
        }
        let rest = r.remaining();
        if rest >= 8 || (rest > 0 && r.read_bits(rest as u32)? != 0) {
            return Err(Error::Corrupt("trailing data after last record".into()));
        }

        let expected = punctuation_entries();
        if entries[..PUNCTUATION_ENTRIES] != expected[..] {
            return Err(Error::Corrupt("punctuation entries altered".into()));
        }
        let mut seen = HashSet::new();
        for e in &entries[PUNCTUATION_ENTRIES..] {
            if !e.trailing_space || alphabet::validate_word(&e.surface).is_err() {
                return Err(Error::Corrupt(format!("bad word record {:?}", e.surface)));
            }
            if !seen.insert(e.surface.as_str()) {
                return Err(Error::Corrupt(format!("duplicate word {:?}", e.surface)));
            }
        }
        let dict = Self::from_entries(entries);
        if dict.digest != stored {
            return Err(Error::Corrupt(format!(
                "digest mismatch: stored {stored:016x}, computed {:016x}",
                dict.digest
            )));
        }
        Ok(dict)
    }
}

fn punctuation_entries() -> Vec<DictEntry> {
    PUNCTUATION
        .iter()
        .flat_map(|&p| [true, false].map(|ts| (p, ts)))
        .enumerate()
        .map(|(i, (p, trailing_space))| DictEntry {
            code: Code19(i as u32),
            surface: (p as char).to_string(),
            trailing_space,
        })
        .collect()
}

/// FNV-1a 64 over `surface \t flag` lines joined by `\n`, in code order.
fn digest_of(entries: &[DictEntry]) -> u64 {
    let mut h = FnvHasher::default();
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            h.write(b"\n");
        }
        h.write(e.surface.as_bytes());
        h.write(if e.trailing_space { b"\t1" } else { b"\t0" });
    }
    h.finish()
}

/// Bits needed to store `entry_count` records of the compiled layout,
/// ignoring the one-bit variant flag: 19-bit address, `avg_word_chars`
/// rounded to whole 6-bit characters, 6-bit terminator.
pub fn table_memory_bits(entry_count: u64, avg_word_chars: f64) -> u64 {
    let chars = avg_word_chars.round().max(0.0) as u64;
    entry_count * (Code19::WIDTH as u64 + 6 * chars + CharCode6::WIDTH as u64)
}
