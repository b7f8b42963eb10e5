// SPDX-License-Identifier: Apache-2.0

//! Token stream ⇄ 19-bit code payload.
//!
//! Layout of the payload, one item per token:
//!
//! * dictionary word: optional case token, then the word's code
//! * out-of-table word: optional case token, `LITERAL_BEGIN`, one 6-bit
//!   character per letter, `000000`
//! * punctuation: the entry code for its spacing variant
//! * extra space, newline, no-space: the matching reserved code
//! * raw bytes, and words whose capitalisation has no case token:
//!   `RAW_BEGIN`, a 32-bit byte count, then the bytes
//!
//! followed by `END_OF_STREAM` and zero padding to a byte boundary.
//!
//! Capitalisation defaults to the sentence rule (capital first letter at a
//! sentence start, lowercase elsewhere) with the pronoun "i" always
//! capitalised. `CASE_TITLE_SINGLE` flips that default for one word;
//! `CASE_UPPER_*` and `CASE_TOGGLE_*` set it outright, either for one word
//! or for every word between a `BEGIN` and its `END`.

use crate::alphabet::{self, CharCode6};
use crate::bitstream::{BitBuffer, BitReader};
use crate::dictionary::{Code19, CodeLookup, Dictionary, ReservedToken};
use crate::error::{Error, Result};
use crate::tokenizer::{self, CaseClass, SpacingState, Token, TokenKind};

/// Width of the byte count that follows `RAW_BEGIN`.
pub const RAW_LEN_WIDTH: u32 = 32;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Deflate the payload before framing it in a container.
    pub second_stage: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Payload {
    /// Padded to a byte boundary.
    pub bits: BitBuffer,
    /// Bits before the `END_OF_STREAM` code.
    pub content_bits: usize,
    /// 19-bit codes written, `END_OF_STREAM` included.
    pub token_count: usize,
    pub literal_char_count: usize,
    pub raw_byte_count: usize,
}

impl Payload {
    /// Bits up to and including `END_OF_STREAM`.
    pub fn framed_bits(&self) -> usize {
        self.content_bits + Code19::WIDTH as usize
    }
}

/// Case tokens a word needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasePlan {
    None,
    Single(ReservedToken),
    /// Open a run covering this word and the next `words - 1` words.
    Run {
        begin: ReservedToken,
        end: ReservedToken,
        words: usize,
    },
}

impl CasePlan {
    /// Number of reserved codes the plan adds.
    pub fn codes(&self) -> usize {
        match self {
            CasePlan::None => 0,
            CasePlan::Single(_) => 1,
            CasePlan::Run { .. } => 2,
        }
    }
}

fn default_capital(lower: &str, state: &SpacingState) -> bool {
    state.expects_sentence_case || lower == "i"
}

fn letter_count(surface: &str) -> usize {
    surface.bytes().filter(u8::is_ascii_alphabetic).count()
}

/// Words in the run of `class` starting at the current word: following words
/// of the same class, skipping non-word tokens, up to the first word of
/// another class.
fn run_len(class: CaseClass, lookahead: &[Token]) -> usize {
    1 + lookahead
        .iter()
        .filter_map(|t| match &t.kind {
            TokenKind::Word { case, .. } => Some(*case),
            _ => None,
        })
        .take_while(|&c| c == class)
        .count()
}

/// Case tokens for `word` given the sentence state and the tokens after it.
///
/// Words in [`CaseClass::Other`] need none because they travel as raw bytes.
pub fn case_plan(word: &Token, state: &SpacingState, lookahead: &[Token]) -> CasePlan {
    let TokenKind::Word { surface, case } = &word.kind else {
        return CasePlan::None;
    };
    let lower = surface.to_ascii_lowercase();
    let default = default_capital(&lower, state);
    let run = |begin, end, single| {
        let words = run_len(*case, lookahead);
        if words >= 2 {
            CasePlan::Run { begin, end, words }
        } else {
            CasePlan::Single(single)
        }
    };
    match case {
        CaseClass::Lower if default => CasePlan::Single(ReservedToken::CaseTitleSingle),
        CaseClass::Lower => CasePlan::None,
        CaseClass::Sentence | CaseClass::Title if default => CasePlan::None,
        CaseClass::Sentence | CaseClass::Title => CasePlan::Single(ReservedToken::CaseTitleSingle),
        CaseClass::Upper => match run(
            ReservedToken::CaseUpperBegin,
            ReservedToken::CaseUpperEnd,
            ReservedToken::CaseUpperSingle,
        ) {
            CasePlan::Single(_) if default && letter_count(surface) == 1 => CasePlan::None,
            plan => plan,
        },
        CaseClass::Toggle => run(
            ReservedToken::CaseToggleBegin,
            ReservedToken::CaseToggleEnd,
            ReservedToken::CaseToggleSingle,
        ),
        CaseClass::Other => CasePlan::None,
    }
}

struct Writer {
    bits: BitBuffer,
    token_count: usize,
    literal_char_count: usize,
    raw_byte_count: usize,
}

impl Writer {
    fn code(&mut self, code: Code19) {
        self.bits
            .write_bits(code.value(), Code19::WIDTH)
            .expect("codes are 19-bit");
        self.token_count += 1;
    }

    fn reserved(&mut self, r: ReservedToken) {
        self.code(r.code());
    }

    fn literal(&mut self, lower: &str) {
        self.reserved(ReservedToken::LiteralBegin);
        for b in lower.bytes() {
            let c = CharCode6::encode(b).expect("word characters are in the alphabet");
            self.bits
                .write_bits(c.value() as u32, CharCode6::WIDTH)
                .expect("6-bit char");
        }
        self.bits
            .write_bits(0, CharCode6::WIDTH)
            .expect("terminator");
        self.literal_char_count += lower.len();
    }

    fn raw(&mut self, bytes: &[u8]) -> Result<()> {
        let len = u32::try_from(bytes.len())
            .map_err(|_| Error::Internal(format!("raw run of {} bytes", bytes.len())))?;
        self.reserved(ReservedToken::RawBegin);
        self.bits.write_bits(len, RAW_LEN_WIDTH)?;
        for &b in bytes {
            self.bits.write_bits(b as u32, 8)?;
        }
        self.raw_byte_count += bytes.len();
        Ok(())
    }
}

/// Reduces a token stream to a payload.
pub fn encode(tokens: &[Token], dict: &Dictionary) -> Result<Payload> {
    let mut w = Writer {
        bits: BitBuffer::with_capacity(tokens.len() * 19 + 32),
        token_count: 0,
        literal_char_count: 0,
        raw_byte_count: 0,
    };
    let mut state = SpacingState::default();
    // (END token, words left in the open run)
    let mut run: Option<(ReservedToken, usize)> = None;

    for (i, tok) in tokens.iter().enumerate() {
        match &tok.kind {
            TokenKind::Word {
                surface,
                case: CaseClass::Other,
            } => w.raw(surface.as_bytes())?,
            TokenKind::Word { surface, .. } => {
                if run.is_none() {
                    match case_plan(tok, &state, &tokens[i + 1..]) {
                        CasePlan::None => {}
                        CasePlan::Single(r) => w.reserved(r),
                        CasePlan::Run { begin, end, words } => {
                            w.reserved(begin);
                            run = Some((end, words));
                        }
                    }
                }
                let lower = surface.to_ascii_lowercase();
                match dict.lookup_code(&lower, true) {
                    Some(code) => w.code(code),
                    None => w.literal(&lower),
                }
                if let Some((end, left)) = run.as_mut() {
                    *left -= 1;
                    if *left == 0 {
                        w.reserved(*end);
                        run = None;
                    }
                }
            }
            TokenKind::Punct {
                symbol,
                no_space_after,
            } => {
                let surface = (*symbol as char).to_string();
                let code = dict.lookup_code(&surface, !no_space_after).ok_or_else(|| {
                    Error::Internal(format!("dictionary lacks punctuation entry {surface:?}"))
                })?;
                w.code(code);
            }
            TokenKind::ExtraSpace => w.reserved(ReservedToken::SpaceExplicit),
            TokenKind::Newline => w.reserved(ReservedToken::Newline),
            TokenKind::NoSpace => w.reserved(ReservedToken::NoSpace),
            TokenKind::Raw(bytes) => w.raw(bytes)?,
        }
        state.observe(&tok.kind);
    }
    if run.is_some() {
        return Err(Error::Internal("case run left open".into()));
    }

    let content_bits = w.bits.bit_len();
    w.reserved(ReservedToken::EndOfStream);
    w.bits.pad_to_byte();
    Ok(Payload {
        bits: w.bits,
        content_bits,
        token_count: w.token_count,
        literal_char_count: w.literal_char_count,
        raw_byte_count: w.raw_byte_count,
    })
}

/// Single-word case marker waiting for its word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Marker {
    Upper,
    Title,
    Toggle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Run {
    Upper,
    Toggle,
}

struct Decoder<'a> {
    dict: &'a Dictionary,
    state: SpacingState,
    marker: Option<Marker>,
    /// Open run and the number of words seen inside it.
    run: Option<(Run, usize)>,
    out: Vec<TokenKind>,
}

impl Decoder<'_> {
    fn structure(&self, what: &str) -> Error {
        Error::Structure(format!("{what} after {} tokens", self.out.len()))
    }

    fn push(&mut self, kind: TokenKind) -> Result<()> {
        if self.marker.is_some() && !kind.is_word() {
            return Err(self.structure("case token not followed by a word"));
        }
        self.state.observe(&kind);
        self.out.push(kind);
        Ok(())
    }

    fn word(&mut self, lower: &str) -> Result<()> {
        let case = if let Some((run, seen)) = self.run.as_mut() {
            *seen += 1;
            match run {
                Run::Upper => CaseClass::Upper,
                Run::Toggle => CaseClass::Toggle,
            }
        } else {
            match self.marker.take() {
                Some(Marker::Upper) => CaseClass::Upper,
                Some(Marker::Toggle) => CaseClass::Toggle,
                flip => {
                    let expects = self.state.expects_sentence_case;
                    let capital =
                        default_capital(lower, &self.state) ^ (flip == Some(Marker::Title));
                    match (capital, expects, letter_count(lower) == 1) {
                        (false, _, _) => CaseClass::Lower,
                        (true, true, _) => CaseClass::Sentence,
                        (true, false, true) => CaseClass::Upper,
                        (true, false, false) => CaseClass::Title,
                    }
                }
            }
        };
        if case == CaseClass::Toggle && letter_count(lower) < 2 {
            return Err(Error::Corrupt(format!("toggle case on {lower:?}")));
        }
        let surface = tokenizer::apply_case(lower, case);
        self.push(TokenKind::Word { surface, case })
    }

    fn set_marker(&mut self, marker: Marker) -> Result<()> {
        if self.marker.is_some() || self.run.is_some() {
            return Err(self.structure("nested case token"));
        }
        self.marker = Some(marker);
        Ok(())
    }

    fn open(&mut self, run: Run) -> Result<()> {
        if self.marker.is_some() || self.run.is_some() {
            return Err(self.structure("nested case run"));
        }
        self.run = Some((run, 0));
        Ok(())
    }

    fn close(&mut self, run: Run) -> Result<()> {
        match self.run {
            Some((open, seen)) if open == run && seen > 0 => {
                self.run = None;
                Ok(())
            }
            Some((open, _)) if open == run => Err(self.structure("empty case run")),
            _ => Err(self.structure("case run end without begin")),
        }
    }

    fn literal(&mut self, r: &mut BitReader<'_>) -> Result<()> {
        let mut lower = String::new();
        loop {
            let c = CharCode6::from_bits(r.read_bits(CharCode6::WIDTH)?).expect("6 bits");
            if c == CharCode6::TERMINATOR {
                break;
            }
            lower.push(c.decode().expect("nonzero char codes decode") as char);
        }
        if !alphabet::is_word(lower.as_bytes()) {
            return Err(Error::Corrupt(format!("literal {lower:?} is not a word")));
        }
        self.word(&lower)
    }

    fn raw(&mut self, r: &mut BitReader<'_>) -> Result<()> {
        let len = r.read_bits(RAW_LEN_WIDTH)? as usize;
        if len == 0 {
            return Err(Error::Corrupt("empty raw run".into()));
        }
        if r.remaining() / 8 < len {
            return Err(Error::Truncated(format!("raw run of {len} bytes")));
        }
        let bytes: Vec<u8> = (0..len)
            .map(|_| r.read_bits(8).map(|b| b as u8))
            .collect::<Result<_>>()?;
        if self.marker.is_some() {
            return Err(self.structure("case token before raw bytes"));
        }
        if alphabet::is_word(&bytes) {
            let surface = String::from_utf8(bytes).expect("ascii");
            let case = match tokenizer::classify_case(&surface)? {
                CaseClass::Other => CaseClass::Other,
                _ => tokenizer::classify_in_context(&surface, self.state.expects_sentence_case)?,
            };
            self.push(TokenKind::Word { surface, case })
        } else {
            self.push(TokenKind::Raw(bytes))
        }
    }
}

/// Inverse of [`encode`] for the same dictionary.
pub fn decode(bits: &BitBuffer, dict: &Dictionary) -> Result<Vec<Token>> {
    let mut d = Decoder {
        dict,
        state: SpacingState::default(),
        marker: None,
        run: None,
        out: Vec::new(),
    };
    let mut r = bits.reader();
    loop {
        let code = Code19::new(r.read_bits(Code19::WIDTH)?).expect("19 bits");
        match d.dict.lookup_surface(code) {
            CodeLookup::Entry(e) if e.is_punctuation() => {
                let symbol = e.surface.as_bytes()[0];
                d.push(TokenKind::punct(symbol, !e.trailing_space))?;
            }
            CodeLookup::Entry(e) => {
                let surface = e.surface.clone();
                d.word(&surface)?;
            }
            CodeLookup::Absent => {
                return Err(Error::Corrupt(format!(
                    "unassigned code {code} at bit {}",
                    r.position() - Code19::WIDTH as usize
                )))
            }
            CodeLookup::Reserved(tok) => match tok {
                ReservedToken::LiteralBegin => d.literal(&mut r)?,
                ReservedToken::RawBegin => d.raw(&mut r)?,
                ReservedToken::CaseUpperSingle => d.set_marker(Marker::Upper)?,
                ReservedToken::CaseTitleSingle => d.set_marker(Marker::Title)?,
                ReservedToken::CaseToggleSingle => d.set_marker(Marker::Toggle)?,
                ReservedToken::CaseUpperBegin => d.open(Run::Upper)?,
                ReservedToken::CaseUpperEnd => d.close(Run::Upper)?,
                ReservedToken::CaseToggleBegin => d.open(Run::Toggle)?,
                ReservedToken::CaseToggleEnd => d.close(Run::Toggle)?,
                ReservedToken::SpaceExplicit => d.push(TokenKind::ExtraSpace)?,
                ReservedToken::Newline => d.push(TokenKind::Newline)?,
                ReservedToken::NoSpace => d.push(TokenKind::NoSpace)?,
                ReservedToken::EndOfStream => break,
            },
        }
    }
    if d.marker.is_some() {
        return Err(d.structure("dangling case token"));
    }
    if d.run.is_some() {
        return Err(d.structure("case run without end"));
    }
    let rest = r.remaining();
    if rest >= 8 || (rest > 0 && r.read_bits(rest as u32)? != 0) {
        return Err(Error::Corrupt("data after end of stream".into()));
    }
    tokenizer::with_spans(d.out)
}
