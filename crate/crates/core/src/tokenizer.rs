// SPDX-License-Identifier: Apache-2.0

//! Lossless text ⇄ token conversion.
//!
//! Spacing is canonical: a single space between two words is implicit, a
//! punctuation token records whether one space follows it, and every other
//! space becomes an [`TokenKind::ExtraSpace`]. Bytes that no other token can
//! express (digits, tabs, carriage returns, non-ASCII) travel as
//! [`TokenKind::Raw`] runs with no implicit spacing around them.
//!
//! `detokenize(&tokenize(t)) == t` holds for every byte string.

use std::ops::Range;

use crate::alphabet::{self, is_punctuation};
use crate::error::{Error, Result};

/// Capitalisation pattern of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseClass {
    Lower,
    /// Capitalised where a sentence starts.
    Sentence,
    Upper,
    /// Capitalised anywhere else.
    Title,
    /// First letter lower, all later letters upper.
    Toggle,
    Other,
}

/// Context-free case of a word. Never returns [`CaseClass::Title`]; a lone
/// uppercase letter is [`CaseClass::Upper`].
pub fn classify_case(surface: &str) -> Result<CaseClass> {
    let mut letters = surface.bytes().filter(u8::is_ascii_alphabetic);
    let first = letters
        .next()
        .ok_or_else(|| Error::NoLetters(surface.to_string()))?;
    let (mut lower, mut upper) = (0usize, 0usize);
    for b in letters {
        if b.is_ascii_uppercase() {
            upper += 1;
        } else {
            lower += 1;
        }
    }
    Ok(match (first.is_ascii_uppercase(), lower, upper) {
        (false, _, 0) => CaseClass::Lower,
        (true, 0, _) => CaseClass::Upper,
        (true, _, 0) => CaseClass::Sentence,
        (false, 0, _) => CaseClass::Toggle,
        _ => CaseClass::Other,
    })
}

/// Case of a word given whether a sentence start is expected.
pub fn classify_in_context(surface: &str, expects_sentence_case: bool) -> Result<CaseClass> {
    let class = classify_case(surface)?;
    let single = surface.bytes().filter(u8::is_ascii_alphabetic).count() == 1;
    Ok(match class {
        CaseClass::Sentence if !expects_sentence_case => CaseClass::Title,
        CaseClass::Upper if single && expects_sentence_case => CaseClass::Sentence,
        c => c,
    })
}

/// Renders a lowercase surface in `class`. `Other` leaves it unchanged.
pub fn apply_case(lower: &str, class: CaseClass) -> String {
    let mut first = true;
    lower
        .bytes()
        .map(|b| {
            if !b.is_ascii_alphabetic() {
                return b as char;
            }
            let up = match class {
                CaseClass::Lower | CaseClass::Other => false,
                CaseClass::Sentence | CaseClass::Title => first,
                CaseClass::Upper => true,
                CaseClass::Toggle => !first,
            };
            first = false;
            if up {
                b.to_ascii_uppercase() as char
            } else {
                b as char
            }
        })
        .collect()
}

/// Tracks whether the next word opens a sentence: true at the start and
/// after `.`, `!` or `?`, cleared by any word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpacingState {
    pub expects_sentence_case: bool,
}

impl Default for SpacingState {
    fn default() -> Self {
        Self {
            expects_sentence_case: true,
        }
    }
}

impl SpacingState {
    pub fn observe(&mut self, kind: &TokenKind) {
        match kind {
            TokenKind::Word { .. } => self.expects_sentence_case = false,
            TokenKind::Punct { symbol, .. } if alphabet::ends_sentence(*symbol) => {
                self.expects_sentence_case = true
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenKind {
    /// Letters with inner apostrophes or hyphens, in original case.
    Word {
        surface: String,
        case: CaseClass,
    },
    Punct {
        symbol: u8,
        no_space_after: bool,
    },
    ExtraSpace,
    Newline,
    /// Suppresses the implicit space before the next word.
    NoSpace,
    Raw(Vec<u8>),
}

impl TokenKind {
    pub fn word(surface: &str, case: CaseClass) -> TokenKind {
        TokenKind::Word {
            surface: surface.to_string(),
            case,
        }
    }

    pub fn punct(symbol: u8, no_space_after: bool) -> TokenKind {
        TokenKind::Punct {
            symbol,
            no_space_after,
        }
    }

    pub fn is_word(&self) -> bool {
        matches!(self, TokenKind::Word { .. })
    }
}

/// A token and the bytes of the text it accounts for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Range<usize>,
}

pub fn tokenize(text: &[u8]) -> Vec<Token> {
    let kinds = tokenize_kinds(text);
    with_spans(kinds).expect("tokenizer output is well formed")
}

fn tokenize_kinds(text: &[u8]) -> Vec<TokenKind> {
    let mut out = Vec::new();
    let mut state = SpacingState::default();
    let mut prev_word = false;
    let mut i = 0;
    while i < text.len() {
        let b = text[i];
        let kind = if b.is_ascii_alphabetic() {
            let n = alphabet::word_len(&text[i..]);
            let surface = std::str::from_utf8(&text[i..i + n]).expect("ascii word");
            let case = classify_in_context(surface, state.expects_sentence_case)
                .expect("words contain letters");
            i += n;
            prev_word = true;
            TokenKind::word(surface, case)
        } else if b == b' ' {
            let run = text[i..].iter().take_while(|&&c| c == b' ').count();
            i += run;
            let implicit = prev_word && text.get(i).is_some_and(u8::is_ascii_alphabetic);
            out.extend(std::iter::repeat_n(
                TokenKind::ExtraSpace,
                run - usize::from(implicit),
            ));
            continue;
        } else if b == b'\n' {
            i += 1;
            prev_word = false;
            TokenKind::Newline
        } else if is_punctuation(b) {
            let spaced = text.get(i + 1) == Some(&b' ');
            i += 1 + usize::from(spaced);
            prev_word = false;
            TokenKind::punct(b, !spaced)
        } else {
            let start = i;
            while i < text.len() && !starts_token(text[i]) {
                i += 1;
            }
            prev_word = false;
            TokenKind::Raw(text[start..i].to_vec())
        };
        state.observe(&kind);
        out.push(kind);
    }
    out
}

/// Distinct lowercased word surfaces in first-seen order; a wordlist that
/// gives a text full dictionary coverage.
pub fn vocabulary(tokens: &[Token]) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    tokens
        .iter()
        .filter_map(|t| match &t.kind {
            TokenKind::Word { surface, .. } => Some(surface.to_ascii_lowercase()),
            _ => None,
        })
        .filter(|w| w.len() <= alphabet::MAX_SURFACE_LEN && seen.insert(w.clone()))
        .collect()
}

fn starts_token(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b' ' || b == b'\n' || is_punctuation(b)
}

/// Canonical text of a token stream.
pub fn detokenize(tokens: &[Token]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    Renderer::default().render_all(tokens.iter().map(|t| &t.kind), &mut out, |_| {})?;
    Ok(out)
}

/// Attaches to each token the byte range it occupies in the detokenized text.
pub fn with_spans(kinds: Vec<TokenKind>) -> Result<Vec<Token>> {
    let mut spans = Vec::with_capacity(kinds.len());
    let mut out = Vec::new();
    Renderer::default().render_all(kinds.iter(), &mut out, |span| spans.push(span))?;
    Ok(kinds
        .into_iter()
        .zip(spans)
        .map(|(kind, span)| Token { kind, span })
        .collect())
}

#[derive(Default)]
struct Renderer {
    prev_word: bool,
}

impl Renderer {
    fn render_all<'a>(
        &mut self,
        kinds: impl IntoIterator<Item = &'a TokenKind>,
        out: &mut Vec<u8>,
        mut span: impl FnMut(Range<usize>),
    ) -> Result<()> {
        for (index, kind) in kinds.into_iter().enumerate() {
            self.check(kind)
                .map_err(|msg| Error::Structure(format!("token {index}: {msg}")))?;
            match kind {
                TokenKind::Word { surface, .. } => {
                    if self.prev_word {
                        out.push(b' ');
                    }
                    let start = out.len();
                    out.extend_from_slice(surface.as_bytes());
                    span(start..out.len());
                    self.prev_word = true;
                }
                TokenKind::ExtraSpace => {
                    out.push(b' ');
                    span(out.len() - 1..out.len());
                }
                other => {
                    let start = out.len();
                    match other {
                        TokenKind::Punct {
                            symbol,
                            no_space_after,
                        } => {
                            out.push(*symbol);
                            if !no_space_after {
                                out.push(b' ');
                            }
                        }
                        TokenKind::Newline => out.push(b'\n'),
                        TokenKind::Raw(bytes) => out.extend_from_slice(bytes),
                        _ => {}
                    }
                    span(start..out.len());
                    self.prev_word = false;
                }
            }
        }
        Ok(())
    }

    fn check(&self, kind: &TokenKind) -> std::result::Result<(), String> {
        match kind {
            TokenKind::Word { surface, case } => {
                if !alphabet::is_word(surface.as_bytes()) {
                    return Err(format!("{surface:?} is not a word"));
                }
                let actual = classify_case(surface).map_err(|e| e.to_string())?;
                let consistent = match (case, actual) {
                    (CaseClass::Sentence | CaseClass::Title, CaseClass::Sentence) => true,
                    (CaseClass::Sentence | CaseClass::Title, CaseClass::Upper) => {
                        surface.bytes().filter(u8::is_ascii_alphabetic).count() == 1
                    }
                    (c, a) => *c == a,
                };
                if !consistent {
                    return Err(format!("{surface:?} is not {case:?} case"));
                }
            }
            TokenKind::Punct { symbol, .. } if !is_punctuation(*symbol) => {
                return Err(format!("{:?} is not punctuation", *symbol as char));
            }
            TokenKind::Raw(bytes) if bytes.is_empty() => return Err("empty raw run".into()),
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use CaseClass::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text.as_bytes())
            .into_iter()
            .map(|t| t.kind)
            .collect()
    }

    fn w(s: &str, c: CaseClass) -> TokenKind {
        TokenKind::word(s, c)
    }

    #[test]
    fn simple_sentence() {
        let k = kinds("He is a very good boy.");
        assert_eq!(
            k,
            vec![
                w("He", Sentence),
                w("is", Lower),
                w("a", Lower),
                w("very", Lower),
                w("good", Lower),
                w("boy", Lower),
                TokenKind::punct(b'.', true),
            ]
        );
        let k = kinds("Several systematic tabular methods for machine reduction exists.");
        assert_eq!(k.len(), 9);
        assert_eq!(k.iter().filter(|t| t.is_word()).count(), 8);
    }

    #[test]
    fn extra_space_and_spacing_variants() {
        assert_eq!(
            kinds("a  b"),
            vec![w("a", Lower), TokenKind::ExtraSpace, w("b", Lower)]
        );
        assert_eq!(
            kinds("a, b"),
            vec![w("a", Lower), TokenKind::punct(b',', false), w("b", Lower)]
        );
        assert_eq!(
            kinds("a,b"),
            vec![w("a", Lower), TokenKind::punct(b',', true), w("b", Lower)]
        );
        assert_eq!(
            kinds("a ."),
            vec![
                w("a", Lower),
                TokenKind::ExtraSpace,
                TokenKind::punct(b'.', true)
            ]
        );
        assert_eq!(
            kinds("  "),
            vec![TokenKind::ExtraSpace, TokenKind::ExtraSpace]
        );
    }

    #[test]
    fn raw_runs() {
        assert_eq!(
            kinds("caf\u{e9} 42\tx"),
            vec![
                w("caf", Lower),
                TokenKind::Raw("\u{e9}".into()),
                TokenKind::ExtraSpace,
                TokenKind::Raw(b"42\t".to_vec()),
                w("x", Lower),
            ]
        );
    }

    #[test]
    fn joined_words() {
        assert_eq!(
            kinds("they don't sun-bath"),
            vec![w("they", Lower), w("don't", Lower), w("sun-bath", Lower)]
        );
    }

    #[test]
    fn sentence_state() {
        let k = kinds("A cat. I saw A NASA rover! it");
        let cases: Vec<_> = k
            .iter()
            .filter_map(|t| match t {
                TokenKind::Word { case, .. } => Some(*case),
                _ => None,
            })
            .collect();
        assert_eq!(
            cases,
            vec![Sentence, Lower, Sentence, Lower, Upper, Upper, Lower, Lower]
        );
        let k = kinds("Leo Tolstoy wrote");
        assert_eq!(k[1], w("Tolstoy", Title));
    }

    #[test]
    fn classification() {
        assert_eq!(classify_case("and").unwrap(), Lower);
        assert_eq!(classify_case("He").unwrap(), Sentence);
        assert_eq!(classify_case("tOGGLE").unwrap(), Toggle);
        assert_eq!(classify_case("NASA").unwrap(), Upper);
        assert_eq!(classify_case("I").unwrap(), Upper);
        assert_eq!(classify_case("McDonald").unwrap(), Other);
        assert_eq!(classify_case("iPhone").unwrap(), Other);
        assert_eq!(classify_case("dON'T").unwrap(), Toggle);
        assert!(matches!(classify_case("'-"), Err(Error::NoLetters(_))));
        assert_eq!(classify_in_context("A", true).unwrap(), Sentence);
        assert_eq!(classify_in_context("A", false).unwrap(), Upper);
        assert_eq!(classify_in_context("He", false).unwrap(), Title);
    }

    #[test]
    fn apply_case_inverts_classification() {
        for s in ["and", "He", "NASA", "tOGGLE", "Sun-bath", "DON'T", "x"] {
            let class = classify_case(s).unwrap();
            assert_eq!(apply_case(&s.to_ascii_lowercase(), class), s);
        }
    }

    #[test]
    fn detokenize_rules() {
        let t = with_spans(vec![]).unwrap();
        assert_eq!(detokenize(&t).unwrap(), b"");
        let t = with_spans(vec![
            w("a", Lower),
            TokenKind::punct(b',', false),
            w("b", Lower),
        ])
        .unwrap();
        assert_eq!(detokenize(&t).unwrap(), b"a, b");
        let t = with_spans(vec![
            w("a", Lower),
            TokenKind::NoSpace,
            w("b", Lower),
            TokenKind::Newline,
            w("c", Lower),
        ])
        .unwrap();
        assert_eq!(detokenize(&t).unwrap(), b"ab\nc");
    }

    #[test]
    fn detokenize_rejects_malformed() {
        for bad in [
            w("a b", Lower),
            w("He", Lower),
            w("NASA", Title),
            TokenKind::punct(b'<', true),
            TokenKind::Raw(vec![]),
        ] {
            assert!(matches!(with_spans(vec![bad]), Err(Error::Structure(_))));
        }
    }

    #[test]
    fn spans_cover_source() {
        let text = b"Hi,  there. \xff ok";
        let tokens = tokenize(text);
        for t in &tokens {
            match &t.kind {
                TokenKind::Word { surface, .. } => {
                    assert_eq!(&text[t.span.clone()], surface.as_bytes())
                }
                TokenKind::Raw(b) => assert_eq!(&text[t.span.clone()], &b[..]),
                _ => {}
            }
        }
    }

    const EXAMPLE_5: &str = include_str!("../../../fixtures/corpus/01-performance.txt");

    #[test]
    fn example_paragraph_round_trip() {
        let t = tokenize(EXAMPLE_5.as_bytes());
        assert_eq!(detokenize(&t).unwrap(), EXAMPLE_5.as_bytes());
    }

    fn texty() -> impl Strategy<Value = Vec<u8>> {
        let atoms = prop_oneof![
            4 => "[a-zA-Z]{1,8}".prop_map(String::into_bytes),
            2 => Just(b" ".to_vec()),
            1 => " {2,4}".prop_map(String::into_bytes),
            2 => "[.,;:!?'\"()\\-]".prop_map(String::into_bytes),
            1 => Just(b"\n".to_vec()),
            1 => prop::collection::vec(any::<u8>(), 1..4),
        ];
        prop::collection::vec(atoms, 0..40).prop_map(|v| v.concat())
    }

    proptest! {
        #[test]
        fn round_trip_arbitrary_bytes(text in prop::collection::vec(any::<u8>(), 0..200)) {
            prop_assert_eq!(detokenize(&tokenize(&text)).unwrap(), text);
        }

        #[test]
        fn round_trip_texty(text in texty()) {
            let tokens = tokenize(&text);
            prop_assert_eq!(detokenize(&tokens).unwrap(), text);
            let mut state = SpacingState::default();
            for t in &tokens {
                if let TokenKind::Word { case: CaseClass::Sentence, .. } = t.kind {
                    prop_assert!(state.expects_sentence_case);
                }
                state.observe(&t.kind);
            }
        }
    }
}
