// SPDX-License-Identifier: Apache-2.0

//! Size accounting: the bit-cost model, reduction reports and the corpus
//! benchmark.
//!
//! "General" size is 8 bits per byte of the text. Reduced size counts the
//! codes a payload would hold before its end-of-stream framing. Percentages
//! are kept as exact integer ratios and rounded (half away from zero, two
//! decimals) only when displayed.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::alphabet::CharCode6;
use crate::codec::{self, CasePlan, EncodeOptions, RAW_LEN_WIDTH};
use crate::container::{self, SecondStage};
use crate::dictionary::{Code19, Dictionary};
use crate::error::Result;
use crate::tokenizer::{self, CaseClass, SpacingState, Token, TokenKind};

const CODE_BITS: u64 = Code19::WIDTH as u64;

/// `saved / general`, as a percentage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Percent {
    pub saved: i64,
    pub general: u64,
}

impl Percent {
    pub fn new(general: u64, reduced: u64) -> Percent {
        Percent {
            saved: general as i64 - reduced as i64,
            general,
        }
    }

    /// Percentage in hundredths of a percent, rounded half away from zero.
    /// `None` when the general size is zero.
    pub fn hundredths(&self) -> Option<i64> {
        if self.general == 0 {
            return None;
        }
        let num = 10_000 * self.saved as i128;
        let den = self.general as i128;
        let mag = (2 * num.abs() + den) / (2 * den);
        Some((mag * num.signum()) as i64)
    }

    pub fn as_f64(&self) -> Option<f64> {
        (self.general > 0).then(|| 100.0 * self.saved as f64 / self.general as f64)
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hundredths() {
            None => f.write_str("N/A"),
            Some(h) => {
                let sign = if h < 0 { "-" } else { "" };
                write!(f, "{sign}{}.{:02}%", h.abs() / 100, h.abs() % 100)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BitCost {
    pub general_bits: u64,
    /// Payload bits before the end-of-stream code.
    pub reduced_bits: u64,
    /// End-of-stream code plus padding.
    pub framing_bits: u64,
    /// 19-bit codes before the end-of-stream code.
    pub token_count: u64,
    pub word_count: u64,
    pub punct_count: u64,
}

impl BitCost {
    pub fn percent(&self) -> Percent {
        Percent::new(self.general_bits, self.reduced_bits)
    }

    pub fn total_bits(&self) -> u64 {
        self.reduced_bits + self.framing_bits
    }
}

/// Bit cost of encoding `tokens` with `dict`, without building the payload.
pub fn estimate(tokens: &[Token], dict: &Dictionary) -> Result<BitCost> {
    let mut cost = BitCost {
        general_bits: 8 * tokenizer::detokenize(tokens)?.len() as u64,
        ..BitCost::default()
    };
    let mut codes = 0u64;
    let mut extra = 0u64;
    let mut state = SpacingState::default();
    let mut run_left = 0usize;
    let raw_cost = |n: usize| (RAW_LEN_WIDTH as u64, 8 * n as u64);

    for (i, tok) in tokens.iter().enumerate() {
        match &tok.kind {
            TokenKind::Word { surface, case } => {
                cost.word_count += 1;
                codes += 1;
                if *case == CaseClass::Other {
                    let (len, body) = raw_cost(surface.len());
                    extra += len + body;
                } else {
                    if run_left == 0 {
                        let plan = codec::case_plan(tok, &state, &tokens[i + 1..]);
                        codes += plan.codes() as u64;
                        if let CasePlan::Run { words, .. } = plan {
                            run_left = words;
                        }
                    }
                    run_left = run_left.saturating_sub(1);
                    let lower = surface.to_ascii_lowercase();
                    if dict.lookup_code(&lower, true).is_none() {
                        extra += CharCode6::WIDTH as u64 * (lower.len() as u64 + 1);
                    }
                }
            }
            TokenKind::Punct { .. } => {
                cost.punct_count += 1;
                codes += 1;
            }
            TokenKind::ExtraSpace | TokenKind::Newline | TokenKind::NoSpace => codes += 1,
            TokenKind::Raw(bytes) => {
                codes += 1;
                let (len, body) = raw_cost(bytes.len());
                extra += len + body;
            }
        }
        state.observe(&tok.kind);
    }
    cost.token_count = codes;
    cost.reduced_bits = CODE_BITS * codes + extra;
    let framed = cost.reduced_bits + CODE_BITS;
    cost.framing_bits = CODE_BITS + (8 - framed % 8) % 8;
    Ok(cost)
}

/// Size comparison laid out like a results table: token composition, general
/// and reduced byte sizes, and the reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub words: u64,
    pub punctuation: u64,
    pub words_with_punctuation: u64,
    pub bits_per_word: u32,
    pub general_bytes: u64,
    pub reduced_bytes: u64,
    pub saved_bytes: i64,
    pub percent: Percent,
}

impl ReductionReport {
    pub fn new(words: u64, punctuation: u64, general_bytes: u64, reduced_bytes: u64) -> Self {
        let percent = Percent::new(general_bytes, reduced_bytes);
        ReductionReport {
            words,
            punctuation,
            words_with_punctuation: words + punctuation,
            bits_per_word: Code19::WIDTH,
            general_bytes,
            reduced_bytes,
            saved_bytes: percent.saved,
            percent,
        }
    }
}

impl fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "words                    {}", self.words)?;
        writeln!(f, "punctuation              {}", self.punctuation)?;
        writeln!(
            f,
            "words with punctuation   {}",
            self.words_with_punctuation
        )?;
        writeln!(f, "per word text size       {} bits", self.bits_per_word)?;
        writeln!(f, "general size             {} bytes", self.general_bytes)?;
        writeln!(f, "reduced size             {} bytes", self.reduced_bytes)?;
        writeln!(f, "size reduced             {} bytes", self.saved_bytes)?;
        write!(f, "reducing percentage      {}", self.percent)
    }
}

/// Pure arithmetic: every word and punctuation mark costs one 19-bit code.
pub fn report_table4(word_count: u64, punct_count: u64, general_bytes: u64) -> ReductionReport {
    let reduced_bytes = ((word_count + punct_count) * CODE_BITS).div_ceil(8);
    ReductionReport::new(word_count, punct_count, general_bytes, reduced_bytes)
}

/// Measured sizes for one text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileReport {
    pub report: ReductionReport,
    /// Reduced payload after the second stage.
    pub reduced_deflated_bytes: u64,
    /// Whole container files, header included.
    pub container_bytes: u64,
    pub container_deflated_bytes: u64,
}

/// Compresses `text` both with and without the second stage and reports the
/// payload body sizes.
pub fn measure(text: &[u8], dict: &Dictionary, stage: &dyn SecondStage) -> Result<FileReport> {
    let plain = container::compress_detailed(
        text,
        dict,
        EncodeOptions {
            second_stage: false,
        },
        stage,
    )?;
    let packed =
        container::compress_detailed(text, dict, EncodeOptions { second_stage: true }, stage)?;
    let (words, punct) = plain.tokens.iter().fold((0, 0), |(w, p), t| match t.kind {
        TokenKind::Word { .. } => (w + 1, p),
        TokenKind::Punct { .. } => (w, p + 1),
        _ => (w, p),
    });
    Ok(FileReport {
        report: ReductionReport::new(
            words,
            punct,
            text.len() as u64,
            plain.container.body.len() as u64,
        ),
        reduced_deflated_bytes: packed.container.body.len() as u64,
        container_bytes: plain.to_bytes().len() as u64,
        container_deflated_bytes: packed.to_bytes().len() as u64,
    })
}

#[derive(Debug, Clone)]
pub struct FileResult {
    pub path: PathBuf,
    pub outcome: std::result::Result<FileReport, String>,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub files: Vec<FileResult>,
}

impl BenchReport {
    fn successes(&self) -> impl Iterator<Item = &FileReport> {
        self.files.iter().filter_map(|f| f.outcome.as_ref().ok())
    }

    /// Arithmetic mean of the per-file reduction percentages (before the
    /// second stage); `None` when no file was measured.
    pub fn average_percent(&self) -> Option<f64> {
        let values: Vec<f64> = self
            .successes()
            .filter_map(|r| r.report.percent.as_f64())
            .collect();
        (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
    }

    pub fn average_deflated_percent(&self) -> Option<f64> {
        let values: Vec<f64> = self
            .successes()
            .filter_map(|r| Percent::new(r.report.general_bytes, r.reduced_deflated_bytes).as_f64())
            .collect();
        (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
    }

    /// Human-readable table, one row per file, then the averages.
    pub fn write_table(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(
            w,
            "{:<32} {:>10} {:>10} {:>10} {:>9} {:>9}",
            "file", "general", "reduced", "deflated", "reduced%", "deflated%"
        )?;
        for f in &self.files {
            let name = display_name(&f.path);
            match &f.outcome {
                Ok(r) => writeln!(
                    w,
                    "{:<32} {:>10} {:>10} {:>10} {:>9} {:>9}",
                    name,
                    r.report.general_bytes,
                    r.report.reduced_bytes,
                    r.reduced_deflated_bytes,
                    r.report.percent.to_string(),
                    Percent::new(r.report.general_bytes, r.reduced_deflated_bytes).to_string(),
                )?,
                Err(e) => writeln!(w, "{name:<32} error: {e}")?,
            }
        }
        if let (Some(avg), Some(avg_d)) = (self.average_percent(), self.average_deflated_percent())
        {
            writeln!(
                w,
                "average reduction {avg:.2}% (with second stage {avg_d:.2}%)"
            )?;
        }
        Ok(())
    }

    /// Tab-separated records with a header line:
    /// `path, general_bytes, reduced_bytes, reduced_deflated_bytes, percent`.
    /// Failed files carry `error` in the second column and the message in the
    /// third. A final `#average` line holds the mean percentage.
    pub fn write_records(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(
            w,
            "path\tgeneral_bytes\treduced_bytes\treduced_deflated_bytes\tpercent"
        )?;
        for f in &self.files {
            let path = f.path.display();
            match &f.outcome {
                Ok(r) => {
                    let pct = r.report.percent.to_string();
                    let pct = pct.trim_end_matches('%');
                    writeln!(
                        w,
                        "{path}\t{}\t{}\t{}\t{pct}",
                        r.report.general_bytes, r.report.reduced_bytes, r.reduced_deflated_bytes
                    )?
                }
                Err(e) => writeln!(w, "{path}\terror\t{}", e.replace(['\t', '\n'], " "))?,
            }
        }
        if let Some(avg) = self.average_percent() {
            writeln!(w, "#average\t{avg:.2}")?;
        }
        Ok(())
    }
}

fn display_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Measures every file; unreadable or failing files are recorded and skipped.
pub fn corpus_bench<P: AsRef<Path>>(
    paths: &[P],
    dict: &Dictionary,
    stage: &dyn SecondStage,
) -> BenchReport {
    let files = paths
        .iter()
        .map(|p| {
            let path = p.as_ref().to_path_buf();
            let outcome = std::fs::read(&path)
                .map_err(|e| e.to_string())
                .and_then(|text| measure(&text, dict, stage).map_err(|e| e.to_string()));
            FileResult { path, outcome }
        })
        .collect();
    BenchReport { files }
}
