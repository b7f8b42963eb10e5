// SPDX-License-Identifier: Apache-2.0

//! The `wordpack` command line.
//!
//! Reports go to stdout and diagnostics to stderr. Exit codes:
//!
//! | code | meaning                                  |
//! |------|------------------------------------------|
//! | 0    | success                                  |
//! | 1    | internal error                           |
//! | 2    | usage error                              |
//! | 3    | I/O error                                |
//! | 4    | file format error (magic, version, flags)|
//! | 5    | container made with another dictionary   |
//! | 6    | corrupt data                             |
//! | 7    | truncated data                           |
//! | 8    | invalid word in a wordlist               |
//! | 9    | dictionary capacity exceeded             |

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use wordpack::container::{self, Deflate};
use wordpack::dictionary::{bucket_label, MAX_ENTRIES, TABLE_CAPACITY};
use wordpack::metrics::{self, ReductionReport};
use wordpack::{table_memory_bits, tokenizer, Dictionary, EncodeOptions, Error};

pub mod exit {
    pub const OK: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const FORMAT: u8 = 4;
    pub const WRONG_DICTIONARY: u8 = 5;
    pub const CORRUPT: u8 = 6;
    pub const TRUNCATED: u8 = 7;
    pub const INVALID_WORD: u8 = 8;
    pub const CAPACITY: u8 = 9;
}

/// Average English word length used as the sizing baseline.
const REFERENCE_WORD_LEN: f64 = 6.91;

#[derive(Debug, Parser)]
#[command(
    name = "wordpack",
    version,
    about = "Dictionary-coded text compression"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dictionary management.
    Dict {
        #[command(subcommand)]
        command: DictCommand,
    },
    /// Reduce a text file, then deflate the result.
    Compress {
        input: PathBuf,
        #[arg(short, long)]
        dict: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Skip the second (deflate) stage.
        #[arg(long)]
        no_deflate: bool,
    },
    /// Restore the original text from a `.wpk` file.
    Decompress {
        input: PathBuf,
        #[arg(short, long)]
        dict: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Describe a compiled dictionary.
    Stats { dict: PathBuf },
    /// Measure every file in a directory.
    Bench {
        dir: PathBuf,
        #[arg(short, long)]
        dict: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
pub enum DictCommand {
    /// Compile a wordlist (one word per line, `#` comments) into a `.wpkd` file.
    Build {
        wordlist: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the distinct words of text files as a wordlist, in first-seen order.
    Words {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Records,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io { path: PathBuf, source: io::Error },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Core(e) => match e {
                Error::Io(_) => exit::IO,
                Error::Format(_) => exit::FORMAT,
                Error::WrongDictionary { .. } => exit::WRONG_DICTIONARY,
                Error::Corrupt(_) | Error::Structure(_) => exit::CORRUPT,
                Error::Truncated(_) => exit::TRUNCATED,
                Error::InvalidWord { .. } => exit::INVALID_WORD,
                Error::Capacity { .. } => exit::CAPACITY,
                _ => exit::INTERNAL,
            },
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_dict(path: &Path) -> CliResult<Dictionary> {
    Ok(Dictionary::load_compiled(&read(path)?)?)
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn megabytes(bits: u64) -> String {
    format!("{:.4} MB", bits as f64 / 8.0 / 1024.0 / 1024.0)
}

fn memory_line(label: &str, entries: u64, avg: f64) -> String {
    let bits = table_memory_bits(entries, avg);
    format!(
        "{label:<18} {bits} bits = {} bytes = {}",
        bits / 8,
        megabytes(bits)
    )
}

/// Runs one parsed command.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Dict {
            command: DictCommand::Build { wordlist, output },
        } => dict_build(&wordlist, &output, out, err),
        Command::Dict {
            command: DictCommand::Words { inputs, output },
        } => dict_words(&inputs, &output, out),
        Command::Compress {
            input,
            dict,
            output,
            no_deflate,
        } => compress(&input, &dict, &output, !no_deflate, out),
        Command::Decompress {
            input,
            dict,
            output,
        } => {
            let dict = load_dict(&dict)?;
            let text = container::decompress(&read(&input)?, &dict)?;
            write(&output, &text)
        }
        Command::Stats { dict } => stats(&load_dict(&dict)?, out).map_err(stdout_err),
        Command::Bench { dir, dict, format } => bench(&dir, &dict, format, out, err),
    }
}

fn dict_build(
    wordlist: &Path,
    output: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let text = read(wordlist)?;
    let text = String::from_utf8_lossy(&text);
    let dict = Dictionary::build(text.lines())?;
    if dict.word_count() == 0 {
        let _ = writeln!(
            err,
            "warning: {} holds no words; dictionary has punctuation only",
            wordlist.display()
        );
    }
    write(output, &dict.serialize_compiled())?;
    let avg = dict.average_word_len().unwrap_or(0.0);
    (|| -> io::Result<()> {
        writeln!(out, "entries  {} ({} words)", dict.len(), dict.word_count())?;
        writeln!(out, "digest   {:016x}", dict.digest())?;
        writeln!(
            out,
            "{}",
            memory_line("table memory", dict.len() as u64, avg)
        )
    })()
    .map_err(stdout_err)
}

fn dict_words(inputs: &[PathBuf], output: &Path, out: &mut dyn Write) -> CliResult {
    let mut text = Vec::new();
    for path in inputs {
        text.extend_from_slice(&read(path)?);
        text.push(b'\n');
    }
    let words = tokenizer::vocabulary(&tokenizer::tokenize(&text));
    let mut list = String::new();
    for w in &words {
        list.push_str(w);
        list.push('\n');
    }
    write(output, list.as_bytes())?;
    writeln!(out, "{} words", words.len()).map_err(stdout_err)
}

fn compress(
    input: &Path,
    dict: &Path,
    output: &Path,
    second_stage: bool,
    out: &mut dyn Write,
) -> CliResult {
    let dict = load_dict(dict)?;
    let text = read(input)?;
    let c = container::compress_detailed(
        &text,
        &dict,
        EncodeOptions { second_stage },
        &Deflate::default(),
    )?;
    let bytes = c.to_bytes();
    write(output, &bytes)?;

    let (words, punct) = c.tokens.iter().fold((0, 0), |(w, p), t| match t.kind {
        wordpack::TokenKind::Word { .. } => (w + 1, p),
        wordpack::TokenKind::Punct { .. } => (w, p + 1),
        _ => (w, p),
    });
    let reduced = c.payload.bits.as_bytes().len() as u64;
    let report = ReductionReport::new(words, punct, text.len() as u64, reduced);
    (|| -> io::Result<()> {
        writeln!(out, "{report}")?;
        if second_stage {
            let p = metrics::Percent::new(text.len() as u64, c.container.body.len() as u64);
            writeln!(
                out,
                "second stage body        {} bytes ({p})",
                c.container.body.len()
            )?;
        }
        writeln!(out, "container                {} bytes", bytes.len())
    })()
    .map_err(stdout_err)
}

fn stats(dict: &Dictionary, out: &mut dyn Write) -> io::Result<()> {
    let avg = dict.average_word_len();
    writeln!(out, "entries            {} of {MAX_ENTRIES}", dict.len())?;
    writeln!(out, "words              {}", dict.word_count())?;
    writeln!(out, "digest             {:016x}", dict.digest())?;
    match avg {
        Some(a) => writeln!(
            out,
            "average word       {a:.2} chars (reference {REFERENCE_WORD_LEN})"
        )?,
        None => writeln!(
            out,
            "average word       n/a (reference {REFERENCE_WORD_LEN})"
        )?,
    }
    let avg = avg.unwrap_or(REFERENCE_WORD_LEN);
    writeln!(
        out,
        "{}",
        memory_line("table memory", dict.len() as u64, avg)
    )?;
    writeln!(
        out,
        "{}",
        memory_line("full 19-bit table", TABLE_CAPACITY, avg)
    )?;
    writeln!(out, "buckets")?;
    for (i, n) in dict.bucket_sizes().into_iter().enumerate() {
        writeln!(out, "  {:<6} {n}", bucket_label(i))?;
    }
    Ok(())
}

fn bench(
    dir: &Path,
    dict: &Path,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let dict = load_dict(dict)?;
    let io_err = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let entry = entry.map_err(io_err)?;
        if entry.file_type().map_err(io_err)?.is_file() {
            paths.push(entry.path());
        }
    }
    paths.sort();
    if paths.is_empty() {
        let _ = writeln!(err, "no files in {}", dir.display());
        return Ok(());
    }
    let report = metrics::corpus_bench(&paths, &dict, &Deflate::default());
    for f in &report.files {
        if let Err(e) = &f.outcome {
            let _ = writeln!(err, "{}: {e}", f.path.display());
        }
    }
    match format {
        Format::Table => report.write_table(out),
        Format::Records => report.write_records(out),
    }
    .map_err(stdout_err)
}
