//! JSONL corpus format: one bibliographic record per line.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use bibliorank_core::record::{normalize_issn, BibRecord, Corpus, CorpusError};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("malformed line: {0}")]
    MalformedLine(String),
    #[error("record has no id")]
    MissingId,
    #[error("bad ISSN `{0}`")]
    BadIssn(String),
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("line {line}: duplicate document id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Deserialize)]
struct RawRecord {
    id: Option<String>,
    title: Option<String>,
    #[serde(rename = "abstract", default)]
    abstract_text: String,
    #[serde(default)]
    keywords: Vec<String>,
    #[serde(default)]
    authors: Vec<String>,
    #[serde(default)]
    journal: String,
    issn: Option<String>,
    year: Option<i64>,
}

/// Wire form of a record, field order fixed.
#[derive(Serialize)]
struct LineRecord<'a> {
    id: &'a str,
    title: &'a str,
    #[serde(rename = "abstract")]
    abstract_text: &'a str,
    keywords: &'a [String],
    authors: &'a [String],
    journal: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    issn: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    year: Option<i64>,
}

/// Parse one corpus line. An empty or whitespace-only `issn` counts as absent.
pub fn parse_record(line: &str) -> Result<BibRecord, ParseError> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| ParseError::MalformedLine(e.to_string()))?;
    if !value.is_object() {
        return Err(ParseError::MalformedLine("not a JSON object".into()));
    }
    let raw: RawRecord =
        serde_json::from_value(value).map_err(|e| ParseError::MalformedLine(e.to_string()))?;
    let id = match raw.id {
        Some(id) if !id.is_empty() => id,
        _ => return Err(ParseError::MissingId),
    };
    let title = raw
        .title
        .ok_or_else(|| ParseError::MalformedLine("missing field `title`".into()))?;
    let issn = match raw.issn {
        Some(s) if !s.trim().is_empty() => {
            Some(normalize_issn(&s).map_err(|_| ParseError::BadIssn(s))?)
        }
        _ => None,
    };
    Ok(BibRecord {
        id,
        title,
        abstract_text: raw.abstract_text,
        keywords: raw.keywords,
        authors: raw.authors,
        journal: raw.journal,
        issn,
        year: raw.year,
    })
}

/// Serialize a record as a single corpus line (no trailing newline).
pub fn record_to_line(record: &BibRecord) -> String {
    let line = LineRecord {
        id: &record.id,
        title: &record.title,
        abstract_text: &record.abstract_text,
        keywords: &record.keywords,
        authors: &record.authors,
        journal: &record.journal,
        issn: record.issn.as_deref(),
        year: record.year,
    };
    serde_json::to_string(&line).expect("record serialization is infallible")
}

pub fn write_corpus<'a, W: Write>(
    mut out: W,
    records: impl IntoIterator<Item = &'a BibRecord>,
) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}", record_to_line(r))?;
    }
    out.flush()
}

/// A loaded corpus plus the lines that were skipped.
#[derive(Debug)]
pub struct LoadReport {
    pub corpus: Corpus,
    pub loaded: usize,
    /// `(1-based line number, error)` for every unparseable line.
    pub skipped: Vec<(usize, ParseError)>,
}

pub fn load_corpus(path: &Path) -> Result<LoadReport, LoadError> {
    let reader = BufReader::new(File::open(path)?);
    read_corpus(reader)
}

/// Parse JSONL from any reader. Blank lines are ignored; unparseable lines are
/// collected and skipped; a duplicate id aborts the load.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<LoadReport, LoadError> {
    let mut corpus = Corpus::new();
    let mut skipped = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(&line) {
            Ok(record) => corpus.insert(record).map_err(|e| match e {
                CorpusError::DuplicateId(id) => LoadError::DuplicateId { line: i + 1, id },
                CorpusError::EmptyId => unreachable!("parse_record rejects empty ids"),
            })?,
            Err(e) => skipped.push((i + 1, e)),
        }
    }
    Ok(LoadReport { loaded: corpus.len(), corpus, skipped })
}
