//! Tab-separated evaluation inputs: judgments and query lists.

use std::fs;
use std::io;
use std::path::Path;

use bibliorank_core::Qrels;

#[derive(Debug, thiserror::Error)]
pub enum TsvError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

/// `query_id<TAB>doc_id<TAB>relevance`, relevance 0 or 1, no header.
pub fn parse_qrels(text: &str) -> Result<Qrels, TsvError> {
    let mut qrels = Qrels::new();
    for (line, l) in data_lines(text) {
        let bad = |reason: String| TsvError::Line { line, reason };
        let cols: Vec<&str> = l.split('\t').collect();
        let [query, doc, rel] = cols[..] else {
            return Err(bad(format!("expected 3 columns, found {}", cols.len())));
        };
        let rel: u32 = rel.trim().parse().map_err(|_| bad(format!("bad relevance `{rel}`")))?;
        qrels.insert(query.trim(), doc.trim(), rel).map_err(|e| bad(e.to_string()))?;
    }
    Ok(qrels)
}

/// `query_id<TAB>query text`, no header.
pub fn parse_queries(text: &str) -> Result<Vec<(String, String)>, TsvError> {
    data_lines(text)
        .map(|(line, l)| match l.split_once('\t') {
            Some((id, q)) if !id.trim().is_empty() => Ok((id.trim().to_owned(), q.to_owned())),
            _ => Err(TsvError::Line { line, reason: "expected `query_id<TAB>query`".into() }),
        })
        .collect()
}

pub fn read_qrels(path: &Path) -> Result<Qrels, TsvError> {
    parse_qrels(&fs::read_to_string(path)?)
}

pub fn read_queries(path: &Path) -> Result<Vec<(String, String)>, TsvError> {
    parse_queries(&fs::read_to_string(path)?)
}
