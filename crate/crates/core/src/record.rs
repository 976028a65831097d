//! Bibliographic records, author keys and the in-memory corpus.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// One bibliographic document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BibRecord {
    pub id: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub keywords: Vec<String>,
    /// Raw author names in byline order.
    pub authors: Vec<String>,
    pub journal: String,
    /// Normalized ISSN (`NNNN-NNNC`), the journal identity for yield counting.
    pub issn: Option<String>,
    pub year: Option<i64>,
}

impl BibRecord {
    /// Text fed to the tokenizer: title, abstract and keywords.
    pub fn indexable_text(&self) -> String {
        let mut text = String::with_capacity(
            self.title.len() + self.abstract_text.len() + 16 * self.keywords.len(),
        );
        text.push_str(&self.title);
        text.push(' ');
        text.push_str(&self.abstract_text);
        text.push(' ');
        for (i, kw) in self.keywords.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            text.push_str(kw);
        }
        text
    }

    /// Distinct normalized author keys in byline order. Names that normalize
    /// to nothing are dropped.
    pub fn author_keys(&self) -> Vec<AuthorKey> {
        let mut keys: Vec<AuthorKey> = Vec::with_capacity(self.authors.len());
        for raw in &self.authors {
            if let Ok(key) = normalize_author(raw) {
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
        keys
    }
}

/// Normalized author name. Two bylines denote the same author node iff their
/// keys are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorKey(String);

impl AuthorKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AuthorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("author name is empty")]
pub struct EmptyName;

/// Trim, collapse whitespace runs, lowercase and strip trailing periods.
pub fn normalize_author(raw: &str) -> Result<AuthorKey, EmptyName> {
    let mut out = String::with_capacity(raw.len());
    for word in raw.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    let trimmed_len = out
        .trim_end_matches(|c: char| c == '.' || c.is_whitespace())
        .len();
    out.truncate(trimmed_len);
    if out.is_empty() {
        Err(EmptyName)
    } else {
        Ok(AuthorKey(out))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid ISSN `{0}`")]
pub struct BadIssn(pub String);

/// Uppercase an ISSN and insert the hyphen if it was given as 8 contiguous
/// characters. The result always matches `DDDD-DDD[DX]`.
pub fn normalize_issn(raw: &str) -> Result<String, BadIssn> {
    let upper: String = raw.trim().chars().flat_map(char::to_uppercase).collect();
    let bytes = upper.as_bytes();
    let compact: [u8; 8] = match bytes.len() {
        8 => bytes.try_into().map_err(|_| BadIssn(String::from(raw)))?,
        9 if bytes[4] == b'-' => {
            let mut c = [0u8; 8];
            c[..4].copy_from_slice(&bytes[..4]);
            c[4..].copy_from_slice(&bytes[5..]);
            c
        }
        _ => return Err(BadIssn(String::from(raw))),
    };
    let digits_ok = compact[..7].iter().all(u8::is_ascii_digit);
    let check_ok = compact[7].is_ascii_digit() || compact[7] == b'X';
    if !(digits_ok && check_ok) {
        return Err(BadIssn(String::from(raw)));
    }
    let mut out = String::with_capacity(9);
    for (i, &b) in compact.iter().enumerate() {
        if i == 4 {
            out.push('-');
        }
        out.push(b as char);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("document id is empty")]
    EmptyId,
}

/// Id-indexed document collection. Iteration is in ascending id order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    records: BTreeMap<String, BibRecord>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, record: BibRecord) -> Result<(), CorpusError> {
        if record.id.is_empty() {
            return Err(CorpusError::EmptyId);
        }
        if self.records.contains_key(&record.id) {
            return Err(CorpusError::DuplicateId(record.id));
        }
        self.records.insert(record.id.clone(), record);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&BibRecord> {
        self.records.get(id)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BibRecord> {
        self.records.values()
    }
}

impl TryFrom<Vec<BibRecord>> for Corpus {
    type Error = CorpusError;

    fn try_from(records: Vec<BibRecord>) -> Result<Self, Self::Error> {
        let mut corpus = Corpus::new();
        for r in records {
            corpus.insert(r)?;
        }
        Ok(corpus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn author_normalization_rules() {
        assert_eq!(normalize_author("  Newman,  M.E.J. ").unwrap().as_str(), "newman, m.e.j");
        assert_eq!(normalize_author("NEWMAN, M.E.J.").unwrap().as_str(), "newman, m.e.j");
        assert_eq!(normalize_author("   "), Err(EmptyName));
        assert_eq!(normalize_author("..."), Err(EmptyName));
        assert_eq!(normalize_author("Yin\tL . ").unwrap().as_str(), "yin l");
    }

    #[test]
    fn issn_forms() {
        assert_eq!(normalize_issn("00224545").unwrap(), "0022-4545");
        assert_eq!(normalize_issn("1234-567x").unwrap(), "1234-567X");
        assert_eq!(normalize_issn(" 0138-9130 ").unwrap(), "0138-9130");
        assert!(normalize_issn("1234-56X7").is_err());
        assert!(normalize_issn("123-4567").is_err());
        assert!(normalize_issn("abcd-efgh").is_err());
        assert!(normalize_issn("").is_err());
    }

    #[test]
    fn corpus_rejects_duplicates() {
        let rec = |id: &str| BibRecord { id: id.into(), ..Default::default() };
        let mut c = Corpus::new();
        c.insert(rec("d2")).unwrap();
        c.insert(rec("d1")).unwrap();
        assert_eq!(c.insert(rec("d1")), Err(CorpusError::DuplicateId("d1".into())));
        let ids: Vec<&str> = c.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["d1", "d2"]);
    }

    #[test]
    fn author_keys_dedupe_and_drop_empty() {
        let r = BibRecord {
            id: "x".into(),
            authors: vec!["Mayr, P.".into(), " ".into(), "MAYR, P".into(), "Mutschke, P.".into()],
            ..Default::default()
        };
        let keys: Vec<String> = r.author_keys().iter().map(|k| k.to_string()).collect();
        assert_eq!(keys, ["mayr, p", "mutschke, p"]);
    }

    proptest! {
        #[test]
        fn normalize_author_is_idempotent(raw in "[ a-zA-Z.,\\t\u{c4}\u{df}-]{0,24}") {
            if let Ok(once) = normalize_author(&raw) {
                let twice = normalize_author(once.as_str()).unwrap();
                prop_assert_eq!(once, twice);
            }
        }

        #[test]
        fn normalized_issn_is_a_fixed_point(raw in "[0-9]{7}[0-9xX]") {
            let once = normalize_issn(&raw).unwrap();
            prop_assert_eq!(normalize_issn(&once).unwrap(), once);
        }
    }
}
