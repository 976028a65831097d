//! Inverted index and the TF-IDF baseline ranking.
//!
//! Scoring is raw term frequency times smoothed inverse document frequency,
//! summed over the distinct query terms:
//!
//! ```text
//! score(d, q) = Σ_{t ∈ unique(q)} tf(t, d) · (ln((N + 1) / (df(t) + 1)) + 1)
//! ```
//!
//! A document matches when it contains at least one query term. Every ranker
//! in this crate breaks score ties by ascending document id.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::record::{AuthorKey, BibRecord, Corpus};
use crate::text::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    /// Ordinal of the document in ascending id order.
    pub doc: u32,
    pub tf: u32,
}

/// A stored document together with its normalized author keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredDoc {
    pub record: BibRecord,
    pub authors: Vec<AuthorKey>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Index {
    docs: Vec<StoredDoc>,
    postings: BTreeMap<String, Vec<Posting>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("empty query")]
    EmptyQuery,
    #[error("limit must be positive")]
    ZeroLimit,
}

impl Index {
    /// Index title, abstract and keywords of every record.
    pub fn build(corpus: &Corpus) -> Self {
        let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
        let mut docs = Vec::with_capacity(corpus.len());
        let mut tf: BTreeMap<String, u32> = BTreeMap::new();
        // Corpus iterates in ascending id order, so ordinals are id-sorted and
        // every postings list is appended to in ascending doc order.
        for (ordinal, record) in corpus.iter().enumerate() {
            let ordinal = u32::try_from(ordinal).expect("corpus exceeds u32 documents");
            tf.clear();
            for token in tokenize(&record.indexable_text()) {
                *tf.entry(token).or_insert(0) += 1;
            }
            for (term, count) in core::mem::take(&mut tf) {
                postings.entry(term).or_default().push(Posting { doc: ordinal, tf: count });
            }
            docs.push(StoredDoc { authors: record.author_keys(), record: record.clone() });
        }
        Index { docs, postings }
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    pub fn term_count(&self) -> usize {
        self.postings.len()
    }

    pub fn doc_freq(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    pub fn postings(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map_or(&[], Vec::as_slice)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &[Posting])> {
        self.postings.iter().map(|(t, p)| (t.as_str(), p.as_slice()))
    }

    pub fn docs(&self) -> &[StoredDoc] {
        &self.docs
    }

    pub fn doc(&self, id: &str) -> Option<&StoredDoc> {
        self.ordinal(id).map(|i| &self.docs[i])
    }

    pub fn ordinal(&self, id: &str) -> Option<usize> {
        self.docs
            .binary_search_by(|d| d.record.id.as_str().cmp(id))
            .ok()
    }

    /// `ln((N + 1) / (df + 1)) + 1`; strictly positive for every df ≤ N.
    pub fn idf(&self, term: &str) -> f64 {
        let n = self.docs.len() as f64;
        let df = self.doc_freq(term) as f64;
        libm::log((n + 1.0) / (df + 1.0)) + 1.0
    }

    /// Rank every matching document and keep the best `limit`.
    pub fn search_tfidf(&self, query: &str, limit: usize) -> Result<RankedList, SearchError> {
        if limit == 0 {
            return Err(SearchError::ZeroLimit);
        }
        let mut terms = tokenize(query);
        if terms.is_empty() {
            return Err(SearchError::EmptyQuery);
        }
        let mut seen = BTreeMap::new();
        terms.retain(|t| seen.insert(t.clone(), ()).is_none());

        let mut scores = vec![0.0f64; self.docs.len()];
        let mut matched: Vec<u32> = Vec::new();
        for term in &terms {
            let postings = self.postings(term);
            if postings.is_empty() {
                continue;
            }
            let idf = self.idf(term);
            for p in postings {
                let slot = &mut scores[p.doc as usize];
                if *slot == 0.0 {
                    matched.push(p.doc);
                }
                *slot += f64::from(p.tf) * idf;
            }
        }

        let mut hits: Vec<(u32, f64)> = matched.into_iter().map(|d| (d, scores[d as usize])).collect();
        // Ordinal order is id order, so comparing ordinals is the id tie-break.
        hits.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        hits.truncate(limit);
        let entries = hits
            .into_iter()
            .enumerate()
            .map(|(i, (doc, score))| RankedEntry {
                doc_id: self.docs[doc as usize].record.id.clone(),
                score,
                rank: i as u32 + 1,
            })
            .collect();
        Ok(RankedList { query: String::from(query), entries })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub doc_id: String,
    pub score: f64,
    /// 1-based position.
    pub rank: u32,
}

/// Ordered result list shared by the baseline ranker and all re-rankers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub query: String,
    pub entries: Vec<RankedEntry>,
}

impl RankedList {
    /// Sort by score descending, then doc id ascending, and assign ranks.
    pub fn from_scores(query: String, mut scored: Vec<(String, f64)>) -> Self {
        scored.sort_by(|a, b| by_score_then_id((&a.0, a.1), (&b.0, b.1)));
        Self::from_ordered(query, scored)
    }

    /// Keep the given order and assign ranks positionally.
    pub fn from_ordered(query: String, ordered: Vec<(String, f64)>) -> Self {
        let entries = ordered
            .into_iter()
            .enumerate()
            .map(|(i, (doc_id, score))| RankedEntry { doc_id, score, rank: i as u32 + 1 })
            .collect();
        RankedList { query, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.doc_id.as_str()).collect()
    }
}

/// Global ordering: higher score first, then ascending doc id.
pub fn by_score_then_id(a: (&str, f64), b: (&str, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0))
}
