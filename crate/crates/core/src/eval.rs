//! Ranking comparison and binary-relevance effectiveness metrics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("rankings do not hold the same set of ids")]
    MismatchedSets,
    #[error("need at least two ids to compare rankings")]
    TooShort,
    #[error("k = {k} exceeds ranking length {len}")]
    KTooLarge { k: usize, len: usize },
    #[error("k must be positive")]
    ZeroK,
    #[error("no relevant documents judged for query `{0}`")]
    NoRelevantDocs(String),
    #[error("relevance must be 0 or 1, got {0}")]
    NonBinary(u32),
    #[error("duplicate judgment for query `{0}`, document `{1}`")]
    DuplicateJudgment(String, String),
}

/// Kendall's tau-a between two strict orderings of the same ids.
///
/// Discordant pairs are the inversions of `rank_b` read in `rank_a`'s order,
/// counted by merge sort in O(n log n).
pub fn kendall_tau<S: AsRef<str>>(rank_a: &[S], rank_b: &[S]) -> Result<f64, EvalError> {
    let n = rank_a.len();
    if n != rank_b.len() {
        return Err(EvalError::MismatchedSets);
    }
    let position: BTreeMap<&str, usize> =
        rank_b.iter().enumerate().map(|(i, id)| (id.as_ref(), i)).collect();
    if position.len() != n {
        return Err(EvalError::MismatchedSets);
    }
    let mut seq = Vec::with_capacity(n);
    let mut seen = BTreeSet::new();
    for id in rank_a {
        let id = id.as_ref();
        if !seen.insert(id) {
            return Err(EvalError::MismatchedSets);
        }
        seq.push(*position.get(id).ok_or(EvalError::MismatchedSets)?);
    }
    if n < 2 {
        return Err(EvalError::TooShort);
    }
    let discordant = count_inversions(&mut seq);
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    let concordant = pairs - discordant;
    Ok((concordant as f64 - discordant as f64) / pairs as f64)
}

fn count_inversions(seq: &mut [usize]) -> u64 {
    let mut buf = vec![0usize; seq.len()];
    let mut inversions = 0u64;
    let mut width = 1;
    while width < seq.len() {
        let mut start = 0;
        while start < seq.len() {
            let mid = (start + width).min(seq.len());
            let end = (start + 2 * width).min(seq.len());
            let (mut i, mut j, mut k) = (start, mid, start);
            while i < mid && j < end {
                if seq[i] <= seq[j] {
                    buf[k] = seq[i];
                    i += 1;
                } else {
                    buf[k] = seq[j];
                    inversions += (mid - i) as u64;
                    j += 1;
                }
                k += 1;
            }
            buf[k..k + (mid - i)].copy_from_slice(&seq[i..mid]);
            k += mid - i;
            buf[k..k + (end - j)].copy_from_slice(&seq[j..end]);
            start = end;
        }
        seq.copy_from_slice(&buf);
        width *= 2;
    }
    inversions
}

/// Share of ids common to both top-k prefixes.
pub fn overlap_at_k<S: AsRef<str>>(rank_a: &[S], rank_b: &[S], k: usize) -> Result<f64, EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroK);
    }
    let len = rank_a.len().min(rank_b.len());
    if k > len {
        return Err(EvalError::KTooLarge { k, len });
    }
    let top_a: BTreeSet<&str> = rank_a[..k].iter().map(AsRef::as_ref).collect();
    let shared = rank_b[..k].iter().filter(|id| top_a.contains(id.as_ref())).count();
    Ok(shared as f64 / k as f64)
}

/// Binary relevance judgments keyed by `(query id, doc id)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    judgments: BTreeMap<(String, String), bool>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, query_id: &str, doc_id: &str, relevance: u32) -> Result<(), EvalError> {
        let relevant = match relevance {
            0 => false,
            1 => true,
            other => return Err(EvalError::NonBinary(other)),
        };
        let key = (String::from(query_id), String::from(doc_id));
        if self.judgments.contains_key(&key) {
            return Err(EvalError::DuplicateJudgment(key.0, key.1));
        }
        self.judgments.insert(key, relevant);
        Ok(())
    }

    pub fn is_relevant(&self, query_id: &str, doc_id: &str) -> bool {
        self.judgments
            .get(&(String::from(query_id), String::from(doc_id)))
            .copied()
            .unwrap_or(false)
    }

    pub fn relevant_count(&self, query_id: &str) -> usize {
        self.judgments
            .range((String::from(query_id), String::new())..)
            .take_while(|((q, _), _)| q == query_id)
            .filter(|(_, &rel)| rel)
            .count()
    }

    pub fn len(&self) -> usize {
        self.judgments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }
}

/// `(relevant in top k / k, relevant in top k / all relevant)`.
pub fn precision_recall_at_k<S: AsRef<str>>(
    ranking: &[S],
    qrels: &Qrels,
    query_id: &str,
    k: usize,
) -> Result<(f64, f64), EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroK);
    }
    let total = qrels.relevant_count(query_id);
    if total == 0 {
        return Err(EvalError::NoRelevantDocs(String::from(query_id)));
    }
    let hits = ranking
        .iter()
        .take(k)
        .filter(|id| qrels.is_relevant(query_id, id.as_ref()))
        .count();
    Ok((hits as f64 / k as f64, hits as f64 / total as f64))
}
