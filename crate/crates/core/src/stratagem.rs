//! The four user-selectable rankers and a side-by-side comparison of them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eval::{kendall_tau, overlap_at_k, precision_recall_at_k, Qrels};
use crate::index::{Index, RankedList, SearchError};
use crate::{bradford, coauthor, RerankError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratagem {
    /// Baseline TF-IDF order.
    Tfidf,
    /// Journal blocks by descending yield.
    Bradford,
    /// TF-IDF score times journal yield.
    BradfordMult,
    /// Maximum author betweenness in the result-set co-authorship graph.
    Authcent,
}

impl Stratagem {
    pub const ALL: [Stratagem; 4] =
        [Stratagem::Tfidf, Stratagem::Bradford, Stratagem::BradfordMult, Stratagem::Authcent];

    pub fn as_str(self) -> &'static str {
        match self {
            Stratagem::Tfidf => "tfidf",
            Stratagem::Bradford => "bradford",
            Stratagem::BradfordMult => "bradford_mult",
            Stratagem::Authcent => "authcent",
        }
    }

    /// Re-rank a full TF-IDF result list.
    pub fn apply(self, base: &RankedList, index: &Index, node_cap: usize) -> Result<RankedList, RerankError> {
        match self {
            Stratagem::Tfidf => Ok(base.clone()),
            Stratagem::Bradford => bradford::rerank_pure(base, index),
            Stratagem::BradfordMult => bradford::rerank_mult(base, index),
            Stratagem::Authcent => coauthor::rerank_author_centrality(base, index, node_cap),
        }
    }
}

impl fmt::Display for Stratagem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rank `{0}`")]
pub struct UnknownStratagem(pub String);

impl FromStr for Stratagem {
    type Err = UnknownStratagem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tfidf" => Ok(Stratagem::Tfidf),
            "bradford" | "bradford_pure" => Ok(Stratagem::Bradford),
            "bradford_mult" => Ok(Stratagem::BradfordMult),
            "authcent" => Ok(Stratagem::Authcent),
            other => Err(UnknownStratagem(String::from(other))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankerReport {
    /// Set when the stratagem itself failed; the other fields are then empty.
    pub error: Option<String>,
    pub top: Vec<String>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    /// Why precision/recall are missing although judgments were supplied.
    pub metric_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    pub kendall_tau: Option<f64>,
    pub overlap_at_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub query: String,
    pub query_id: Option<String>,
    pub k: usize,
    pub matches: usize,
    pub rankers: BTreeMap<String, RankerReport>,
    /// Keyed `"<a>~<b>"` for every pair of stratagems that both succeeded.
    pub pairwise: BTreeMap<String, PairReport>,
}

/// Judgments for one query.
#[derive(Debug, Clone, Copy)]
pub struct Judged<'a> {
    pub qrels: &'a Qrels,
    pub query_id: &'a str,
}

/// Run every stratagem on the full match set of `query` and compare them.
///
/// A failing stratagem is reported in its own entry and left out of the
/// pairwise table. Overlap uses `min(k, matches)` so short result sets still
/// compare.
pub fn compare_stratagems(
    index: &Index,
    query: &str,
    k: usize,
    judged: Option<Judged<'_>>,
    node_cap: usize,
) -> Result<ComparisonReport, SearchError> {
    let base = index.search_tfidf(query, usize::MAX)?;
    let runs: Vec<(Stratagem, Result<RankedList, RerankError>)> = Stratagem::ALL
        .iter()
        .map(|&s| (s, s.apply(&base, index, node_cap)))
        .collect();

    let mut rankers = BTreeMap::new();
    for (s, run) in &runs {
        let report = match run {
            Err(e) => RankerReport {
                error: Some(e.to_string()),
                top: Vec::new(),
                precision: None,
                recall: None,
                metric_error: None,
            },
            Ok(list) => {
                let ids = list.ids();
                let (precision, recall, metric_error) = match judged {
                    None => (None, None, None),
                    Some(j) => match precision_recall_at_k(&ids, j.qrels, j.query_id, k) {
                        Ok((p, r)) => (Some(p), Some(r), None),
                        Err(e) => (None, None, Some(e.to_string())),
                    },
                };
                RankerReport {
                    error: None,
                    top: ids.iter().take(k).map(|s| String::from(*s)).collect(),
                    precision,
                    recall,
                    metric_error,
                }
            }
        };
        rankers.insert(String::from(s.as_str()), report);
    }

    let mut pairwise = BTreeMap::new();
    let window = k.min(base.len());
    for (i, (sa, ra)) in runs.iter().enumerate() {
        for (sb, rb) in &runs[i + 1..] {
            let (Ok(a), Ok(b)) = (ra, rb) else { continue };
            let (a, b) = (a.ids(), b.ids());
            pairwise.insert(
                format!("{sa}~{sb}"),
                PairReport {
                    kendall_tau: kendall_tau(&a, &b).ok(),
                    overlap_at_k: overlap_at_k(&a, &b, window).ok(),
                },
            );
        }
    }

    Ok(ComparisonReport {
        query: String::from(query),
        query_id: judged.map(|j| String::from(j.query_id)),
        k,
        matches: base.len(),
        rankers,
        pairwise,
    })
}
