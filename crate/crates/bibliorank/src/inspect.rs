//! Query-time views shared by the CLI and the HTTP service: a paginated,
//! annotated search page, the Bradford zone report and the co-authorship
//! graph export.

use std::time::Instant;

use bibliorank_core::bradford::{self, partition_zones};
use bibliorank_core::coauthor::{self, betweenness, document_centrality, CoauthorGraph};
use bibliorank_core::index::SearchError;
use bibliorank_core::{Index, RankedList, RerankError, Stratagem};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum QueryError {
    #[error("empty query")]
    EmptyQuery,
    #[error(transparent)]
    Rerank(#[from] RerankError),
}

impl From<SearchError> for QueryError {
    fn from(e: SearchError) -> Self {
        match e {
            // search_full never passes a zero limit
            SearchError::EmptyQuery | SearchError::ZeroLimit => QueryError::EmptyQuery,
        }
    }
}

/// Every match, ranked by TF-IDF.
pub fn search_full(index: &Index, query: &str) -> Result<RankedList, QueryError> {
    Ok(index.search_tfidf(query, usize::MAX)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub base_ms: f64,
    pub rerank_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityNote {
    pub author: Option<String>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hit {
    pub doc_id: String,
    pub rank: u32,
    pub score: f64,
    pub title: String,
    pub authors: Vec<String>,
    pub journal: String,
    pub issn: Option<String>,
    /// Present in Bradford modes; null for documents without ISSN.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zone: Option<Option<&'static str>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub author_centrality: Option<CentralityNote>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchPage {
    pub query: String,
    pub total: usize,
    pub stratagem: Stratagem,
    pub offset: usize,
    pub limit: usize,
    pub timing: Timing,
    pub results: Vec<Hit>,
}

fn elapsed_ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// Rank the full match set with `stratagem`, then cut the page
/// `[offset, offset + limit)`.
pub fn run_search(
    index: &Index,
    query: &str,
    stratagem: Stratagem,
    offset: usize,
    limit: usize,
    node_cap: usize,
) -> Result<SearchPage, QueryError> {
    let started = Instant::now();
    let base = search_full(index, query)?;
    let base_ms = elapsed_ms(started);

    let started = Instant::now();
    let mut zones = None;
    let mut centrality = None;
    let ranked = match stratagem {
        Stratagem::Tfidf => base.clone(),
        Stratagem::Bradford | Stratagem::BradfordMult => {
            let table = bradford::journal_yields(&base, index)?;
            zones = partition_zones(&table).ok();
            stratagem.apply(&base, index, node_cap)?
        }
        Stratagem::Authcent => {
            let graph = CoauthorGraph::from_results_capped(&base, index, node_cap)?;
            let table = betweenness(&graph);
            let ranked = coauthor::rerank_with_table(&base, index, &table)?;
            centrality = Some(table);
            ranked
        }
    };
    let rerank_ms = elapsed_ms(started);

    let results = ranked
        .entries
        .iter()
        .skip(offset)
        .take(limit)
        .map(|e| {
            let doc = index.doc(&e.doc_id).ok_or_else(|| RerankError::UnknownDoc(e.doc_id.clone()))?;
            let r = &doc.record;
            let zone = match stratagem {
                Stratagem::Bradford | Stratagem::BradfordMult => Some(
                    r.issn
                        .as_deref()
                        .and_then(|i| zones.as_ref()?.zone_of(i))
                        .map(|z| z.as_str()),
                ),
                _ => None,
            };
            let author_centrality = centrality.as_ref().map(|table| {
                let (author, value) = document_centrality(&doc.authors, table);
                CentralityNote { author: author.map(|a| a.to_string()), value }
            });
            Ok(Hit {
                doc_id: e.doc_id.clone(),
                rank: e.rank,
                score: e.score,
                title: r.title.clone(),
                authors: r.authors.clone(),
                journal: r.journal.clone(),
                issn: r.issn.clone(),
                zone,
                author_centrality,
            })
        })
        .collect::<Result<Vec<_>, RerankError>>()?;

    Ok(SearchPage {
        query: query.to_owned(),
        total: ranked.len(),
        stratagem,
        offset,
        limit,
        timing: Timing { base_ms, rerank_ms },
        results,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZoneRow {
    pub issn: String,
    pub journal: String,
    #[serde(rename = "yield")]
    pub yield_count: usize,
    pub zone: &'static str,
}

/// Journals of the result set in ranking order with their zones. The journal
/// name is taken from the best-ranked document of that ISSN that has one.
pub fn zone_report(index: &Index, query: &str) -> Result<Vec<ZoneRow>, QueryError> {
    let base = search_full(index, query)?;
    let table = bradford::journal_yields(&base, index)?;
    let Ok(partition) = partition_zones(&table) else {
        return Ok(Vec::new());
    };
    let journal_name = |issn: &str| {
        base.entries
            .iter()
            .filter_map(|e| index.doc(&e.doc_id))
            .map(|d| &d.record)
            .find(|r| r.issn.as_deref() == Some(issn) && !r.journal.is_empty())
            .map(|r| r.journal.clone())
            .unwrap_or_default()
    };
    Ok(partition
        .iter()
        .map(|(issn, y, zone)| ZoneRow {
            issn: issn.to_owned(),
            journal: journal_name(issn),
            yield_count: y,
            zone: zone.as_str(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphNode {
    pub author: String,
    pub betweenness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphExport {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<[String; 2]>,
}

pub fn graph_export(index: &Index, query: &str, node_cap: usize) -> Result<GraphExport, QueryError> {
    let base = search_full(index, query)?;
    let graph = CoauthorGraph::from_results_capped(&base, index, node_cap)?;
    let table = betweenness(&graph);
    Ok(GraphExport {
        nodes: table
            .iter()
            .map(|(a, v)| GraphNode { author: a.to_string(), betweenness: v })
            .collect(),
        edges: graph.edges().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
    })
}
