//! Bradfordizing: re-ranking a result set by the productivity of its journals.
//!
//! Journal identity is the ISSN. The yield of a journal is the number of
//! documents of the current result set published in it, so the ranking is a
//! property of the query, not of the collection. Two variants are provided:
//! [`rerank_pure`] sorts journals into contiguous blocks by yield, while
//! [`rerank_mult`] multiplies each TF-IDF score by the yield of the document's
//! journal and re-sorts, which may interleave journals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::index::{Index, RankedList};
use crate::RerankError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Zone {
    Core,
    Zone2,
    Zone3,
}

impl Zone {
    pub fn as_str(self) -> &'static str {
        match self {
            Zone::Core => "Core",
            Zone::Zone2 => "Zone2",
            Zone::Zone3 => "Zone3",
        }
    }
}

/// Per-ISSN hit counts over one result set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct YieldTable {
    yields: BTreeMap<String, usize>,
    total_with_issn: usize,
    no_issn_count: usize,
}

impl YieldTable {
    pub fn yield_of(&self, issn: &str) -> usize {
        self.yields.get(issn).copied().unwrap_or(0)
    }

    pub fn journal_count(&self) -> usize {
        self.yields.len()
    }

    pub fn total_with_issn(&self) -> usize {
        self.total_with_issn
    }

    pub fn no_issn_count(&self) -> usize {
        self.no_issn_count
    }

    pub fn is_empty(&self) -> bool {
        self.yields.is_empty()
    }

    /// `(issn, yield)` in ascending ISSN order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.yields.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Journals ordered by yield descending, ISSN ascending.
    pub fn ranking(&self) -> Vec<(String, usize)> {
        let mut ranking: Vec<(String, usize)> =
            self.yields.iter().map(|(k, &v)| (k.clone(), v)).collect();
        ranking.sort_by(|a, b| journal_order((&a.0, a.1), (&b.0, b.1)));
        ranking
    }
}

fn journal_order(a: (&str, usize), b: (&str, usize)) -> Ordering {
    b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0))
}

/// ISSN of every result entry, in list order.
fn result_issns<'a>(results: &RankedList, index: &'a Index) -> Result<Vec<Option<&'a str>>, RerankError> {
    results
        .entries
        .iter()
        .map(|e| {
            index
                .doc(&e.doc_id)
                .map(|d| d.record.issn.as_deref())
                .ok_or_else(|| RerankError::UnknownDoc(e.doc_id.clone()))
        })
        .collect()
}

fn tally<'a>(issns: impl Iterator<Item = Option<&'a str>>) -> YieldTable {
    let mut table = YieldTable::default();
    for issn in issns {
        match issn {
            Some(issn) => {
                *table.yields.entry(String::from(issn)).or_insert(0) += 1;
                table.total_with_issn += 1;
            }
            None => table.no_issn_count += 1,
        }
    }
    table
}

/// Count result-set documents per ISSN.
pub fn journal_yields(results: &RankedList, index: &Index) -> Result<YieldTable, RerankError> {
    Ok(tally(result_issns(results, index)?.into_iter()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("yield table is empty")]
pub struct EmptyTable;

/// Journals ranked by yield and split into three contiguous zones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BradfordPartition {
    ranking: Vec<(String, usize)>,
    core_end: usize,
    zone2_end: usize,
}

impl BradfordPartition {
    /// `(issn, yield)` ordered by yield descending, ISSN ascending.
    pub fn ranking(&self) -> &[(String, usize)] {
        &self.ranking
    }

    pub fn members(&self, zone: Zone) -> &[(String, usize)] {
        match zone {
            Zone::Core => &self.ranking[..self.core_end],
            Zone::Zone2 => &self.ranking[self.core_end..self.zone2_end],
            Zone::Zone3 => &self.ranking[self.zone2_end..],
        }
    }

    pub fn zone_at(&self, position: usize) -> Zone {
        if position < self.core_end {
            Zone::Core
        } else if position < self.zone2_end {
            Zone::Zone2
        } else {
            Zone::Zone3
        }
    }

    pub fn zone_of(&self, issn: &str) -> Option<Zone> {
        self.ranking
            .iter()
            .position(|(i, _)| i == issn)
            .map(|p| self.zone_at(p))
    }

    /// `(issn, yield, zone)` in ranking order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize, Zone)> {
        self.ranking
            .iter()
            .enumerate()
            .map(|(p, (issn, y))| (issn.as_str(), *y, self.zone_at(p)))
    }
}

/// Split the journal ranking into Core, Zone 2 and Zone 3.
///
/// With `T` articles bearing an ISSN, Core is the shortest prefix whose
/// cumulative yield reaches `ceil(T/3)` and Zone 2 the shortest following
/// non-empty block reaching `ceil(2T/3)`; Zone 3 takes the rest. Journals are
/// never split. With fewer than three journals they are dealt out to Core,
/// then Zone 2.
pub fn partition_zones(table: &YieldTable) -> Result<BradfordPartition, EmptyTable> {
    if table.is_empty() {
        return Err(EmptyTable);
    }
    let ranking = table.ranking();
    let n = ranking.len();
    if n < 3 {
        return Ok(BradfordPartition { ranking, core_end: 1, zone2_end: n });
    }
    let total = table.total_with_issn;
    let first_third = total.div_ceil(3);
    let second_third = (2 * total).div_ceil(3);

    let prefix_reaching = |threshold: usize| {
        let mut cum = 0;
        for (i, (_, y)) in ranking.iter().enumerate() {
            cum += y;
            if cum >= threshold {
                return i + 1;
            }
        }
        n
    };
    // With yields sorted descending and n ≥ 3, these prefixes always leave at
    // least two (resp. one) journals behind; the clamps only pin that down.
    let core_end = prefix_reaching(first_third).clamp(1, n - 2);
    let zone2_end = prefix_reaching(second_third).clamp(core_end + 1, n - 1);
    Ok(BradfordPartition { ranking, core_end, zone2_end })
}

/// Journal blocks by descending yield; TF-IDF order inside each block;
/// documents without an ISSN form a trailing block. Scores are carried over
/// unchanged, so the output order is positional.
pub fn rerank_pure(results: &RankedList, index: &Index) -> Result<RankedList, RerankError> {
    let issns = result_issns(results, index)?;
    let table = tally(issns.iter().copied());

    let mut keyed: Vec<(Option<&str>, usize, &str, f64)> = results
        .entries
        .iter()
        .zip(&issns)
        .map(|(e, issn)| (*issn, issn.map_or(0, |i| table.yield_of(i)), e.doc_id.as_str(), e.score))
        .collect();
    keyed.sort_by(|a, b| {
        let block = match (a.0, b.0) {
            (Some(ia), Some(ib)) => journal_order((ia, a.1), (ib, b.1)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        block.then_with(|| b.3.total_cmp(&a.3)).then_with(|| a.2.cmp(b.2))
    });
    let ordered = keyed.into_iter().map(|(_, _, id, s)| (String::from(id), s)).collect();
    Ok(RankedList::from_ordered(results.query.clone(), ordered))
}

/// Score becomes `tfidf × yield(issn)`; documents without ISSN keep their
/// score. Re-sorted by score with the id tie-break.
pub fn rerank_mult(results: &RankedList, index: &Index) -> Result<RankedList, RerankError> {
    let issns = result_issns(results, index)?;
    let table = tally(issns.iter().copied());
    let scored = results
        .entries
        .iter()
        .zip(&issns)
        .map(|(e, issn)| {
            let factor = issn.map_or(1, |i| table.yield_of(i));
            (e.doc_id.clone(), e.score * factor as f64)
        })
        .collect();
    Ok(RankedList::from_scores(results.query.clone(), scored))
}
