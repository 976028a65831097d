//! Bibliometric-enhanced retrieval core.
//!
//! A TF-IDF baseline ranker over a scholarly corpus plus two science-model
//! re-ranking stratagems applied to each result set on the fly:
//!
//! * Bradfordizing ([`bradford`]): documents from the journals that yield the
//!   most hits for the query are moved to the top, either as contiguous
//!   journal blocks or by multiplying the TF-IDF score with the journal yield.
//! * Author centrality ([`coauthor`]): a co-authorship network is induced from
//!   the result set, exact betweenness is computed for every author, and each
//!   document is scored by its most central author.
//!
//! [`eval`] holds the ranking comparison metrics and [`stratagem`] ties the
//! rankers together. The crate is `no_std` and only needs `alloc`; file
//! formats, the HTTP service and the CLI live in the `bibliorank` crate.

#![cfg_attr(not(test), no_std)]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;

use alloc::string::String;

pub mod bradford;
pub mod coauthor;
pub mod eval;
pub mod index;
pub mod record;
pub mod stratagem;
pub mod text;

pub use bradford::{BradfordPartition, YieldTable, Zone};
pub use coauthor::{CentralityTable, CoauthorGraph, DEFAULT_NODE_CAP};
pub use eval::Qrels;
pub use index::{Index, RankedEntry, RankedList};
pub use record::{AuthorKey, BibRecord, Corpus};
pub use stratagem::Stratagem;

/// Errors raised while re-ranking a result set against an index.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RerankError {
    #[error("unknown document id `{0}`")]
    UnknownDoc(String),
    #[error("co-authorship graph has {nodes} nodes, exceeding the cap of {cap}")]
    GraphTooLarge { nodes: usize, cap: usize },
}
