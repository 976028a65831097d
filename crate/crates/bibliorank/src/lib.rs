//! Files, service and command line around `bibliorank-core`.
//!
//! * [`corpus`]: JSONL bibliographic records.
//! * [`store`]: index directories.
//! * [`tsv`]: qrels and query lists.
//! * [`gen`]: seeded synthetic corpora.
//! * [`inspect`]: annotated search pages, zone reports and graph exports.
//! * [`server`]: the HTTP JSON API.
//! * [`cli`]: the `bibliorank` binary.

pub mod cli;
pub mod corpus;
pub mod gen;
pub mod inspect;
pub mod server;
pub mod store;
pub mod tsv;
