//! Command-line entry point. Machine-readable output (TSV, JSON, JSONL) goes
//! to stdout; diagnostics go to stderr.

use std::ffi::OsString;
use std::io::{self, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use bibliorank_core::stratagem::{compare_stratagems, Judged};
use bibliorank_core::{Index, Stratagem, DEFAULT_NODE_CAP};
use clap::{Parser, Subcommand};

use crate::corpus::{load_corpus, write_corpus, LoadError};
use crate::gen::{generate, GenConfig};
use crate::inspect::{run_search, zone_report, QueryError};
use crate::server::{self, AppState};
use crate::store::{load_index, save_index, StoreError};
use crate::tsv::{read_qrels, read_queries, TsvError};

pub const PORT_ENV: &str = "BIBLIORANK_PORT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Data = 2,
    Runtime = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Parser, Debug)]
#[command(name = "bibliorank", version, about = "Bibliometric-enhanced search: TF-IDF with Bradfordizing and author-centrality re-ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_rank(s: &str) -> Result<Stratagem, String> {
    s.parse::<Stratagem>()
        .map_err(|e| format!("{e}; expected one of tfidf, bradford, bradford_mult, authcent"))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an index directory from a JSONL corpus.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Fail if any line cannot be parsed.
        #[arg(long)]
        strict: bool,
    },
    /// Rank one query and print `rank, doc id, score, title` as TSV.
    Search {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long, value_parser = parse_rank, default_value = "tfidf")]
        rank: Stratagem,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        top: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        authcent_node_cap: usize,
    },
    /// Print the Bradford zone report for a query.
    Zones {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        query: String,
        /// Emit a JSON array instead of TSV.
        #[arg(long)]
        json: bool,
    },
    /// Compare all stratagems over a query set and print a JSON report.
    Eval {
        #[arg(long)]
        index: PathBuf,
        /// TSV of `query_id<TAB>query text`.
        #[arg(long)]
        queries: PathBuf,
        /// TSV of `query_id<TAB>doc_id<TAB>0|1`.
        #[arg(long)]
        qrels: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        authcent_node_cap: usize,
    },
    /// Serve the HTTP JSON API.
    Serve {
        #[arg(long)]
        index: PathBuf,
        /// Overridden by the BIBLIORANK_PORT environment variable.
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        authcent_node_cap: usize,
    },
    /// Write a reproducible synthetic corpus as JSONL.
    Gen {
        #[arg(long)]
        docs: usize,
        #[arg(long)]
        journals: usize,
        #[arg(long)]
        authors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    status: ExitStatus,
    message: String,
}

impl Failure {
    fn new(status: ExitStatus, message: impl ToString) -> Self {
        Failure { status, message: message.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(ExitStatus::Runtime, e)
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        let status = match e {
            StoreError::Io { .. } => ExitStatus::Runtime,
            StoreError::Corrupt { .. } | StoreError::Version { .. } => ExitStatus::Data,
        };
        Failure::new(status, e)
    }
}

impl From<TsvError> for Failure {
    fn from(e: TsvError) -> Self {
        let status = match e {
            TsvError::Io(_) => ExitStatus::Runtime,
            TsvError::Line { .. } => ExitStatus::Data,
        };
        Failure::new(status, e)
    }
}

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        let status = match e {
            QueryError::EmptyQuery => ExitStatus::Usage,
            QueryError::Rerank(_) => ExitStatus::Runtime,
        };
        Failure::new(status, e)
    }
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    ExitStatus::Success
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    ExitStatus::Usage
                }
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => ExitStatus::Success,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.status
        }
    }
}

fn open_index(dir: &Path, stderr: &mut dyn Write) -> Result<Index, Failure> {
    let index = load_index(dir)?;
    let _ = writeln!(stderr, "loaded index {} ({} documents)", dir.display(), index.doc_count());
    Ok(index)
}

fn tsv_field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Ingest { input, out, strict } => {
            let report = load_corpus(&input).map_err(|e| match e {
                LoadError::Io(e) => Failure::new(ExitStatus::Runtime, format!("{}: {e}", input.display())),
                e @ LoadError::DuplicateId { .. } => Failure::new(ExitStatus::Data, e),
            })?;
            for (line, err) in &report.skipped {
                let _ = writeln!(stderr, "line {line}: {err}");
            }
            let _ = writeln!(stderr, "loaded {} records, skipped {}", report.loaded, report.skipped.len());
            if strict && !report.skipped.is_empty() {
                return Err(Failure::new(
                    ExitStatus::Data,
                    format!("{} malformed lines (--strict)", report.skipped.len()),
                ));
            }
            let index = Index::build(&report.corpus);
            save_index(&out, &index)?;
            let _ = writeln!(stderr, "indexed {} terms into {}", index.term_count(), out.display());
        }
        Command::Search { index, query, rank, top, authcent_node_cap } => {
            let index = open_index(&index, stderr)?;
            let limit = usize::try_from(top).unwrap_or(usize::MAX);
            let page = run_search(&index, &query, rank, 0, limit, authcent_node_cap)?;
            for hit in &page.results {
                writeln!(stdout, "{}\t{}\t{}\t{}", hit.rank, hit.doc_id, hit.score, tsv_field(&hit.title))?;
            }
            let _ = writeln!(
                stderr,
                "{} matches; {} in {:.1} ms (base {:.1} ms)",
                page.total, page.stratagem, page.timing.rerank_ms, page.timing.base_ms
            );
        }
        Command::Zones { index, query, json } => {
            let index = open_index(&index, stderr)?;
            let rows = zone_report(&index, &query)?;
            if json {
                serde_json::to_writer_pretty(&mut *stdout, &rows).map_err(io::Error::from)?;
                writeln!(stdout)?;
            } else {
                for r in &rows {
                    writeln!(stdout, "{}\t{}\t{}\t{}", r.issn, tsv_field(&r.journal), r.yield_count, r.zone)?;
                }
            }
        }
        Command::Eval { index, queries, qrels, k, authcent_node_cap } => {
            let index = open_index(&index, stderr)?;
            let queries = read_queries(&queries)?;
            let qrels = read_qrels(&qrels)?;
            let k = usize::try_from(k).unwrap_or(usize::MAX);
            let mut reports = Vec::with_capacity(queries.len());
            for (id, text) in &queries {
                let judged = Judged { qrels: &qrels, query_id: id };
                let report = compare_stratagems(&index, text, k, Some(judged), authcent_node_cap)
                    .map_err(|e| Failure::new(ExitStatus::Data, format!("query `{id}`: {e}")))?;
                reports.push(report);
            }
            serde_json::to_writer_pretty(&mut *stdout, &reports).map_err(io::Error::from)?;
            writeln!(stdout)?;
        }
        Command::Serve { index, port, host, authcent_node_cap } => {
            let port = match std::env::var(PORT_ENV) {
                Ok(v) => v
                    .parse::<u16>()
                    .map_err(|_| Failure::new(ExitStatus::Usage, format!("{PORT_ENV}=`{v}` is not a port")))?,
                Err(_) => port,
            };
            let index = open_index(&index, stderr)?;
            let state = Arc::new(AppState { index, node_cap: authcent_node_cap });
            let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            runtime.block_on(server::serve(SocketAddr::new(host, port), state))?;
        }
        Command::Gen { docs, journals, authors, seed, out } => {
            let records = generate(GenConfig { docs, journals, authors, seed });
            match out {
                Some(path) => write_corpus(io::BufWriter::new(std::fs::File::create(path)?), &records)?,
                None => write_corpus(&mut *stdout, &records)?,
            }
        }
    }
    Ok(())
}
