//! On-disk index: a directory holding one version-stamped JSON file.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use bibliorank_core::Index;
use serde::{Deserialize, Serialize};

pub const INDEX_FILE: &str = "index.json";
pub const FORMAT: &str = "bibliorank-index";
pub const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: not a bibliorank index: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error("{path}: unsupported index version {found} (expected {VERSION})")]
    Version { path: PathBuf, found: u32 },
}

#[derive(Serialize)]
struct EnvelopeOut<'a> {
    format: &'static str,
    version: u32,
    index: &'a Index,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Deserialize)]
struct EnvelopeIn {
    index: Index,
}

pub fn save_index(dir: &Path, index: &Index) -> Result<(), StoreError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| StoreError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(INDEX_FILE);
    let tmp = dir.join(format!("{INDEX_FILE}.tmp"));
    let file = File::create(&tmp).map_err(io_err(&tmp))?;
    let mut out = BufWriter::new(file);
    let envelope = EnvelopeOut { format: FORMAT, version: VERSION, index };
    serde_json::to_writer(&mut out, &envelope)
        .map_err(|e| StoreError::Io { path: tmp.clone(), source: e.into() })?;
    out.flush().map_err(io_err(&tmp))?;
    drop(out);
    fs::rename(&tmp, &path).map_err(io_err(&path))
}

pub fn load_index(dir: &Path) -> Result<Index, StoreError> {
    let path = dir.join(INDEX_FILE);
    let file = File::open(&path).map_err(|source| StoreError::Io { path: path.clone(), source })?;
    let corrupt = |e: serde_json::Error| StoreError::Corrupt { path: path.clone(), reason: e.to_string() };
    // Parse once into a generic value so the header can be checked before the
    // body is interpreted.
    let value: serde_json::Value = serde_json::from_reader(BufReader::new(file)).map_err(|e| {
        if e.is_io() {
            StoreError::Io { path: path.clone(), source: e.into() }
        } else {
            corrupt(e)
        }
    })?;
    let header = Header::deserialize(&value).map_err(corrupt)?;
    if header.format != FORMAT {
        return Err(StoreError::Corrupt { path, reason: format!("format `{}`", header.format) });
    }
    if header.version != VERSION {
        return Err(StoreError::Version { path, found: header.version });
    }
    Ok(EnvelopeIn::deserialize(value).map_err(corrupt)?.index)
}
