//! The request/response cassette: a persisted map from request hash to
//! recorded completion, enabling byte-identical offline replays of a whole
//! experiment.
//!
//! On disk a cassette is JSONL, one entry per line, append-only. Loading
//! tolerates a missing file (an empty store); replaying against an entry
//! that was never recorded surfaces as a miss at completion time, not load
//! time.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::client::CompletionResponse;

/// What the gateway does with the network and the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CassetteMode {
    /// Call the endpoint for unseen requests and persist every response;
    /// answer repeats from the store without a second call.
    Record,
    /// Never touch the network; unknown requests are an error.
    Replay,
    /// Always call the endpoint; persist nothing.
    Passthrough,
}

/// The request fields a recorded response depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredRequest {
    pub model: String,
    pub temperature: f64,
    pub prompt: String,
}

/// One recorded exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CassetteEntry {
    pub hash: String,
    pub request: StoredRequest,
    pub response: CompletionResponse,
}

#[derive(Debug, Error)]
pub enum CassetteError {
    #[error("cassette I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("cassette line {line} is not a valid entry: {source}")]
    Malformed {
        line: usize,
        source: serde_json::Error,
    },
}

/// An in-memory view of the store plus the file it appends to.
#[derive(Debug)]
pub struct Cassette {
    mode: CassetteMode,
    path: Option<PathBuf>,
    entries: BTreeMap<String, CassetteEntry>,
}

impl Cassette {
    /// Load a cassette file. A missing file yields an empty store so that
    /// record mode can start from nothing.
    pub fn load(path: impl Into<PathBuf>, mode: CassetteMode) -> Result<Cassette, CassetteError> {
        let path = path.into();
        let mut entries = BTreeMap::new();
        match File::open(&path) {
            Ok(file) => {
                for (i, line) in BufReader::new(file).lines().enumerate() {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let entry: CassetteEntry = serde_json::from_str(&line)
                        .map_err(|source| CassetteError::Malformed { line: i + 1, source })?;
                    entries.insert(entry.hash.clone(), entry);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        Ok(Cassette {
            mode,
            path: Some(path),
            entries,
        })
    }

    /// A store that never touches disk; for tests and passthrough runs.
    pub fn in_memory(mode: CassetteMode) -> Cassette {
        Cassette {
            mode,
            path: None,
            entries: BTreeMap::new(),
        }
    }

    pub fn mode(&self) -> CassetteMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, hash: &str) -> Option<&CassetteEntry> {
        self.entries.get(hash)
    }

    /// Insert an entry and append it to the backing file, if any. A repeat
    /// hash overwrites in memory but is not appended twice.
    pub fn put(&mut self, entry: CassetteEntry) -> Result<(), CassetteError> {
        let novel = !self.entries.contains_key(&entry.hash);
        if novel {
            if let Some(path) = &self.path {
                let mut file = OpenOptions::new().create(true).append(true).open(path)?;
                writeln!(file, "{}", serde_json::to_string(&entry).expect("entries serialize"))?;
            }
        }
        self.entries.insert(entry.hash.clone(), entry);
        Ok(())
    }
}
