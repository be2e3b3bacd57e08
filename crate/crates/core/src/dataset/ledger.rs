// SPDX-License-Identifier: Apache-2.0

//! Append-only job ledger that makes dataset builds resumable.
//!
//! Each line is a [`LedgerEntry`]; the last line for a source wins. A
//! truncated final line (an interrupted write) is ignored on load.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::DatasetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobStatus {
    Pending,
    Ported,
    ParseFailed,
    SynthFailed,
    Accepted,
}

impl JobStatus {
    /// Forward moves only; staying put records a retryable error.
    pub fn can_advance_to(self, next: JobStatus) -> bool {
        use JobStatus::*;
        matches!(
            (self, next),
            (Pending, Pending | Ported | ParseFailed) | (Ported, Ported | SynthFailed | Accepted)
        )
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, JobStatus::ParseFailed | JobStatus::SynthFailed | JobStatus::Accepted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub source_id: String,
    pub status: JobStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instruction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ast: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cfg_dot: Option<String>,
}

impl LedgerEntry {
    pub fn new(source_id: impl Into<String>, status: JobStatus) -> Self {
        LedgerEntry {
            source_id: source_id.into(),
            status,
            error: None,
            instruction: None,
            code: None,
            ast: None,
            cfg_dot: None,
        }
    }

    pub fn with_error(mut self, error: impl Into<String>) -> Self {
        self.error = Some(error.into());
        self
    }
}

/// `<out>.ledger.jsonl` next to the dataset file.
pub fn ledger_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".ledger.jsonl");
    out.with_file_name(name)
}

#[derive(Debug)]
pub struct JobLedger {
    path: PathBuf,
    file: File,
    latest: BTreeMap<String, LedgerEntry>,
}

impl JobLedger {
    pub fn open(path: &Path) -> Result<Self, DatasetError> {
        let mut latest = BTreeMap::new();
        let mut truncate_to = None;
        let mut needs_newline = false;
        match std::fs::read_to_string(path) {
            Ok(text) => {
                let lines: Vec<&str> = text.lines().collect();
                for (i, line) in lines.iter().enumerate() {
                    if line.trim().is_empty() {
                        continue;
                    }
                    match serde_json::from_str::<LedgerEntry>(line) {
                        Ok(e) => {
                            latest.insert(e.source_id.clone(), e);
                        }
                        Err(_) if i + 1 == lines.len() && !text.ends_with('\n') => {
                            log::warn!("{}: dropping truncated last line", path.display());
                            truncate_to = Some(text.rfind('\n').map_or(0, |p| p + 1) as u64);
                        }
                        Err(e) => {
                            return Err(DatasetError::Malformed {
                                path: path.to_path_buf(),
                                line: i + 1,
                                reason: e.to_string(),
                            })
                        }
                    }
                }
                needs_newline = truncate_to.is_none() && !text.is_empty() && !text.ends_with('\n');
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(DatasetError::io(path)(e)),
        }
        if let Some(len) = truncate_to {
            let f = OpenOptions::new().write(true).open(path).map_err(DatasetError::io(path))?;
            f.set_len(len).map_err(DatasetError::io(path))?;
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(DatasetError::io(path))?;
        if needs_newline {
            file.write_all(b"\n").map_err(DatasetError::io(path))?;
        }
        Ok(JobLedger {
            path: path.to_path_buf(),
            file,
            latest,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, source_id: &str) -> Option<&LedgerEntry> {
        self.latest.get(source_id)
    }

    pub fn status(&self, source_id: &str) -> JobStatus {
        self.get(source_id).map_or(JobStatus::Pending, |e| e.status)
    }

    /// Appends `entry` after checking the status transition.
    pub fn record(&mut self, entry: LedgerEntry) -> Result<(), DatasetError> {
        let from = self.status(&entry.source_id);
        if !from.can_advance_to(entry.status) {
            return Err(DatasetError::BadTransition {
                source_id: entry.source_id,
                from,
                to: entry.status,
            });
        }
        let mut line = serde_json::to_string(&entry).expect("ledger entry serializes");
        line.push('\n');
        self.file.write_all(line.as_bytes()).map_err(DatasetError::io(&self.path))?;
        self.file.flush().map_err(DatasetError::io(&self.path))?;
        self.latest.insert(entry.source_id.clone(), entry);
        Ok(())
    }
}
