// SPDX-License-Identifier: Apache-2.0

//! Dataset construction: port Verilog to HLS-C through an LLM, keep what
//! parses and synthesizes, serialize its AST, and drop records whose
//! instruction is too close to an evaluation instruction.

mod leakage;
mod ledger;
mod pipeline;
mod prompt;
mod rouge;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use leakage::{filter_leakage, load_eval_instructions, LeakageFilter};
pub use ledger::{ledger_path_for, JobLedger, JobStatus, LedgerEntry};
pub use pipeline::{run_dataset_build, summary_path_for, BuildSummary, DatasetBuild};
pub use prompt::{build_porting_prompt, parse_porting_response, PortingResponse};
pub use rouge::{lcs_len, rouge_l, rouge_l_text, tokenize, RougeScore};

use crate::serialize::TrainingRecord;
use crate::templates::TemplateError;
use crate::toolbridge::ToolError;

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("response has no HLS code section")]
    MissingCodeSection,
    #[error("response has no instruction section")]
    MissingInstructionSection,
    #[error("token sequence is empty")]
    EmptySequence,
    #[error("beta must be positive and finite, got {0}")]
    InvalidBeta(f64),
    #[error("leakage threshold must be in (0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("duplicate record id `{0}`")]
    DuplicateId(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Malformed { path: PathBuf, line: usize, reason: String },
    #[error("ledger: `{source_id}` cannot move from {from:?} to {to:?}")]
    BadTransition {
        source_id: String,
        from: JobStatus,
        to: JobStatus,
    },
    #[error(transparent)]
    Tool(#[from] ToolError),
}

impl DatasetError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> DatasetError {
        let path = path.into();
        move |source| DatasetError::Io { path, source }
    }
}

/// One output row: a training record plus its filter verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    #[serde(flatten)]
    pub record: TrainingRecord,
    pub synthesizable: bool,
    pub rouge_max: f64,
    pub kept: bool,
}

/// Writes records as JSON lines, refusing duplicate ids.
pub fn write_records(records: &[DatasetRecord], mut out: impl std::io::Write) -> Result<(), DatasetError> {
    let mut ids = std::collections::HashSet::new();
    for r in records {
        if !ids.insert(r.record.id.as_str()) {
            return Err(DatasetError::DuplicateId(r.record.id.clone()));
        }
    }
    let io = |e| DatasetError::Io {
        path: PathBuf::from("<output>"),
        source: e,
    };
    for r in records {
        let line = serde_json::to_string(r).expect("record serializes");
        writeln!(out, "{line}").map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Reads records written by [`write_records`].
pub fn read_records(path: &std::path::Path) -> Result<Vec<DatasetRecord>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(DatasetError::io(path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| DatasetError::Malformed {
                path: path.to_path_buf(),
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}
