// SPDX-License-Identifier: Apache-2.0

//! Batch dataset build over a directory of Verilog files.

use std::collections::{BTreeMap, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::{mpsc, Mutex};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::leakage::LeakageFilter;
use super::ledger::{ledger_path_for, JobLedger, JobStatus, LedgerEntry};
use super::prompt::{build_porting_prompt, parse_porting_response};
use super::{write_records, DatasetError, DatasetRecord};
use crate::cfg::analyze_control_flow;
use crate::config::GlobalConfig;
use crate::hlsc::{find_function, parse_text};
use crate::optimize::optimize;
use crate::serialize::{assemble_training_record, serialize, SerializedAst};
use crate::templates::TemplateStore;
use crate::toolbridge::{llm_chat, run_synthesis, Adapter, ToolError};

/// Services and settings for one build.
pub struct DatasetBuild<'a> {
    pub config: &'a GlobalConfig,
    pub llm: &'a Adapter,
    pub synth: &'a Adapter,
    /// Leakage reference set; when empty, no record is dropped for leakage.
    pub eval_instructions: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BuildSummary {
    pub total: usize,
    pub pending: usize,
    pub ported: usize,
    pub parse_failed: usize,
    pub synth_failed: usize,
    pub accepted: usize,
    /// Accepted and below the leakage threshold.
    pub kept: usize,
    pub dropped_by_leakage: usize,
    /// Sources with an error still attached, e.g. an unreachable LLM.
    pub errors: BTreeMap<String, String>,
}

/// `<out>.summary.json` next to the dataset file.
pub fn summary_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".summary.json");
    out.with_file_name(name)
}

fn collect_corpus(dir: &Path) -> Result<Vec<(String, PathBuf)>, DatasetError> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).map_err(DatasetError::io(&d))? {
            let path = entry.map_err(DatasetError::io(&d))?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|e| e == "v" || e == "sv") {
                let rel = path.strip_prefix(dir).unwrap_or(&path);
                let id = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
                files.push((id, path));
            }
        }
    }
    files.sort();
    Ok(files)
}

fn record_id(source_id: &str) -> String {
    format!("hls-{}", &hex::encode(Sha256::digest(source_id.as_bytes()))[..16])
}

struct Job {
    source_id: String,
    path: PathBuf,
    prior: Option<LedgerEntry>,
}

/// Ported output that has already parsed and serialized.
struct Ported {
    instruction: String,
    code: String,
    ast: String,
    cfg_dot: Option<String>,
}

fn port(job: &Job, ctx: &DatasetBuild<'_>, templates: &TemplateStore) -> Result<Ported, Box<LedgerEntry>> {
    let cfg = ctx.config;
    let fail = |status, msg: String| Box::new(LedgerEntry::new(&job.source_id, status).with_error(msg));
    let verilog = std::fs::read_to_string(&job.path)
        .map_err(|e| fail(JobStatus::ParseFailed, format!("reading source: {e}")))?;
    let messages = build_porting_prompt(&verilog, templates).map_err(|e| match e {
        DatasetError::EmptyInput(_) => fail(JobStatus::ParseFailed, e.to_string()),
        other => fail(JobStatus::Pending, other.to_string()),
    })?;
    let mut last_error = String::new();
    for attempt in 1..=cfg.dataset.porting_attempts {
        let reply = llm_chat(&messages, ctx.llm).map_err(|e| fail(JobStatus::Pending, e.to_string()))?;
        match check_port(&reply, cfg) {
            Ok(p) => return Ok(p),
            Err(e) => {
                log::info!("{}: attempt {attempt} rejected: {e}", job.source_id);
                last_error = e;
            }
        }
    }
    Err(fail(JobStatus::ParseFailed, last_error))
}

fn check_port(reply: &str, cfg: &GlobalConfig) -> Result<Ported, String> {
    let resp = parse_porting_response(reply).map_err(|e| e.to_string())?;
    let tu = parse_text(&resp.hls_code).map_err(|e| format!("parse: {e}"))?;
    let top = find_function(&tu, &cfg.top).map_err(|e| e.to_string())?;
    let opt = optimize(top, &cfg.optimize).map_err(|e| e.to_string())?;
    let ast = serialize(&opt).map_err(|e| e.to_string())?;
    let cfg_dot = cfg.dataset.with_cfg.then(|| analyze_control_flow(&opt).to_dot(&opt));
    Ok(Ported {
        instruction: resp.instruction,
        code: resp.hls_code,
        ast: ast.text,
        cfg_dot,
    })
}

fn ported_entry(source_id: &str, status: JobStatus, p: &Ported) -> LedgerEntry {
    LedgerEntry {
        instruction: Some(p.instruction.clone()),
        code: Some(p.code.clone()),
        ast: Some(p.ast.clone()),
        cfg_dot: p.cfg_dot.clone(),
        ..LedgerEntry::new(source_id, status)
    }
}

fn process(job: Job, ctx: &DatasetBuild<'_>, templates: &TemplateStore, tx: &mpsc::Sender<LedgerEntry>) {
    let send = |e: LedgerEntry| {
        let _ = tx.send(e);
    };
    let ported = match job.prior.as_ref().filter(|e| e.status == JobStatus::Ported) {
        Some(prev) => Ported {
            instruction: prev.instruction.clone().unwrap_or_default(),
            code: prev.code.clone().unwrap_or_default(),
            ast: prev.ast.clone().unwrap_or_default(),
            cfg_dot: prev.cfg_dot.clone(),
        },
        None => match port(&job, ctx, templates) {
            Ok(p) => {
                send(ported_entry(&job.source_id, JobStatus::Ported, &p));
                p
            }
            Err(entry) => return send(*entry),
        },
    };
    let entry = match run_synthesis(&ported.code, &ctx.config.top, ctx.synth) {
        Ok(r) if r.success => ported_entry(&job.source_id, JobStatus::Accepted, &ported),
        Ok(r) => {
            let last = r.log_excerpt.lines().rev().find(|l| !l.trim().is_empty()).unwrap_or("synthesis failed");
            ported_entry(&job.source_id, JobStatus::SynthFailed, &ported).with_error(last.trim())
        }
        Err(e @ ToolError::Timeout { .. }) => {
            ported_entry(&job.source_id, JobStatus::SynthFailed, &ported).with_error(e.to_string())
        }
        Err(e) => ported_entry(&job.source_id, JobStatus::Ported, &ported).with_error(e.to_string()),
    };
    send(entry);
}

/// Ports, validates, synthesizes, serializes and filters every Verilog file
/// under `corpus_dir`, writing `out` (JSON lines, sorted by source) and its
/// summary. Jobs already finished in the ledger are not redone.
pub fn run_dataset_build(corpus_dir: &Path, out: &Path, ctx: &DatasetBuild<'_>) -> Result<BuildSummary, DatasetError> {
    let corpus = collect_corpus(corpus_dir)?;
    let mut ledger = JobLedger::open(&ledger_path_for(out))?;
    let templates = ctx.config.templates();

    let jobs: VecDeque<Job> = corpus
        .iter()
        .filter(|(id, _)| !ledger.status(id).is_terminal())
        .map(|(id, path)| Job {
            source_id: id.clone(),
            path: path.clone(),
            prior: ledger.get(id).cloned(),
        })
        .collect();
    log::info!("{} sources, {} to process", corpus.len(), jobs.len());

    let workers = ctx.config.workers.min(jobs.len());
    let queue = Mutex::new(jobs);
    let (tx, rx) = mpsc::channel();
    let mut write_error = None;
    std::thread::scope(|s| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (queue, templates) = (&queue, &templates);
            s.spawn(move || loop {
                let job = queue.lock().unwrap_or_else(|e| e.into_inner()).pop_front();
                match job {
                    Some(job) => process(job, ctx, templates, &tx),
                    None => break,
                }
            });
        }
        drop(tx);
        // Single writer: only this thread touches the ledger.
        for entry in rx {
            if write_error.is_none() {
                if let Err(e) = ledger.record(entry) {
                    write_error = Some(e);
                }
            }
        }
    });
    if let Some(e) = write_error {
        return Err(e);
    }

    let filter = if ctx.eval_instructions.is_empty() {
        log::warn!("no evaluation instructions; leakage filter disabled");
        None
    } else {
        Some(LeakageFilter::new(&ctx.eval_instructions, ctx.config.leakage_threshold)?)
    };
    let mut summary = BuildSummary {
        total: corpus.len(),
        ..Default::default()
    };
    let mut records = Vec::new();
    for (id, _) in &corpus {
        let entry = ledger.get(id);
        let status = entry.map_or(JobStatus::Pending, |e| e.status);
        match status {
            JobStatus::Pending => summary.pending += 1,
            JobStatus::Ported => summary.ported += 1,
            JobStatus::ParseFailed => summary.parse_failed += 1,
            JobStatus::SynthFailed => summary.synth_failed += 1,
            JobStatus::Accepted => summary.accepted += 1,
        }
        if let Some(err) = entry.and_then(|e| e.error.as_ref()) {
            summary.errors.insert(id.clone(), err.clone());
        }
        let Some(entry) = entry.filter(|_| matches!(status, JobStatus::Accepted | JobStatus::SynthFailed)) else {
            continue;
        };
        let mut record = assemble_training_record(
            entry.instruction.as_deref().unwrap_or_default(),
            SerializedAst::from(entry.ast.clone().unwrap_or_default()),
            entry.code.as_deref().unwrap_or_default(),
            record_id(id),
            id.clone(),
        )
        .map_err(|e| DatasetError::Malformed {
            path: ledger.path().to_path_buf(),
            line: 0,
            reason: format!("{id}: {e}"),
        })?;
        record.cfg_dot = entry.cfg_dot.clone();
        let synthesizable = status == JobStatus::Accepted;
        let mut row = DatasetRecord {
            record,
            synthesizable,
            rouge_max: 0.0,
            kept: synthesizable,
        };
        if let Some(f) = &filter {
            f.apply(&mut row);
        }
        if row.kept {
            summary.kept += 1;
        } else if synthesizable {
            summary.dropped_by_leakage += 1;
        }
        records.push(row);
    }

    let tmp = out.with_extension("jsonl.tmp");
    let file = std::fs::File::create(&tmp).map_err(DatasetError::io(&tmp))?;
    write_records(&records, std::io::BufWriter::new(file))?;
    std::fs::rename(&tmp, out).map_err(DatasetError::io(out))?;
    let summary_path = summary_path_for(out);
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    std::fs::write(&summary_path, json).map_err(DatasetError::io(&summary_path))?;
    Ok(summary)
}
