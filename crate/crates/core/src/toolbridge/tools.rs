// SPDX-License-Identifier: Apache-2.0

//! Synthesis and simulation invocations.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};
use tempfile::TempDir;

use super::adapter::{Adapter, AdapterKind, MockOutcome};
use super::process::{expand_command, run};
use super::{fixture_path, ToolError};

const EXCERPT_LINES: usize = 50;

#[derive(Debug, Clone)]
pub struct SynthResult {
    pub success: bool,
    pub log_excerpt: String,
    /// Generated RTL; set whenever `success` is.
    pub rtl_path: Option<PathBuf>,
    /// Seconds.
    pub wall_time: f64,
    // Keeps the workdir (and the RTL in it) alive as long as the result.
    workdir: Option<Arc<TempDir>>,
}

impl SynthResult {
    pub fn workdir(&self) -> Option<&Path> {
        self.workdir.as_deref().map(TempDir::path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    pub log_text: String,
    pub exit_ok: bool,
}

fn sha_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            h.update([0u8]);
        }
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

/// Mock fixture key of a synthesis request.
pub fn synthesis_key(hls_code: &str, top: &str) -> String {
    sha_hex(&[hls_code, top])
}

/// Mock fixture key of a simulation request.
pub fn simulation_key(rtl_text: &str, testbench: &str) -> String {
    sha_hex(&[rtl_text, testbench])
}

/// RTL text the mock synthesizer writes for a successful run.
pub fn mock_rtl(hls_code: &str, top: &str) -> String {
    format!("// mock RTL {}\nmodule {top}();\nendmodule\n", synthesis_key(hls_code, top))
}

fn fresh_workdir(adapter: &Adapter) -> Result<TempDir, ToolError> {
    let builder = {
        let mut b = tempfile::Builder::new();
        b.prefix("astkit-");
        b
    };
    let dir = match &adapter.config().workdir_root {
        Some(root) => {
            std::fs::create_dir_all(root).map_err(|e| ToolError::WorkdirError(format!("{}: {e}", root.display())))?;
            builder.tempdir_in(root)
        }
        None => builder.tempdir(),
    };
    dir.map_err(|e| ToolError::WorkdirError(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), ToolError> {
    std::fs::write(path, text).map_err(|e| ToolError::WorkdirError(format!("{}: {e}", path.display())))
}

fn excerpt(log: &str) -> String {
    let lines: Vec<&str> = log.lines().collect();
    lines[lines.len().saturating_sub(EXCERPT_LINES)..].join("\n")
}

/// Looks up a canned outcome: registered in memory, then `<key>.json`, then
/// `default.json` in the fixtures directory.
fn mock_outcome(adapter: &Adapter, key: &str) -> Result<Option<MockOutcome>, ToolError> {
    if let Some(o) = adapter.outcomes.lock().unwrap_or_else(|e| e.into_inner()).get(key) {
        return Ok(Some(o.clone()));
    }
    for file in [format!("{key}.json"), "default.json".to_string()] {
        let Some(path) = fixture_path(adapter.config(), &file) else {
            return Ok(None);
        };
        match std::fs::read_to_string(&path) {
            Ok(text) => {
                return serde_json::from_str(&text)
                    .map(Some)
                    .map_err(|e| ToolError::MalformedResponse(format!("{}: {e}", path.display())))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => continue,
            Err(e) => return Err(ToolError::WorkdirError(format!("{}: {e}", path.display()))),
        }
    }
    Ok(None)
}

fn play_mock(adapter: &Adapter, outcome: &MockOutcome) -> Result<(), ToolError> {
    let timeout = Duration::from_secs_f64(adapter.config().timeout);
    let delay = Duration::from_millis(outcome.delay_ms);
    if delay > timeout {
        std::thread::sleep(timeout);
        return Err(ToolError::Timeout {
            adapter: adapter.name().to_string(),
            secs: timeout.as_secs_f64(),
        });
    }
    std::thread::sleep(delay);
    Ok(())
}

fn find_rtl(dir: &Path, top: &str) -> Option<PathBuf> {
    let mut found = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let Ok(entries) = std::fs::read_dir(&d) else { continue };
        for entry in entries.flatten() {
            let path = entry.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|e| e == "v") {
                found.push(path);
            }
        }
    }
    found.sort();
    let wanted = format!("{top}.v");
    found
        .iter()
        .find(|p| p.file_name().is_some_and(|n| n == wanted.as_str()))
        .or(found.first())
        .cloned()
}

/// Writes `hls_code` into a fresh workdir and synthesizes it.
///
/// A run succeeds when the tool exits zero, no configured failure pattern
/// occurs in its output, and an RTL file was produced.
pub fn run_synthesis(hls_code: &str, top: &str, adapter: &Adapter) -> Result<SynthResult, ToolError> {
    let cfg = adapter.config();
    cfg.expect_kind(AdapterKind::Synthesis)?;
    let _slot = adapter.begin();
    let start = Instant::now();
    let workdir = fresh_workdir(adapter)?;
    let input = workdir.path().join(format!("{top}.cpp"));
    write_file(&input, hls_code)?;

    let (exit_ok, log) = if cfg.mock_mode {
        let key = synthesis_key(hls_code, top);
        let outcome = mock_outcome(adapter, &key)?.unwrap_or(MockOutcome {
            exit_code: 0,
            log: "mock synthesis finished\n".into(),
            delay_ms: 0,
        });
        play_mock(adapter, &outcome)?;
        if outcome.exit_code == 0 {
            write_file(&workdir.path().join(format!("{top}.v")), &mock_rtl(hls_code, top))?;
        }
        (outcome.exit_code == 0, outcome.log)
    } else {
        let input_s = input.to_string_lossy();
        let workdir_s = workdir.path().to_string_lossy();
        let argv = expand_command(
            &cfg.command_template,
            &[("input", &input_s), ("workdir", &workdir_s), ("top", top)],
        );
        let out = run(&cfg.name, &argv, workdir.path(), &cfg.env, Duration::from_secs_f64(cfg.timeout))?;
        (out.success, out.log)
    };

    let pattern_hit = cfg.failure_patterns.iter().any(|p| !p.is_empty() && log.contains(p.as_str()));
    let rtl_path = if exit_ok && !pattern_hit { find_rtl(workdir.path(), top) } else { None };
    let mut log_excerpt = excerpt(&log);
    if exit_ok && !pattern_hit && rtl_path.is_none() {
        log_excerpt.push_str("\nno RTL output found");
    }
    log::debug!("{}: synthesis of {top} -> {}", cfg.name, rtl_path.is_some());
    Ok(SynthResult {
        success: rtl_path.is_some(),
        log_excerpt,
        rtl_path,
        wall_time: start.elapsed().as_secs_f64(),
        workdir: Some(Arc::new(workdir)),
    })
}

/// Runs `testbench` against the RTL at `rtl_path` and returns the raw log.
pub fn run_constrained_sim(rtl_path: &Path, testbench: &str, adapter: &Adapter) -> Result<SimResult, ToolError> {
    let cfg = adapter.config();
    cfg.expect_kind(AdapterKind::Simulation)?;
    let rtl_text = std::fs::read_to_string(rtl_path).map_err(|e| ToolError::SpawnFailure {
        adapter: cfg.name.clone(),
        reason: format!("RTL {}: {e}", rtl_path.display()),
    })?;
    let _slot = adapter.begin();
    let workdir = fresh_workdir(adapter)?;
    let tb = workdir.path().join("tb.v");
    write_file(&tb, testbench)?;

    if cfg.mock_mode {
        let outcome = mock_outcome(adapter, &simulation_key(&rtl_text, testbench))?.unwrap_or_default();
        play_mock(adapter, &outcome)?;
        return Ok(SimResult {
            log_text: outcome.log,
            exit_ok: outcome.exit_code == 0,
        });
    }
    let tb_s = tb.to_string_lossy();
    let workdir_s = workdir.path().to_string_lossy();
    let rtl_s = rtl_path.to_string_lossy();
    let top = rtl_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let argv = expand_command(
        &cfg.command_template,
        &[("input", &tb_s), ("workdir", &workdir_s), ("rtl", &rtl_s), ("top", &top)],
    );
    let out = run(&cfg.name, &argv, workdir.path(), &cfg.env, Duration::from_secs_f64(cfg.timeout))?;
    Ok(SimResult {
        log_text: out.log,
        exit_ok: out.success,
    })
}
