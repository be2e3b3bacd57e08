// SPDX-License-Identifier: Apache-2.0

//! Subprocess execution with a wall-clock limit.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::ToolError;

pub(crate) struct ProcessOutput {
    pub success: bool,
    /// stdout followed by stderr.
    pub log: String,
}

/// Splits `template` on whitespace and substitutes `vars` in every word.
pub(crate) fn expand_command(template: &str, vars: &[(&str, &str)]) -> Vec<String> {
    template
        .split_whitespace()
        .map(|word| crate::templates::render(word, vars))
        .collect()
}

fn drain(mut r: impl Read + Send + 'static) -> thread::JoinHandle<Vec<u8>> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        buf
    })
}

pub(crate) fn run(
    adapter: &str,
    argv: &[String],
    workdir: &Path,
    env: &BTreeMap<String, String>,
    timeout: Duration,
) -> Result<ProcessOutput, ToolError> {
    let spawn_err = |reason: String| ToolError::SpawnFailure {
        adapter: adapter.to_string(),
        reason,
    };
    let (program, args) = argv.split_first().ok_or_else(|| spawn_err("empty command".into()))?;
    let mut child = Command::new(program)
        .args(args)
        .current_dir(workdir)
        .envs(env)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| spawn_err(format!("{program}: {e}")))?;
    let out = drain(child.stdout.take().expect("piped stdout"));
    let err = drain(child.stderr.take().expect("piped stderr"));

    let start = Instant::now();
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(ToolError::Timeout {
                    adapter: adapter.to_string(),
                    secs: timeout.as_secs_f64(),
                });
            }
            Ok(None) => thread::sleep(Duration::from_millis(10)),
            Err(e) => return Err(spawn_err(e.to_string())),
        }
    };
    let mut log = String::from_utf8_lossy(&out.join().unwrap_or_default()).into_owned();
    log.push_str(&String::from_utf8_lossy(&err.join().unwrap_or_default()));
    Ok(ProcessOutput {
        success: status.success(),
        log,
    })
}
