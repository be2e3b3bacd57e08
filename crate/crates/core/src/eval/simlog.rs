// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimCounts {
    pub constraints_total: u32,
    pub constraints_passed: u32,
}

/// Counts `CONSTRAINT <id> PASS|FAIL` lines; a repeated id keeps its last verdict.
///
/// A line whose first word is `CONSTRAINT` but which does not follow the
/// protocol is always an error. With `strict`, every other non-blank line is
/// an error too; otherwise such lines are ignored.
pub fn parse_sim_log(log: &str, strict: bool) -> Result<SimCounts, EvalError> {
    static LINE: OnceLock<Regex> = OnceLock::new();
    let re = LINE.get_or_init(|| Regex::new(r"^CONSTRAINT\s+(\d+)\s+(PASS|FAIL)$").unwrap());
    let mut verdicts: BTreeMap<u64, bool> = BTreeMap::new();
    for (i, raw) in log.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match re.captures(line) {
            Some(c) => {
                let id: u64 = c[1].parse().map_err(|_| EvalError::MalformedLogLine(i + 1))?;
                verdicts.insert(id, &c[2] == "PASS");
            }
            None if strict || line.split_whitespace().next() == Some("CONSTRAINT") => {
                return Err(EvalError::MalformedLogLine(i + 1))
            }
            None => {}
        }
    }
    Ok(SimCounts {
        constraints_total: verdicts.len() as u32,
        constraints_passed: verdicts.values().filter(|&&ok| ok).count() as u32,
    })
}
