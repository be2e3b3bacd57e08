// SPDX-License-Identifier: Apache-2.0

//! Instruction-leakage filter against an evaluation set.

use std::path::Path;

use num_rational::Ratio;
use num_traits::Zero;

use super::rouge::{rouge_l, tokenize};
use super::{DatasetError, DatasetRecord};

/// Pre-tokenized evaluation instructions and a strict-below threshold.
#[derive(Debug, Clone)]
pub struct LeakageFilter {
    eval: Vec<Vec<String>>,
    threshold: Ratio<i128>,
    beta: f64,
}

impl LeakageFilter {
    pub fn new(eval_instructions: &[String], threshold: f64) -> Result<Self, DatasetError> {
        if eval_instructions.is_empty() {
            return Err(DatasetError::EmptyInput("evaluation instructions"));
        }
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(DatasetError::InvalidThreshold(threshold));
        }
        let threshold = Ratio::approximate_float(threshold).ok_or(DatasetError::InvalidThreshold(threshold))?;
        Ok(LeakageFilter {
            eval: eval_instructions.iter().map(|s| tokenize(s)).filter(|t| !t.is_empty()).collect(),
            threshold,
            beta: 1.0,
        })
    }

    /// Highest ROUGE-L of `instruction` against any evaluation instruction.
    /// An instruction without tokens scores zero.
    pub fn rouge_max(&self, instruction: &str) -> Ratio<i128> {
        let cand = tokenize(instruction);
        if cand.is_empty() {
            return Ratio::zero();
        }
        self.eval
            .iter()
            .filter_map(|r| rouge_l(&cand, r, self.beta).ok())
            .map(|s| s.ratio())
            .max()
            .unwrap_or_else(Ratio::zero)
    }

    pub fn apply(&self, rec: &mut DatasetRecord) {
        let score = self.rouge_max(&rec.record.instruction);
        rec.rouge_max = *score.numer() as f64 / *score.denom() as f64;
        rec.kept = rec.synthesizable && score < self.threshold;
    }
}

/// Sets `rouge_max` and `kept` on every record.
pub fn filter_leakage(
    mut records: Vec<DatasetRecord>,
    eval_instructions: &[String],
    threshold: f64,
) -> Result<Vec<DatasetRecord>, DatasetError> {
    let filter = LeakageFilter::new(eval_instructions, threshold)?;
    for r in &mut records {
        filter.apply(r);
    }
    Ok(records)
}

/// Reads evaluation instructions from JSON lines: each line is a string or an
/// object with an `instruction` field.
pub fn load_eval_instructions(path: &Path) -> Result<Vec<String>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(DatasetError::io(path))?;
    let malformed = |line: usize, reason: String| DatasetError::Malformed {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| malformed(i + 1, e.to_string()))?;
        let s = match &v {
            serde_json::Value::String(s) => s.as_str(),
            other => other
                .get("instruction")
                .and_then(|x| x.as_str())
                .ok_or_else(|| malformed(i + 1, "expected a string or an object with `instruction`".into()))?,
        };
        out.push(s.to_string());
    }
    Ok(out)
}
