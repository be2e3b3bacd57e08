// SPDX-License-Identifier: Apache-2.0

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::EvalError;

/// Model name used when an outcome record does not carry one.
pub const DEFAULT_MODEL: &str = "default";

fn default_model() -> String {
    DEFAULT_MODEL.to_string()
}

/// Result of one generation attempt on one problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptOutcome {
    pub problem_id: String,
    pub attempt_idx: u32,
    pub synth_ok: bool,
    pub constraints_total: u32,
    pub constraints_passed: u32,
    pub functional_ok: bool,
    #[serde(default = "default_model")]
    pub model: String,
}

impl AttemptOutcome {
    /// Builds an outcome with `functional_ok` derived from the other fields.
    pub fn new(
        problem_id: impl Into<String>,
        attempt_idx: u32,
        synth_ok: bool,
        constraints_total: u32,
        constraints_passed: u32,
    ) -> Self {
        AttemptOutcome {
            problem_id: problem_id.into(),
            attempt_idx,
            synth_ok,
            constraints_total,
            constraints_passed,
            functional_ok: synth_ok && constraints_total > 0 && constraints_passed == constraints_total,
            model: default_model(),
        }
    }

    pub fn with_model(mut self, model: impl Into<String>) -> Self {
        self.model = model.into();
        self
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let bad = |reason| EvalError::InvalidOutcome {
            problem_id: self.problem_id.clone(),
            attempt_idx: self.attempt_idx,
            reason,
        };
        if self.attempt_idx == 0 {
            return Err(bad("attempt_idx starts at 1"));
        }
        if self.constraints_passed > self.constraints_total {
            return Err(bad("more constraints passed than exist"));
        }
        let expected = self.synth_ok && self.constraints_total > 0 && self.constraints_passed == self.constraints_total;
        if self.functional_ok != expected {
            return Err(bad("functional_ok disagrees with synthesis and constraint counts"));
        }
        Ok(())
    }
}

/// Parses JSON-lines, skipping blank lines. Line numbers in errors are 1-based.
pub fn read_jsonl<T: DeserializeOwned>(text: &str) -> Result<Vec<T>, EvalError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| EvalError::Input {
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_functional_flag() {
        assert!(AttemptOutcome::new("p", 1, true, 3, 3).functional_ok);
        assert!(!AttemptOutcome::new("p", 1, true, 3, 2).functional_ok);
        assert!(!AttemptOutcome::new("p", 1, false, 3, 3).functional_ok);
        // No constraints means nothing was checked.
        assert!(!AttemptOutcome::new("p", 1, true, 0, 0).functional_ok);
    }

    #[test]
    fn validation() {
        assert!(AttemptOutcome::new("p", 1, true, 2, 2).validate().is_ok());
        assert!(AttemptOutcome::new("p", 0, true, 2, 2).validate().is_err());
        assert!(AttemptOutcome::new("p", 1, true, 2, 3).validate().is_err());
        let mut o = AttemptOutcome::new("p", 1, true, 2, 1);
        o.functional_ok = true;
        assert!(o.validate().is_err());
    }

    #[test]
    fn jsonl_defaults_model() {
        let rows: Vec<AttemptOutcome> = read_jsonl(
            "{\"problem_id\":\"a\",\"attempt_idx\":1,\"synth_ok\":true,\"constraints_total\":1,\"constraints_passed\":1,\"functional_ok\":true}\n\n",
        )
        .unwrap();
        assert_eq!(rows[0].model, DEFAULT_MODEL);
        assert!(matches!(read_jsonl::<AttemptOutcome>("{}"), Err(EvalError::Input { line: 1, .. })));
    }
}
