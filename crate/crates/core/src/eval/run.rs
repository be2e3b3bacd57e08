// SPDX-License-Identifier: Apache-2.0

//! Scoring one generated design: synthesize, simulate, count constraints.

use super::{parse_sim_log, AttemptOutcome, EvalError};
use crate::toolbridge::{run_constrained_sim, run_synthesis, Adapter, ToolError};

#[derive(Debug, thiserror::Error)]
pub enum AttemptError {
    #[error(transparent)]
    Tool(#[from] ToolError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// One attempt at one problem.
pub struct Attempt<'a> {
    pub problem_id: &'a str,
    pub attempt_idx: u32,
    pub hls_code: &'a str,
    pub top: &'a str,
    /// Constraint-augmented testbench.
    pub testbench: &'a str,
}

/// Synthesizes the attempt and, if that succeeds, runs the constrained
/// testbench against the generated RTL. A synthesis failure is an outcome,
/// not an error; tool errors such as timeouts are errors.
pub fn evaluate_attempt(
    attempt: &Attempt<'_>,
    synth: &Adapter,
    sim: &Adapter,
    strict_log: bool,
) -> Result<AttemptOutcome, AttemptError> {
    let synth_result = run_synthesis(attempt.hls_code, attempt.top, synth)?;
    let Some(rtl) = synth_result.rtl_path.as_deref().filter(|_| synth_result.success) else {
        return Ok(AttemptOutcome::new(attempt.problem_id, attempt.attempt_idx, false, 0, 0));
    };
    let sim_result = run_constrained_sim(rtl, attempt.testbench, sim)?;
    if !sim_result.exit_ok {
        log::warn!("{} attempt {}: simulator exited with an error", attempt.problem_id, attempt.attempt_idx);
    }
    let counts = parse_sim_log(&sim_result.log_text, strict_log)?;
    Ok(AttemptOutcome::new(
        attempt.problem_id,
        attempt.attempt_idx,
        true,
        counts.constraints_total,
        counts.constraints_passed,
    ))
}
