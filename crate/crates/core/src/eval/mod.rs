// SPDX-License-Identifier: Apache-2.0

//! Evaluation: per-attempt outcomes, synth@k / pass@k, difficulty tiers,
//! reports and constrained-simulation log parsing.
//!
//! Ratios are exact rationals; rounding happens only when rendering.

mod metrics;
mod outcome;
mod report;
mod run;
mod simlog;
mod tiers;

pub use metrics::{pass_at_k, pass_at_k_with, percent, Estimator, Predicate};
pub use outcome::{read_jsonl, AttemptOutcome, DEFAULT_MODEL};
pub use report::{aggregate_report, benchmark_matrix, render_matrix, MatrixRow, MetricReport, ModelReport, RatioSet, RatioValue};
pub use run::{evaluate_attempt, Attempt, AttemptError};
pub use simlog::{parse_sim_log, SimCounts};
pub use tiers::{classify_tiers, tercile_boundaries, ProblemMeta, ProblemSpec, Tier};

pub type Ratio = num_rational::Ratio<u128>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("problem `{0}` has fewer than {1} attempts numbered from 1")]
    InsufficientAttempts(String, u32),
    #[error("problem `{problem_id}` has attempt {attempt_idx} more than once")]
    DuplicateAttempt { problem_id: String, attempt_idx: u32 },
    #[error("invalid outcome for `{problem_id}` attempt {attempt_idx}: {reason}")]
    InvalidOutcome {
        problem_id: String,
        attempt_idx: u32,
        reason: &'static str,
    },
    #[error("k must be at least 1")]
    InvalidK,
    #[error("no problems to evaluate")]
    NoProblems,
    #[error("invalid tier boundaries ({0}, {1}): the first must be below the second")]
    InvalidBoundaries(u64, u64),
    #[error("problem `{0}` has a non-positive reference length")]
    InvalidProblem(String),
    #[error("problem `{0}` listed more than once")]
    DuplicateProblem(String),
    #[error("outcome refers to unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("model `{model}` has no outcomes for problem `{problem_id}`")]
    MissingOutcomes { model: String, problem_id: String },
    #[error("line {0}: malformed CONSTRAINT line")]
    MalformedLogLine(usize),
    #[error("line {line}: {reason}")]
    Input { line: usize, reason: String },
}
