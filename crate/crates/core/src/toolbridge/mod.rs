// SPDX-License-Identifier: Apache-2.0

//! Adapters for the external services the pipeline depends on: a
//! chat-completion LLM endpoint, an HLS synthesis tool and an RTL simulator.
//!
//! Every adapter has a mock mode that answers from fixtures keyed by a hash
//! of the request, so the whole toolkit can run without network access or
//! EDA installs.

mod adapter;
mod limits;
mod llm;
mod process;
mod tools;

use std::path::PathBuf;

pub use adapter::{Adapter, AdapterKind, MockOutcome, RetryPolicy, ToolAdapter};
pub use llm::{build_testbench_augmentation_prompt, llm_chat, message_key, ChatMessage, Role};
pub use tools::{mock_rtl, run_constrained_sim, run_synthesis, synthesis_key, simulation_key, SimResult, SynthResult};

use crate::templates::TemplateError;

#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("adapter `{adapter}` timed out after {secs} s")]
    Timeout { adapter: String, secs: f64 },
    #[error("failed to start `{adapter}`: {reason}")]
    SpawnFailure { adapter: String, reason: String },
    #[error("workdir error: {0}")]
    WorkdirError(String),
    #[error("HTTP status {0}")]
    HttpError(u16),
    #[error("rate limited after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("adapter `{adapter}` has no mock fixture for key {key}")]
    MissingFixture { adapter: String, key: String },
    #[error("adapter `{adapter}` is a {found} adapter, expected {expected}")]
    WrongKind {
        adapter: String,
        expected: AdapterKind,
        found: AdapterKind,
    },
    #[error("invalid adapter `{adapter}`: {reason}")]
    InvalidAdapter { adapter: String, reason: String },
    #[error("credential variable `{0}` is not set")]
    MissingCredential(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error(transparent)]
    Template(#[from] TemplateError),
}

/// Where mock fixtures for an adapter live, if anywhere.
pub(crate) fn fixture_path(adapter: &ToolAdapter, file: &str) -> Option<PathBuf> {
    adapter.fixtures_dir.as_ref().map(|d| d.join(file))
}
