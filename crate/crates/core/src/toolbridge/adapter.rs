// SPDX-License-Identifier: Apache-2.0

//! Adapter configuration and the shared runtime state behind it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::limits::{SlotGuard, Slots, TokenBucket};
use super::llm::ChatMessage;
use super::ToolError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdapterKind {
    Llm,
    Synthesis,
    Simulation,
}

impl fmt::Display for AdapterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdapterKind::Llm => "llm",
            AdapterKind::Synthesis => "synthesis",
            AdapterKind::Simulation => "simulation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base_delay_ms: u64,
    pub max_delay_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 5,
            base_delay_ms: 500,
            max_delay_ms: 30_000,
        }
    }
}

fn default_timeout() -> f64 {
    600.0
}

fn default_parallelism() -> usize {
    1
}

fn default_failure_patterns() -> Vec<String> {
    vec!["ERROR: [HLS".to_string()]
}

/// Configuration of one external tool or service.
///
/// `command_template` is split on whitespace and each word has `{input}`,
/// `{workdir}`, `{top}` and (simulation only) `{rtl}` substituted, so
/// substituted paths never need quoting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolAdapter {
    pub name: String,
    pub kind: AdapterKind,
    #[serde(default)]
    pub command_template: String,
    /// Seconds.
    #[serde(default = "default_timeout")]
    pub timeout: f64,
    #[serde(default)]
    pub env: BTreeMap<String, String>,
    #[serde(default)]
    pub mock_mode: bool,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    /// Log substrings that mark a synthesis run as failed even on exit 0.
    #[serde(default = "default_failure_patterns")]
    pub failure_patterns: Vec<String>,
    #[serde(default)]
    pub endpoint: Option<String>,
    #[serde(default)]
    pub model: Option<String>,
    /// Name of the environment variable holding the API key.
    #[serde(default)]
    pub credential_env: Option<String>,
    #[serde(default)]
    pub fixtures_dir: Option<PathBuf>,
    #[serde(default)]
    pub rate_limit_per_sec: Option<f64>,
    #[serde(default)]
    pub retry: RetryPolicy,
    /// Parent directory for per-invocation workdirs; the system temp dir if unset.
    #[serde(default)]
    pub workdir_root: Option<PathBuf>,
}

impl ToolAdapter {
    /// Mock adapter with defaults, mostly for tests.
    pub fn mock(name: &str, kind: AdapterKind) -> Self {
        ToolAdapter {
            name: name.to_string(),
            kind,
            command_template: match kind {
                AdapterKind::Llm => String::new(),
                _ => "mock {input}".to_string(),
            },
            timeout: default_timeout(),
            env: BTreeMap::new(),
            mock_mode: true,
            parallelism: default_parallelism(),
            failure_patterns: default_failure_patterns(),
            endpoint: None,
            model: None,
            credential_env: None,
            fixtures_dir: None,
            rate_limit_per_sec: None,
            retry: RetryPolicy::default(),
            workdir_root: None,
        }
    }

    pub fn validate(&self) -> Result<(), ToolError> {
        let invalid = |reason: &str| ToolError::InvalidAdapter {
            adapter: self.name.clone(),
            reason: reason.to_string(),
        };
        if self.name.is_empty() {
            return Err(invalid("name is empty"));
        }
        if !(self.timeout > 0.0 && self.timeout.is_finite()) {
            return Err(invalid("timeout must be positive"));
        }
        if self.parallelism == 0 {
            return Err(invalid("parallelism must be at least 1"));
        }
        if let Some(rate) = self.rate_limit_per_sec {
            if !(rate > 0.0 && rate.is_finite()) {
                return Err(invalid("rate_limit_per_sec must be positive"));
            }
        }
        match self.kind {
            AdapterKind::Llm => {
                if !self.mock_mode && self.endpoint.is_none() {
                    return Err(invalid("llm adapter needs an endpoint"));
                }
            }
            AdapterKind::Synthesis | AdapterKind::Simulation => {
                if !self.command_template.contains("{input}") {
                    return Err(invalid("command_template must contain {input}"));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn expect_kind(&self, kind: AdapterKind) -> Result<(), ToolError> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(ToolError::WrongKind {
                adapter: self.name.clone(),
                expected: kind,
                found: self.kind,
            })
        }
    }
}

/// Canned result of a mocked synthesis or simulation run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MockOutcome {
    pub exit_code: i32,
    pub log: String,
    /// Simulated run time; exceeding the adapter timeout yields a timeout.
    pub delay_ms: u64,
}

/// A configured adapter plus its limits, call counter and mock state.
///
/// Shareable across threads; each invocation is otherwise independent.
#[derive(Debug)]
pub struct Adapter {
    config: ToolAdapter,
    seed: u64,
    calls: AtomicUsize,
    slots: Slots,
    bucket: Option<TokenBucket>,
    pub(crate) outcomes: Mutex<HashMap<String, MockOutcome>>,
    pub(crate) responses: Mutex<HashMap<String, String>>,
    pub(crate) requests: Mutex<Vec<Vec<ChatMessage>>>,
}

impl Adapter {
    /// `seed` drives retry jitter.
    pub fn new(config: ToolAdapter, seed: u64) -> Result<Self, ToolError> {
        config.validate()?;
        Ok(Adapter {
            seed,
            calls: AtomicUsize::new(0),
            slots: Slots::new(config.parallelism),
            bucket: config.rate_limit_per_sec.map(TokenBucket::new),
            outcomes: Mutex::new(HashMap::new()),
            responses: Mutex::new(HashMap::new()),
            requests: Mutex::new(Vec::new()),
            config,
        })
    }

    pub fn config(&self) -> &ToolAdapter {
        &self.config
    }

    pub fn name(&self) -> &str {
        &self.config.name
    }

    pub fn kind(&self) -> AdapterKind {
        self.config.kind
    }

    pub(crate) fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of invocations so far, mocked or real.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    /// Registers an in-memory synthesis or simulation fixture.
    pub fn register_outcome(&self, key: impl Into<String>, outcome: MockOutcome) {
        self.outcomes.lock().unwrap_or_else(|e| e.into_inner()).insert(key.into(), outcome);
    }

    /// Registers an in-memory LLM reply for an exact message list.
    pub fn register_response(&self, messages: &[ChatMessage], text: impl Into<String>) {
        self.responses
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(super::message_key(messages), text.into());
    }

    /// Message lists sent through this adapter, in call order.
    pub fn recorded_requests(&self) -> Vec<Vec<ChatMessage>> {
        self.requests.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Waits for a concurrency slot and a rate token, then counts the call.
    pub(crate) fn begin(&self) -> SlotGuard<'_> {
        let guard = self.slots.acquire();
        if let Some(bucket) = &self.bucket {
            bucket.take();
        }
        self.calls.fetch_add(1, Ordering::SeqCst);
        guard
    }
}
