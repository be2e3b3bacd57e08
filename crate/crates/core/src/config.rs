// SPDX-License-Identifier: Apache-2.0

//! Toolkit configuration: one TOML file plus `ASTKIT_*` environment overrides.
//!
//! ```toml
//! workers = 4
//! seed = 7
//! leakage_threshold = 0.4
//! k_set = [1, 5, 10]
//! top = "top_module"
//! templates_dir = "templates"        # optional, relative to this file
//!
//! [optimize]
//! redundant_kinds = ["Comment", "Include"]
//! collapsible_kinds = ["ExprStmt", "CompoundStmt"]
//!
//! [dataset]
//! porting_attempts = 1
//! eval_instructions = "eval.jsonl"   # optional
//!
//! [[adapters]]
//! name = "vitis"
//! kind = "synthesis"
//! command_template = "run_hls.sh {input} {top} {workdir}"
//! timeout = 900
//! ```
//!
//! Overrides: `ASTKIT_WORKERS`, `ASTKIT_SEED`, `ASTKIT_LEAKAGE_THRESHOLD`,
//! `ASTKIT_TEMPLATES_DIR`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::hlsc::DEFAULT_TOP;
use crate::optimize::{OptimizeConfig, OptimizeError};
use crate::templates::TemplateStore;
use crate::toolbridge::{AdapterKind, ToolAdapter, ToolError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("reading config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parsing config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("environment variable {var}: cannot use `{value}`")]
    Env { var: &'static str, value: String },
    #[error("no {kind} adapter configured{}", .name.as_ref().map(|n| format!(" named `{n}`")).unwrap_or_default())]
    MissingAdapter { kind: AdapterKind, name: Option<String> },
    #[error(transparent)]
    Adapter(#[from] ToolError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    pub porting_attempts: u32,
    /// JSON-lines file of evaluation instructions for the leakage filter.
    pub eval_instructions: Option<PathBuf>,
    /// Adapter names; the first adapter of the right kind when unset.
    pub llm_adapter: Option<String>,
    pub synthesis_adapter: Option<String>,
    /// Attach the DOT control-flow graph to each record.
    pub with_cfg: bool,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            porting_attempts: 1,
            eval_instructions: None,
            llm_adapter: None,
            synthesis_adapter: None,
            with_cfg: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlobalConfig {
    pub workers: usize,
    pub seed: u64,
    pub leakage_threshold: f64,
    pub k_set: Vec<u32>,
    pub top: String,
    pub templates_dir: Option<PathBuf>,
    pub optimize: OptimizeConfig,
    pub dataset: DatasetConfig,
    pub adapters: Vec<ToolAdapter>,
}

impl Default for GlobalConfig {
    fn default() -> Self {
        GlobalConfig {
            workers: 4,
            seed: 0,
            leakage_threshold: 0.4,
            k_set: vec![1, 5, 10],
            top: DEFAULT_TOP.to_string(),
            templates_dir: None,
            optimize: OptimizeConfig::default(),
            dataset: DatasetConfig::default(),
            adapters: Vec::new(),
        }
    }
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

impl GlobalConfig {
    /// Parses TOML; relative paths are taken relative to `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let mut cfg: GlobalConfig = toml::from_str(text)?;
        if let Some(base) = base_dir {
            resolve(base, &mut cfg.templates_dir);
            resolve(base, &mut cfg.dataset.eval_instructions);
            for a in &mut cfg.adapters {
                resolve(base, &mut a.fixtures_dir);
                resolve(base, &mut a.workdir_root);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `path` and applies process environment overrides.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_toml_str(&text, path.parent())?;
        cfg.apply_env(|k| std::env::var(k).ok())?;
        Ok(cfg)
    }

    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        fn parsed<T: std::str::FromStr>(var: &'static str, v: String) -> Result<T, ConfigError> {
            v.trim().parse().map_err(|_| ConfigError::Env { var, value: v })
        }
        if let Some(v) = lookup("ASTKIT_WORKERS") {
            self.workers = parsed("ASTKIT_WORKERS", v)?;
        }
        if let Some(v) = lookup("ASTKIT_SEED") {
            self.seed = parsed("ASTKIT_SEED", v)?;
        }
        if let Some(v) = lookup("ASTKIT_LEAKAGE_THRESHOLD") {
            self.leakage_threshold = parsed("ASTKIT_LEAKAGE_THRESHOLD", v)?;
        }
        if let Some(v) = lookup("ASTKIT_TEMPLATES_DIR") {
            self.templates_dir = Some(PathBuf::from(v));
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.workers == 0 {
            return Err(ConfigError::Invalid("workers must be at least 1".into()));
        }
        if !(self.leakage_threshold > 0.0 && self.leakage_threshold <= 1.0) {
            return Err(ConfigError::Invalid(format!(
                "leakage_threshold must be in (0, 1], got {}",
                self.leakage_threshold
            )));
        }
        if self.k_set.is_empty() || self.k_set.contains(&0) {
            return Err(ConfigError::Invalid("k_set must be non-empty and positive".into()));
        }
        if self.dataset.porting_attempts == 0 {
            return Err(ConfigError::Invalid("porting_attempts must be at least 1".into()));
        }
        if self.top.is_empty() {
            return Err(ConfigError::Invalid("top must not be empty".into()));
        }
        self.optimize.validate()?;
        let mut names = std::collections::HashSet::new();
        for a in &self.adapters {
            a.validate()?;
            if !names.insert(a.name.as_str()) {
                return Err(ConfigError::Invalid(format!("duplicate adapter name `{}`", a.name)));
            }
        }
        Ok(())
    }

    /// The adapter named `name`, or the first one of `kind`.
    pub fn adapter(&self, kind: AdapterKind, name: Option<&str>) -> Result<&ToolAdapter, ConfigError> {
        self.adapters
            .iter()
            .find(|a| a.kind == kind && name.is_none_or(|n| a.name == n))
            .ok_or_else(|| ConfigError::MissingAdapter {
                kind,
                name: name.map(str::to_string),
            })
    }

    pub fn templates(&self) -> TemplateStore {
        match &self.templates_dir {
            Some(dir) => TemplateStore::from_dir(dir),
            None => TemplateStore::bundled(),
        }
    }
}
