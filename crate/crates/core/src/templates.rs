// SPDX-License-Identifier: Apache-2.0

//! Versioned prompt templates.
//!
//! The toolkit ships its templates compiled in. A configured templates
//! directory replaces them file by file; a name missing from that directory
//! is an error rather than a silent fallback.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use regex::{Captures, Regex};

/// Version tag shared by all bundled templates.
pub const TEMPLATE_VERSION: &str = "v1";

pub const PORTING_SYSTEM: &str = "porting_system.v1.txt";
pub const TESTBENCH_SYSTEM: &str = "testbench_augment_system.v1.txt";
pub const TESTBENCH_USER: &str = "testbench_augment_user.v1.txt";

const BUNDLED: &[(&str, &str)] = &[
    (PORTING_SYSTEM, include_str!("../templates/porting_system.v1.txt")),
    (TESTBENCH_SYSTEM, include_str!("../templates/testbench_augment_system.v1.txt")),
    (TESTBENCH_USER, include_str!("../templates/testbench_augment_user.v1.txt")),
];

#[derive(Debug, thiserror::Error)]
pub enum TemplateError {
    #[error("template `{name}` not found{}", .dir.as_ref().map(|d| format!(" in {}", d.display())).unwrap_or_default())]
    NotFound { name: String, dir: Option<PathBuf> },
    #[error("reading template {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Default)]
pub struct TemplateStore {
    dir: Option<PathBuf>,
}

impl TemplateStore {
    /// Store serving only the bundled templates.
    pub fn bundled() -> Self {
        TemplateStore { dir: None }
    }

    /// Store reading every template from `dir`.
    pub fn from_dir(dir: impl Into<PathBuf>) -> Self {
        TemplateStore {
            dir: Some(dir.into()),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn load(&self, name: &str) -> Result<String, TemplateError> {
        match &self.dir {
            Some(dir) => {
                let path = dir.join(name);
                match std::fs::read_to_string(&path) {
                    Ok(text) => Ok(text),
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(TemplateError::NotFound {
                        name: name.to_string(),
                        dir: Some(dir.clone()),
                    }),
                    Err(source) => Err(TemplateError::Io { path, source }),
                }
            }
            None => BUNDLED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| TemplateError::NotFound {
                    name: name.to_string(),
                    dir: None,
                }),
        }
    }

    /// Names of the bundled templates, for version reporting.
    pub fn bundled_names() -> impl Iterator<Item = &'static str> {
        BUNDLED.iter().map(|(n, _)| *n)
    }
}

/// Substitutes `{key}` placeholders in a single pass. Substituted values are
/// never rescanned, and unknown placeholders are left untouched.
pub fn render(template: &str, vars: &[(&str, &str)]) -> String {
    static PLACEHOLDER: OnceLock<Regex> = OnceLock::new();
    let re = PLACEHOLDER.get_or_init(|| Regex::new(r"\{([A-Za-z_][A-Za-z0-9_]*)\}").unwrap());
    re.replace_all(template, |caps: &Captures<'_>| {
        let key = &caps[1];
        vars.iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.to_string())
            .unwrap_or_else(|| caps[0].to_string())
    })
    .into_owned()
}
