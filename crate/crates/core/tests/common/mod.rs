// SPDX-License-Identifier: Apache-2.0

//! Shared helpers for integration tests: fixture access, random trees and
//! independent oracles.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use astkit::hlsc::SourceFile;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Bundled HLS-C corpus, sorted by file name.
pub fn corpus() -> Vec<SourceFile> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures().join("hlsc"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cpp"))
        .collect();
    paths.sort();
    paths.iter().map(|p| SourceFile::read(p).unwrap()).collect()
}

pub mod e2e;
pub mod oracles;
pub mod trees;
