// SPDX-License-Identifier: Apache-2.0

mod common;

use astkit::dataset::{read_records, JobStatus};
use astkit::toolbridge::Role;

const PORTING_PROMPT_SHA256: &str = "bbf9aa02c6f950c41da277d511905d4ed12112ce0ed5c3ec43fa03311bc29313";

#[test]
fn offline_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let run = common::e2e::run(dir.path(), 11);
    assert_eq!(run.summary.total, 5);
    assert_eq!(run.summary.accepted, 4);
    assert_eq!(run.summary.synth_failed, 1);
    assert_eq!(run.summary.kept, 4);
    assert!(run.summary.errors["divider.v"].contains("ERROR: [HLS"));

    let records = read_records(&run.out).unwrap();
    assert_eq!(records.len(), 5);
    assert_eq!(records.iter().filter(|r| r.kept).count(), 4);
    let divider = records.iter().find(|r| r.record.source_id == "divider.v").unwrap();
    assert!(!divider.synthesizable && !divider.kept);
    assert!(records.iter().all(|r| r.rouge_max < 0.4));
    let rom = records.iter().find(|r| r.record.source_id == "rom.v").unwrap();
    assert!(rom.record.ast.text.contains("IfStmt: Contn: (v_en)"));

    // Every request carries the porting system prompt unchanged.
    assert_eq!(run.requests.len(), 5);
    for req in &run.requests {
        assert_eq!(req.len(), 2);
        assert_eq!(req[0].role, Role::System);
        assert_eq!(sha256_hex(&req[0].content), PORTING_PROMPT_SHA256);
        assert_eq!(req[1].role, Role::User);
        assert!(req[1].content.starts_with("module "));
    }

    let report: serde_json::Value = serde_json::from_str(&run.report_json).unwrap();
    let overall = &report["models"][0]["overall"];
    assert_eq!(overall["synth"]["1"]["ratio"], "4/5");
    assert_eq!(overall["pass"]["1"]["percent"], "60.00%");
}

#[test]
fn deterministic_and_resumable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = common::e2e::run(a.path(), 5);
    let second = common::e2e::run(b.path(), 5);
    assert_eq!(first.dataset, second.dataset);
    assert_eq!(first.summary_json, second.summary_json);
    assert_eq!(first.report_json, second.report_json);
    assert_eq!(first.report_table, second.report_table);

    let resumed = common::e2e::run(a.path(), 5);
    assert_eq!(resumed.llm_calls, 0);
    assert_eq!(resumed.synth_calls, 0);
    assert_eq!(resumed.dataset, first.dataset);
}

#[test]
fn resume_after_llm_outage_only_redoes_pending() {
    let dir = tempfile::tempdir().unwrap();
    common::e2e::write_fixtures(dir.path());
    // Hide one response: that source stays pending with an error.
    let victim = common::e2e::llm_fixture_path(dir.path(), "rom");
    let stash = dir.path().join("stash.txt");
    std::fs::rename(&victim, &stash).unwrap();
    let partial = common::e2e::run(dir.path(), 1);
    assert_eq!(partial.summary.pending, 1);
    assert_eq!(partial.summary.errors.len(), 2);
    assert!(partial.summary.errors["rom.v"].contains("fixture"));

    std::fs::rename(&stash, &victim).unwrap();
    let full = common::e2e::run(dir.path(), 1);
    assert_eq!(full.llm_calls, 1);
    assert_eq!(full.summary.pending, 0);
    assert_eq!(full.summary.accepted + full.summary.synth_failed, 5);
    let ledger = astkit::dataset::JobLedger::open(&astkit::dataset::ledger_path_for(&full.out)).unwrap();
    assert_eq!(ledger.status("rom.v"), JobStatus::Accepted);
}

fn sha256_hex(s: &str) -> String {
    use sha2::Digest;
    hex::encode(sha2::Sha256::digest(s.as_bytes()))
}

