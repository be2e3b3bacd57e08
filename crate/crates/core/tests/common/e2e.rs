// SPDX-License-Identifier: Apache-2.0

//! Offline end-to-end scenario: five Verilog sources are ported by a mock
//! LLM, synthesized by a mock tool (one canned failure), filtered for
//! leakage, then scored with a mock constrained simulator.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use astkit::config::GlobalConfig;
use astkit::dataset::{
    build_porting_prompt, load_eval_instructions, parse_porting_response, read_records, run_dataset_build,
    summary_path_for, BuildSummary, DatasetBuild,
};
use astkit::eval::{aggregate_report, classify_tiers, evaluate_attempt, Attempt, Estimator, ProblemSpec};
use astkit::templates::TemplateStore;
use astkit::toolbridge::{
    message_key, mock_rtl, simulation_key, synthesis_key, Adapter, AdapterKind, ChatMessage, MockOutcome,
    ToolAdapter,
};

use super::fixtures;

pub const SOURCES: [&str; 5] = ["adder", "counter", "divider", "mux4", "rom"];
pub const SYNTH_FAILURE: &str = "divider";

pub struct E2eRun {
    pub summary: BuildSummary,
    pub dataset: Vec<u8>,
    pub summary_json: Vec<u8>,
    pub report_json: String,
    pub report_table: String,
    pub requests: Vec<Vec<ChatMessage>>,
    pub llm_calls: usize,
    pub synth_calls: usize,
    pub out: PathBuf,
}

fn e2e_dir() -> PathBuf {
    fixtures().join("e2e")
}

fn write_json(path: &Path, v: &MockOutcome) {
    std::fs::write(path, serde_json::to_string(v).unwrap()).unwrap();
}

/// Simulation verdicts per source: (constraints, passed).
fn sim_verdicts() -> BTreeMap<&'static str, (u32, u32)> {
    [("adder", (4, 4)), ("counter", (3, 2)), ("mux4", (4, 4)), ("rom", (2, 2))].into()
}

/// Writes hash-keyed mock fixtures for all three adapters under `root`.
pub fn write_fixtures(root: &Path) {
    let (llm, synth, sim) = (root.join("llm"), root.join("synth"), root.join("sim"));
    for d in [&llm, &synth, &sim] {
        std::fs::create_dir_all(d).unwrap();
    }
    let templates = TemplateStore::bundled();
    for name in SOURCES {
        let verilog = std::fs::read_to_string(e2e_dir().join("verilog").join(format!("{name}.v"))).unwrap();
        let response = std::fs::read_to_string(e2e_dir().join("responses").join(format!("{name}.txt"))).unwrap();
        let msgs = build_porting_prompt(&verilog, &templates).unwrap();
        std::fs::write(llm.join(format!("{}.txt", message_key(&msgs))), &response).unwrap();

        let code = parse_porting_response(&response).unwrap().hls_code;
        if name == SYNTH_FAILURE {
            write_json(
                &synth.join(format!("{}.json", synthesis_key(&code, "top_module"))),
                &MockOutcome {
                    exit_code: 0,
                    log: "INFO: [HLS 200-10] Analyzing design file\nERROR: [HLS 214-194] unsupported divider width\n"
                        .into(),
                    delay_ms: 0,
                },
            );
        }
        if let Some((total, passed)) = sim_verdicts().get(name) {
            let tb = std::fs::read_to_string(e2e_dir().join("testbenches").join(format!("{name}.v"))).unwrap();
            let log: String = (1..=*total)
                .map(|i| format!("CONSTRAINT {i} {}\n", if i <= *passed { "PASS" } else { "FAIL" }))
                .collect();
            write_json(
                &sim.join(format!("{}.json", simulation_key(&mock_rtl(&code, "top_module"), &tb))),
                &MockOutcome {
                    exit_code: 0,
                    log: format!("VCD info: dumpfile tb.vcd opened\n{log}$finish called\n"),
                    delay_ms: 0,
                },
            );
        }
    }
}

/// Path of the mock LLM reply for one source.
pub fn llm_fixture_path(root: &Path, name: &str) -> PathBuf {
    let verilog = std::fs::read_to_string(e2e_dir().join("verilog").join(format!("{name}.v"))).unwrap();
    let msgs = build_porting_prompt(&verilog, &TemplateStore::bundled()).unwrap();
    root.join("llm").join(format!("{}.txt", message_key(&msgs)))
}

pub fn config(root: &Path, seed: u64) -> GlobalConfig {
    let mut cfg = GlobalConfig {
        workers: 3,
        seed,
        ..GlobalConfig::default()
    };
    for (name, kind) in [("llm", AdapterKind::Llm), ("synth", AdapterKind::Synthesis), ("sim", AdapterKind::Simulation)] {
        let mut a = ToolAdapter::mock(name, kind);
        a.fixtures_dir = Some(root.join(name));
        a.workdir_root = Some(root.join("work"));
        a.parallelism = 2;
        cfg.adapters.push(a);
    }
    cfg.validate().unwrap();
    cfg
}

/// Runs the scenario in `root`; a second call on the same root resumes.
pub fn run(root: &Path, seed: u64) -> E2eRun {
    if !root.join("llm").exists() {
        write_fixtures(root);
    }
    let cfg = config(root, seed);
    let adapter = |kind| Adapter::new(cfg.adapter(kind, None).unwrap().clone(), cfg.seed).unwrap();
    let (llm, synth, sim) = (adapter(AdapterKind::Llm), adapter(AdapterKind::Synthesis), adapter(AdapterKind::Simulation));
    let eval_instructions = load_eval_instructions(&e2e_dir().join("eval_instructions.jsonl")).unwrap();
    let out = root.join("dataset.jsonl");
    let build = DatasetBuild {
        config: &cfg,
        llm: &llm,
        synth: &synth,
        eval_instructions,
    };
    let summary = run_dataset_build(&e2e_dir().join("verilog"), &out, &build).unwrap();
    let llm_calls = llm.calls();
    let synth_calls = synth.calls();

    // Score each ported design once against its testbench.
    let records = read_records(&out).unwrap();
    let mut outcomes = Vec::new();
    let mut problems = Vec::new();
    for r in &records {
        let stem = r.record.source_id.trim_end_matches(".v");
        let tb = std::fs::read_to_string(e2e_dir().join("testbenches").join(format!("{stem}.v"))).unwrap();
        let verilog = std::fs::read_to_string(e2e_dir().join("verilog").join(&r.record.source_id)).unwrap();
        problems.push(ProblemSpec {
            problem_id: stem.to_string(),
            reference_verilog_chars: verilog.chars().count() as u64,
        });
        let attempt = Attempt {
            problem_id: stem,
            attempt_idx: 1,
            hls_code: &r.record.code,
            top: &cfg.top,
            testbench: &tb,
        };
        outcomes.push(evaluate_attempt(&attempt, &synth, &sim, false).unwrap());
    }
    let metas = classify_tiers(&problems, None).unwrap();
    let report = aggregate_report(&outcomes, &metas, &[], &[1], Estimator::FirstK).unwrap();

    E2eRun {
        summary,
        dataset: std::fs::read(&out).unwrap(),
        summary_json: std::fs::read(summary_path_for(&out)).unwrap(),
        report_json: serde_json::to_string_pretty(&report).unwrap(),
        report_table: report.render_table(),
        requests: llm.recorded_requests(),
        llm_calls,
        synth_calls,
        out,
    }
}
