// SPDX-License-Identifier: Apache-2.0

mod common;

use astkit::hlsc::{find_function, parse, pretty_print, DEFAULT_TOP};
use astkit::{analyze_control_flow, optimize, serialize, OptimizeConfig};

#[test]
fn every_corpus_file_parses_and_serializes() {
    let files = common::corpus();
    assert!(files.len() >= 20, "corpus has {} files", files.len());
    for src in &files {
        let tu = parse(src).unwrap_or_else(|e| panic!("{}: {e}", src.id));
        let top = find_function(&tu, DEFAULT_TOP).unwrap_or_else(|e| panic!("{}: {e}", src.id));
        let opt = optimize(top, &OptimizeConfig::default()).unwrap();
        let ser = serialize(&opt).unwrap();
        assert!(ser.text.starts_with("FuncName: top_module"), "{}", src.id);
        assert!(!analyze_control_flow(&opt).edges.is_empty(), "{}", src.id);
    }
}

#[test]
fn corpus_round_trips_through_printer() {
    for src in common::corpus() {
        let tu = parse(&src).unwrap();
        let printed = pretty_print(&tu);
        let again = astkit::hlsc::parse_text(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", src.id));
        assert!(tu.structurally_eq(&again), "{}\n{printed}", src.id);
        assert_eq!(pretty_print(&again), printed, "{}", src.id);
    }
}
