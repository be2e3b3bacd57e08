// SPDX-License-Identifier: Apache-2.0

use astkit::hlsc::{find_function, parse_text, DEFAULT_TOP};
use astkit::{optimize, serialize, OptimizeConfig};

const ROM_SRC: &str = include_str!("../fixtures/hlsc/rom_lookup.cpp");
const ROM_AST: &str = include_str!("../fixtures/golden/rom_lookup.ast");

#[test]
fn rom_example_serializes_to_golden_text() {
    let tu = parse_text(ROM_SRC).unwrap();
    let top = find_function(&tu, DEFAULT_TOP).unwrap();
    let opt = optimize(top, &OptimizeConfig::default()).unwrap();
    let ser = serialize(&opt).unwrap();
    assert_eq!(ser.text, ROM_AST.trim_end());
    assert_eq!(ser.line_count, 6);
}
