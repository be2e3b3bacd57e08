// SPDX-License-Identifier: Apache-2.0

//! HLS-C toolkit: parsing, AST optimization and control-flow extraction,
//! serialized-AST training records, Verilog-to-HLS-C dataset assembly with a
//! ROUGE-L leakage filter, and synth@k / pass@k evaluation.

pub mod cfg;
pub mod config;
pub mod dataset;
pub mod hlsc;
pub mod eval;
pub mod optimize;
pub mod serialize;
pub mod templates;
pub mod toolbridge;

/// Toolkit version, as published in the crate manifest.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use cfg::{analyze_control_flow, handlers, Cfg, CfgEdge, EdgeKind};
pub use hlsc::{find_function, parse, pretty_print, AstNode, NodeKind, SourceFile, SourceSpan};
pub use optimize::{optimize, OptimizeConfig};
pub use serialize::{assemble_training_record, serialize, SerializedAst, TrainingRecord};
