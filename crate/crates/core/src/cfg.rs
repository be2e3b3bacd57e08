// SPDX-License-Identifier: Apache-2.0

//! Control-flow extraction over optimized function trees.
//!
//! Every node is matched against a fixed handler table; the graph is the
//! union of the handler outputs. There are no sequential fall-through edges.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::hlsc::{AstNode, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Then,
    Else,
    LoopBody,
    LoopBack,
    Case,
    FuncBody,
    ReturnFlow,
    Expr,
    Decl,
    Assign,
    Call,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Then => "then",
            EdgeKind::Else => "else",
            EdgeKind::LoopBody => "loop_body",
            EdgeKind::LoopBack => "loop_back",
            EdgeKind::Case => "case",
            EdgeKind::FuncBody => "func_body",
            EdgeKind::ReturnFlow => "return_flow",
            EdgeKind::Expr => "expr",
            EdgeKind::Decl => "decl",
            EdgeKind::Assign => "assign",
            EdgeKind::Call => "call",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CfgEdge {
    pub from: u32,
    pub to: u32,
    pub kind: EdgeKind,
}

impl CfgEdge {
    fn new(from: &AstNode, to: &AstNode, kind: EdgeKind) -> Self {
        CfgEdge {
            from: from.node_id,
            to: to.node_id,
            kind,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cfg {
    pub nodes: BTreeSet<u32>,
    pub edges: Vec<CfgEdge>,
}

/// Edges contributed by a single node.
pub fn handlers(n: &AstNode) -> Vec<CfgEdge> {
    let mut edges = Vec::new();
    let mut push = |to: Option<&AstNode>, kind| {
        if let Some(to) = to {
            edges.push(CfgEdge::new(n, to, kind));
        }
    };
    match n.kind {
        NodeKind::IfStmt => {
            push(n.child(1), EdgeKind::Then);
            push(n.child(2), EdgeKind::Else);
        }
        NodeKind::ForStmt | NodeKind::WhileStmt => {
            if let Some(body) = n.children.last() {
                edges.push(CfgEdge::new(n, body, EdgeKind::LoopBody));
                edges.push(CfgEdge::new(body, n, EdgeKind::LoopBack));
            }
        }
        NodeKind::SwitchStmt => {
            for clause in n.children.iter().filter(|c| c.kind == NodeKind::CaseClause) {
                push(Some(clause), EdgeKind::Case);
            }
        }
        NodeKind::FunctionDef => push(n.first_child_of(NodeKind::CompoundStmt), EdgeKind::FuncBody),
        NodeKind::ReturnStmt => push(n.child(0), EdgeKind::ReturnFlow),
        NodeKind::ExprStmt => push(n.child(0), EdgeKind::Expr),
        NodeKind::Declaration => push(n.child(2), EdgeKind::Decl),
        NodeKind::Assignment => push(n.child(1), EdgeKind::Assign),
        NodeKind::CallExpr => push(n.child(0), EdgeKind::Call),
        _ => {}
    }
    edges
}

/// Union of [`handlers`] over every node, in pre-order.
pub fn analyze_control_flow(tree: &AstNode) -> Cfg {
    let mut cfg = Cfg::default();
    let mut seen = HashSet::new();
    for node in tree.iter() {
        cfg.nodes.insert(node.node_id);
        for edge in handlers(node) {
            if seen.insert(edge) {
                cfg.edges.push(edge);
            }
        }
    }
    cfg
}

impl Cfg {
    pub fn count(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    /// Graphviz rendering; node labels come from `tree`.
    pub fn to_dot(&self, tree: &AstNode) -> String {
        let mut out = String::from("digraph cfg {\n");
        for id in &self.nodes {
            let label = match tree.find_by_id(*id) {
                Some(n) if n.name.is_some() => format!("{} {}", n.kind, n.name()),
                Some(n) => n.kind.to_string(),
                None => format!("#{id}"),
            };
            let _ = writeln!(out, "  n{id} [label=\"{}\"];", dot_escape(&label));
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.kind.as_str());
        }
        out.push_str("}\n");
        out
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
