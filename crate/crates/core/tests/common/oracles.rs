// SPDX-License-Identifier: Apache-2.0

//! Straightforward reference implementations to check the library against.

use std::collections::{BTreeMap, HashSet};

use astkit::eval::AttemptOutcome;
use astkit::hlsc::{AstNode, NodeKind};
use num_rational::Ratio;

/// (from, to, edge label) triples.
pub type EdgeSet = HashSet<(u32, u32, &'static str)>;

/// Walks every node and emits the edges its kind calls for, written
/// independently of the library's handler code.
pub fn cfg_edges(tree: &AstNode) -> EdgeSet {
    let mut out = EdgeSet::new();
    let mut stack = vec![tree];
    while let Some(n) = stack.pop() {
        let c = &n.children;
        let id = n.node_id;
        let mut add = |to: u32, label| {
            out.insert((id, to, label));
        };
        match n.kind {
            NodeKind::IfStmt => {
                if c.len() >= 2 {
                    add(c[1].node_id, "then");
                }
                if c.len() >= 3 {
                    add(c[2].node_id, "else");
                }
            }
            NodeKind::ForStmt | NodeKind::WhileStmt => {
                if !c.is_empty() {
                    let body = c[c.len() - 1].node_id;
                    add(body, "loop_body");
                    out.insert((body, id, "loop_back"));
                }
            }
            NodeKind::SwitchStmt => {
                for ch in c {
                    if ch.kind == NodeKind::CaseClause {
                        add(ch.node_id, "case");
                    }
                }
            }
            NodeKind::FunctionDef => {
                for ch in c {
                    if ch.kind == NodeKind::CompoundStmt {
                        add(ch.node_id, "func_body");
                        break;
                    }
                }
            }
            NodeKind::ReturnStmt if !c.is_empty() => add(c[0].node_id, "return_flow"),
            NodeKind::ExprStmt if !c.is_empty() => add(c[0].node_id, "expr"),
            NodeKind::Declaration if c.len() >= 3 => add(c[2].node_id, "decl"),
            NodeKind::Assignment if c.len() >= 2 => add(c[1].node_id, "assign"),
            NodeKind::CallExpr if !c.is_empty() => add(c[0].node_id, "call"),
            _ => {}
        }
        stack.extend(c.iter());
    }
    out
}

/// Classic O(nm) dynamic-programming LCS.
pub fn lcs_dp<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    for x in a {
        let mut cur = vec![0usize; b.len() + 1];
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        prev = cur;
    }
    prev[b.len()]
}

/// ROUGE-L F1 from precision and recall, as an exact ratio.
pub fn rouge_f1(cand: &[String], reference: &[String]) -> Ratio<i128> {
    let l = lcs_dp(cand, reference) as i128;
    if l == 0 {
        return Ratio::from_integer(0);
    }
    let p = Ratio::new(l, cand.len() as i128);
    let r = Ratio::new(l, reference.len() as i128);
    Ratio::from_integer(2) * p * r / (r + p)
}

/// Success matrix `[problem][attempt]` scanned column by column.
pub fn first_k_rate(matrix: &[Vec<bool>], k: usize) -> Ratio<u128> {
    let mut hits = 0u128;
    for row in matrix {
        hits += row.iter().take(k).any(|&ok| ok) as u128;
    }
    Ratio::new(hits, matrix.len() as u128)
}

/// Outcomes for a synth/functional matrix pair, problem ids `p000`...
pub fn outcomes_from(synth: &[Vec<bool>], functional: &[Vec<bool>]) -> Vec<AttemptOutcome> {
    let mut out = Vec::new();
    for (i, (s_row, f_row)) in synth.iter().zip(functional).enumerate() {
        for (j, (&s, &f)) in s_row.iter().zip(f_row).enumerate() {
            let ok = s && f;
            out.push(AttemptOutcome::new(format!("p{i:03}"), j as u32 + 1, s, 2, if ok { 2 } else { 1 }));
        }
    }
    out
}

/// Kinds and ids of the nodes a config may never drop.
pub fn semantic_nodes(tree: &AstNode) -> BTreeMap<u32, NodeKind> {
    tree.iter()
        .filter(|n| n.kind.is_semantic())
        .map(|n| (n.node_id, n.kind))
        .collect()
}
