// SPDX-License-Identifier: Apache-2.0

//! Seeded random syntax trees. Shapes are arbitrary (not necessarily valid
//! HLS-C), which exercises handler positions that real code rarely hits.

use astkit::hlsc::{AstNode, NodeKind, SourceSpan};
use rand::seq::SliceRandom;
use rand::Rng;

/// Kinds with an entry in the control-flow handler table.
pub const HANDLER_KINDS: [NodeKind; 10] = [
    NodeKind::IfStmt,
    NodeKind::ForStmt,
    NodeKind::WhileStmt,
    NodeKind::SwitchStmt,
    NodeKind::FunctionDef,
    NodeKind::ReturnStmt,
    NodeKind::ExprStmt,
    NodeKind::Declaration,
    NodeKind::Assignment,
    NodeKind::CallExpr,
];

/// Kinds that the default optimizer removes or collapses, drawn more often.
const WRAPPER_KINDS: [NodeKind; 4] = [
    NodeKind::Comment,
    NodeKind::Include,
    NodeKind::ExprStmt,
    NodeKind::CompoundStmt,
];

fn random_kind(rng: &mut impl Rng) -> NodeKind {
    match rng.gen_range(0..3) {
        0 => *WRAPPER_KINDS.choose(rng).unwrap(),
        1 => *HANDLER_KINDS.choose(rng).unwrap(),
        _ => *NodeKind::ALL.choose(rng).unwrap(),
    }
}

/// A tree of at most `max_nodes` (>= 10) nodes containing every handler kind
/// at least once, with pre-order ids.
pub fn random_tree(rng: &mut impl Rng, max_nodes: usize) -> AstNode {
    let n = rng.gen_range(HANDLER_KINDS.len()..=max_nodes);
    let mut kinds: Vec<NodeKind> = HANDLER_KINDS.to_vec();
    while kinds.len() < n {
        kinds.push(random_kind(rng));
    }
    kinds.shuffle(rng);
    // Random recursive tree: node i hangs under a uniformly chosen earlier node.
    let mut parent = vec![usize::MAX; n];
    for (i, p) in parent.iter_mut().enumerate().skip(1) {
        *p = rng.gen_range(0..i);
    }
    fn build(i: usize, kinds: &[NodeKind], parent: &[usize], rng: &mut impl Rng) -> AstNode {
        let children = (i + 1..kinds.len())
            .filter(|&j| parent[j] == i)
            .map(|j| build(j, kinds, parent, rng))
            .collect();
        let mut node = AstNode::new(kinds[i], SourceSpan::default()).with_children(children);
        if rng.gen_bool(0.5) {
            node.name = Some(format!("n{i}"));
        }
        node
    }
    let mut root = build(0, &kinds, &parent, rng);
    root.renumber(0);
    root
}
