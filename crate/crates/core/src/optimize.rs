// SPDX-License-Identifier: Apache-2.0

//! Tree simplification: drop redundant nodes, collapse single-child wrappers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hlsc::{AstNode, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptimizeError {
    #[error("invalid optimize config: {kind} carries control/data semantics and cannot be {role}")]
    InvalidConfig { kind: NodeKind, role: &'static str },
}

/// Which node kinds get removed and which get collapsed into their only child.
///
/// A `CompoundStmt` is only collapsed when its parent is also a
/// `CompoundStmt`; other collapsible kinds collapse wherever they have
/// exactly one child.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizeConfig {
    pub redundant_kinds: BTreeSet<NodeKind>,
    pub collapsible_kinds: BTreeSet<NodeKind>,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            redundant_kinds: [NodeKind::Comment, NodeKind::Include].into(),
            collapsible_kinds: [NodeKind::ExprStmt, NodeKind::CompoundStmt].into(),
        }
    }
}

impl OptimizeConfig {
    pub fn validate(&self) -> Result<(), OptimizeError> {
        for (set, role) in [
            (&self.redundant_kinds, "redundant"),
            (&self.collapsible_kinds, "collapsible"),
        ] {
            if let Some(kind) = set.iter().find(|k| k.is_semantic()) {
                return Err(OptimizeError::InvalidConfig { kind: *kind, role });
            }
        }
        Ok(())
    }

    fn collapses(&self, node: &AstNode, parent: Option<NodeKind>) -> bool {
        if node.children.len() != 1 || !self.collapsible_kinds.contains(&node.kind) {
            return false;
        }
        node.kind != NodeKind::CompoundStmt || parent == Some(NodeKind::CompoundStmt)
    }
}

/// Returns an optimized copy of `tree`. Surviving nodes keep their ids.
///
/// Redundant nodes are spliced out (their children, if any, take their
/// place). Traversal is post-order, so collapses cascade, and a node promoted
/// into a new parent is re-checked against that parent.
pub fn optimize(tree: &AstNode, config: &OptimizeConfig) -> Result<AstNode, OptimizeError> {
    config.validate()?;
    let mut out = rewrite(tree, None, config);
    if out.len() == 1 {
        return Ok(out.pop().unwrap());
    }
    // Only reachable when the root itself is redundant; keep it as a shell.
    let mut shell = AstNode::new(tree.kind, tree.span).with_children(out);
    shell.name = tree.name.clone();
    shell.type_text = tree.type_text.clone();
    shell.node_id = tree.node_id;
    Ok(shell)
}

fn rewrite(node: &AstNode, parent: Option<NodeKind>, config: &OptimizeConfig) -> Vec<AstNode> {
    if config.redundant_kinds.contains(&node.kind) {
        return node
            .children
            .iter()
            .flat_map(|c| rewrite(c, parent, config))
            .collect();
    }
    let children = node
        .children
        .iter()
        .flat_map(|c| rewrite(c, Some(node.kind), config))
        .collect();
    let mut current = AstNode {
        kind: node.kind,
        name: node.name.clone(),
        type_text: node.type_text.clone(),
        children,
        span: node.span,
        node_id: node.node_id,
    };
    while config.collapses(&current, parent) {
        current = current.children.pop().unwrap();
    }
    vec![current]
}
