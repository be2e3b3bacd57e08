// SPDX-License-Identifier: Apache-2.0

//! Canonical source rendering of syntax trees.

use super::ast::{AstNode, NodeKind};
use super::parser::{binary_precedence, is_assign_op};

const INDENT: &str = "    ";

/// Renders a tree back to HLS-C. The output reparses to a structurally equal tree.
pub fn pretty_print(node: &AstNode) -> String {
    let mut out = String::new();
    match node.kind {
        NodeKind::TranslationUnit => {
            for child in &node.children {
                print_item(child, 0, &mut out);
            }
        }
        kind if kind.is_expression() => out.push_str(&expr_text(node)),
        _ => print_item(node, 0, &mut out),
    }
    out
}

fn line(out: &mut String, depth: usize, text: &str) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
    out.push_str(text);
    out.push('\n');
}

fn print_item(node: &AstNode, depth: usize, out: &mut String) {
    match node.kind {
        NodeKind::Comment => line(out, depth, node.name()),
        NodeKind::Include => line(out, depth, &format!("#include {}", node.name())),
        NodeKind::Pragma => {
            let text = if node.name().is_empty() {
                "#pragma".to_string()
            } else {
                format!("#pragma {}", node.name())
            };
            line(out, depth, &text);
        }
        NodeKind::FunctionDef => {
            let params = node
                .first_child_of(NodeKind::ParamList)
                .map(|p| {
                    p.children
                        .iter()
                        .map(param_text)
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .unwrap_or_default();
            let header = format!("{} {}({})", node.type_text(), node.name(), params);
            match node.first_child_of(NodeKind::CompoundStmt) {
                Some(body) => print_block_after(&header, body, depth, out),
                None => line(out, depth, &format!("{header} {{}}")),
            }
        }
        _ => print_stmt(node, depth, out),
    }
}

fn param_text(param: &AstNode) -> String {
    let declarator = param.child(1).map(expr_text).unwrap_or_else(|| param.name().to_string());
    format!("{} {}", param.type_text(), declarator)
}

/// `header {` ... `}`, or `header {}` for an empty block.
fn print_block_after(header: &str, block: &AstNode, depth: usize, out: &mut String) {
    if block.children.is_empty() {
        line(out, depth, &format!("{header} {{}}"));
        return;
    }
    line(out, depth, &format!("{header} {{"));
    for child in &block.children {
        print_item(child, depth + 1, out);
    }
    line(out, depth, "}");
}

/// Prints `header` followed by a statement body, braced or indented.
fn print_body(header: &str, body: &AstNode, depth: usize, out: &mut String) {
    if body.kind == NodeKind::CompoundStmt {
        print_block_after(header, body, depth, out);
    } else {
        line(out, depth, header);
        print_item(body, depth + 1, out);
    }
}

fn declaration_text(decl: &AstNode) -> String {
    let declarator = decl.child(1).map(expr_text).unwrap_or_else(|| decl.name().to_string());
    match decl.child(2) {
        Some(init) => format!("{} {} = {}", decl.type_text(), declarator, expr_text(init)),
        None => format!("{} {}", decl.type_text(), declarator),
    }
}

/// Text of a `for` header slot (declaration, wrapped expression, or bare expression).
fn header_part(node: &AstNode) -> String {
    match node.kind {
        NodeKind::Declaration => declaration_text(node),
        NodeKind::ExprStmt => node.child(0).map(expr_text).unwrap_or_default(),
        _ => expr_text(node),
    }
}

pub(crate) fn for_header(node: &AstNode) -> String {
    let part = |i: usize| node.child(i).map(header_part).unwrap_or_default();
    let mut s = String::from("(");
    s.push_str(&part(0));
    s.push(';');
    for i in [1, 2] {
        let p = part(i);
        if !p.is_empty() {
            s.push(' ');
            s.push_str(&p);
        }
        if i == 1 {
            s.push(';');
        }
    }
    s.push(')');
    s
}

fn print_stmt(node: &AstNode, depth: usize, out: &mut String) {
    match node.kind {
        NodeKind::CompoundStmt => {
            if node.children.is_empty() {
                line(out, depth, "{}");
            } else {
                line(out, depth, "{");
                for c in &node.children {
                    print_item(c, depth + 1, out);
                }
                line(out, depth, "}");
            }
        }
        NodeKind::Declaration => line(out, depth, &format!("{};", declaration_text(node))),
        NodeKind::ExprStmt => match node.child(0) {
            Some(e) => line(out, depth, &format!("{};", expr_text(e))),
            None => line(out, depth, ";"),
        },
        NodeKind::ReturnStmt => match node.child(0) {
            Some(e) => line(out, depth, &format!("return {};", expr_text(e))),
            None => line(out, depth, "return;"),
        },
        NodeKind::JumpStmt => line(out, depth, &format!("{};", node.name())),
        NodeKind::IfStmt => {
            let cond = node.child(0).map(expr_text).unwrap_or_default();
            let header = format!("if ({cond})");
            if let Some(then) = node.child(1) {
                print_body(&header, then, depth, out);
            }
            if let Some(other) = node.child(2) {
                print_body("else", other, depth, out);
            }
        }
        NodeKind::WhileStmt => {
            let cond = node.child(0).map(expr_text).unwrap_or_default();
            if let Some(body) = node.child(1) {
                print_body(&format!("while ({cond})"), body, depth, out);
            }
        }
        NodeKind::ForStmt => {
            if let Some(body) = node.children.last() {
                print_body(&format!("for {}", for_header(node)), body, depth, out);
            }
        }
        NodeKind::SwitchStmt => {
            let sel = node.child(0).map(expr_text).unwrap_or_default();
            line(out, depth, &format!("switch ({sel}) {{"));
            for clause in node.children.iter().skip(1) {
                print_case(clause, depth + 1, out);
            }
            line(out, depth, "}");
        }
        NodeKind::CaseClause => print_case(node, depth, out),
        kind if kind.is_expression() => line(out, depth, &format!("{};", expr_text(node))),
        _ => print_item(node, depth, out),
    }
}

fn print_case(clause: &AstNode, depth: usize, out: &mut String) {
    let body = if clause.name() == "default" {
        line(out, depth, "default:");
        &clause.children[..]
    } else {
        let label = clause.child(0).map(expr_text).unwrap_or_default();
        line(out, depth, &format!("case {label}:"));
        clause.children.get(1..).unwrap_or(&[])
    };
    for stmt in body {
        print_item(stmt, depth + 1, out);
    }
}

// Expression levels: assignment 0, conditional 1, binary 2..=11, unary 12, postfix 13.
const ASSIGN_LEVEL: u8 = 0;
const COND_LEVEL: u8 = 1;
const UNARY_LEVEL: u8 = 12;
const POSTFIX_LEVEL: u8 = 13;

fn level(node: &AstNode) -> u8 {
    match node.kind {
        NodeKind::Assignment => ASSIGN_LEVEL,
        NodeKind::ConditionalExpr => COND_LEVEL,
        NodeKind::BinaryExpr => binary_precedence(node.name()).map(|p| p + 1).unwrap_or(2),
        NodeKind::UnaryExpr if !node.name().starts_with("post") => UNARY_LEVEL,
        _ => POSTFIX_LEVEL,
    }
}

fn wrap(node: &AstNode, min_level: u8) -> String {
    let text = expr_text(node);
    if level(node) < min_level {
        format!("({text})")
    } else {
        text
    }
}

/// Canonical single-line text of an expression.
pub fn expr_text(node: &AstNode) -> String {
    let child = |i: usize| node.child(i);
    match node.kind {
        NodeKind::Identifier | NodeKind::Literal => node.name().to_string(),
        NodeKind::Assignment => {
            let op = if is_assign_op(node.name()) { node.name() } else { "=" };
            format!(
                "{} {} {}",
                child(0).map(|c| wrap(c, COND_LEVEL + 1)).unwrap_or_default(),
                op,
                child(1).map(|c| wrap(c, ASSIGN_LEVEL)).unwrap_or_default()
            )
        }
        NodeKind::ConditionalExpr => format!(
            "{} ? {} : {}",
            child(0).map(|c| wrap(c, COND_LEVEL + 1)).unwrap_or_default(),
            child(1).map(|c| wrap(c, ASSIGN_LEVEL)).unwrap_or_default(),
            child(2).map(|c| wrap(c, COND_LEVEL)).unwrap_or_default()
        ),
        NodeKind::BinaryExpr => {
            let lvl = level(node);
            format!(
                "{} {} {}",
                child(0).map(|c| wrap(c, lvl)).unwrap_or_default(),
                node.name(),
                child(1).map(|c| wrap(c, lvl + 1)).unwrap_or_default()
            )
        }
        NodeKind::UnaryExpr => {
            let op = node.name();
            if let Some(post) = op.strip_prefix("post") {
                format!("{}{}", child(0).map(|c| wrap(c, POSTFIX_LEVEL)).unwrap_or_default(), post)
            } else {
                let operand = child(0)
                    .map(|c| {
                        // `- -x` and `- --x` must not fuse into another operator.
                        if c.kind == NodeKind::UnaryExpr && !c.name().starts_with("post") {
                            format!("({})", expr_text(c))
                        } else {
                            wrap(c, UNARY_LEVEL)
                        }
                    })
                    .unwrap_or_default();
                format!("{op}{operand}")
            }
        }
        NodeKind::ArraySubscript => format!(
            "{}[{}]",
            child(0).map(|c| wrap(c, POSTFIX_LEVEL)).unwrap_or_default(),
            child(1).map(expr_text).unwrap_or_default()
        ),
        NodeKind::CallExpr => {
            let args: Vec<String> = node.children.iter().skip(1).map(|c| wrap(c, ASSIGN_LEVEL)).collect();
            format!(
                "{}({})",
                child(0).map(|c| wrap(c, POSTFIX_LEVEL)).unwrap_or_default(),
                args.join(", ")
            )
        }
        NodeKind::FieldExpr => format!(
            "{}{}{}",
            child(0).map(|c| wrap(c, POSTFIX_LEVEL)).unwrap_or_default(),
            node.name(),
            child(1).map(expr_text).unwrap_or_default()
        ),
        NodeKind::ExprStmt => child(0).map(expr_text).unwrap_or_default(),
        NodeKind::Declaration => declaration_text(node),
        _ => node.name().to_string(),
    }
}
