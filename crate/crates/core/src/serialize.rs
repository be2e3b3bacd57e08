// SPDX-License-Identifier: Apache-2.0

//! Line-based AST rendering used as model context, and training records.
//!
//! Tag grammar, emitted in pre-order over statements:
//!
//! ```text
//! FuncName: <name>, Params: <type>, <type>, ...
//! VarTyp: <type>
//! Asgnmnt: <lhs> <op> <rhs>
//! IfStmt: Contn: (<cond>) / Then: ... / Else: ...
//! ForStmt: Contn: (<init>; <cond>; <update>) / Body: ...
//! WhileStmt: Contn: (<cond>) / Body: ...
//! SwitchStmt: Contn: (<selector>) / Case <label>: ... / Default: ...
//! RetStmt: <expr>
//! CallStmt: <call>
//! JmpStmt: break|continue
//! Expr: <other expression statement>
//! ```
//!
//! Types drop storage qualifiers and reference markers. Pragmas, includes
//! and comments are not emitted.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hlsc::{expr_text, for_header, tokenize, AstNode, NodeKind, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("serialization requires a FunctionDef, got {0}")]
    NotAFunction(NodeKind),

    #[error("training record section `{0}` is empty")]
    EmptySection(&'static str),
}

/// Serialized AST text: LF-separated tag lines, no trailing newline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub struct SerializedAst {
    pub text: String,
    pub line_count: usize,
}

impl From<String> for SerializedAst {
    fn from(text: String) -> Self {
        let line_count = if text.is_empty() { 0 } else { text.lines().count() };
        SerializedAst { text, line_count }
    }
}

impl From<SerializedAst> for String {
    fn from(ast: SerializedAst) -> Self {
        ast.text
    }
}

impl fmt::Display for SerializedAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SerializeOptions {
    /// Indent nested blocks by two spaces. Off for training data.
    pub indent: bool,
}

pub fn serialize(func: &AstNode) -> Result<SerializedAst, SerializeError> {
    serialize_with(func, SerializeOptions::default())
}

pub fn serialize_with(func: &AstNode, opts: SerializeOptions) -> Result<SerializedAst, SerializeError> {
    if func.kind != NodeKind::FunctionDef {
        return Err(SerializeError::NotAFunction(func.kind));
    }
    let mut w = Writer { lines: Vec::new(), opts };
    let params: Vec<String> = func
        .first_child_of(NodeKind::ParamList)
        .map(|pl| pl.children.iter().map(param_type).collect())
        .unwrap_or_default();
    w.line(0, format!("FuncName: {}, Params:", func.name()), &params.join(", "));
    if let Some(body) = func.first_child_of(NodeKind::CompoundStmt) {
        w.stmt(body, 0);
    }
    Ok(SerializedAst::from(w.lines.join("\n")))
}

/// Drops `static`/`const`/... qualifiers and trailing `&` from a written type.
pub fn strip_type(type_text: &str) -> String {
    let Ok(tokens) = tokenize(type_text) else {
        return type_text.trim().to_string();
    };
    let mut depth = 0i32;
    let mut kept = Vec::new();
    for tok in &tokens {
        match tok.text.as_str() {
            "<" => depth += 1,
            ">" => depth -= 1,
            ">>" => depth -= 2,
            _ => {}
        }
        let qualifier = tok.kind == TokenKind::Ident
            && depth == 0
            && matches!(
                tok.text.as_str(),
                "static" | "const" | "volatile" | "inline" | "register" | "constexpr"
            );
        if !qualifier {
            kept.push(tok);
        }
    }
    while kept.last().is_some_and(|t| t.is_op("&") || t.is_op("&&")) {
        kept.pop();
    }
    crate::hlsc::join_tokens(kept)
}

fn param_type(param: &AstNode) -> String {
    let mut ty = strip_type(param.type_text());
    let mut dims = Vec::new();
    let mut decl = param.child(1);
    while let Some(d) = decl.filter(|d| d.kind == NodeKind::ArraySubscript) {
        dims.push(d.child(1).map(expr_text).unwrap_or_default());
        decl = d.child(0);
    }
    for dim in dims.iter().rev() {
        ty.push_str(&format!("[{dim}]"));
    }
    ty
}

struct Writer {
    lines: Vec<String>,
    opts: SerializeOptions,
}

impl Writer {
    /// Pushes `tag` followed by `value`, with no trailing space when `value` is empty.
    fn line(&mut self, depth: usize, tag: String, value: &str) {
        let mut s = if self.opts.indent {
            "  ".repeat(depth)
        } else {
            String::new()
        };
        s.push_str(&tag);
        if !value.is_empty() {
            s.push(' ');
            s.push_str(value);
        }
        self.lines.push(s);
    }

    fn stmt(&mut self, node: &AstNode, depth: usize) {
        match node.kind {
            NodeKind::CompoundStmt => {
                for c in &node.children {
                    self.stmt(c, depth);
                }
            }
            NodeKind::ExprStmt => {
                if let Some(inner) = node.child(0) {
                    self.stmt(inner, depth);
                }
            }
            NodeKind::Declaration => self.line(depth, "VarTyp:".into(), &strip_type(node.type_text())),
            NodeKind::Assignment => self.line(depth, "Asgnmnt:".into(), &expr_text(node)),
            NodeKind::CallExpr => self.line(depth, "CallStmt:".into(), &expr_text(node)),
            NodeKind::ReturnStmt => {
                let value = node.child(0).map(expr_text).unwrap_or_default();
                self.line(depth, "RetStmt:".into(), &value);
            }
            NodeKind::JumpStmt => self.line(depth, "JmpStmt:".into(), node.name()),
            NodeKind::IfStmt => {
                let cond = node.child(0).map(expr_text).unwrap_or_default();
                self.line(depth, "IfStmt: Contn:".into(), &format!("({cond})"));
                self.line(depth, "Then:".into(), "");
                if let Some(then) = node.child(1) {
                    self.stmt(then, depth + 1);
                }
                if let Some(other) = node.child(2) {
                    self.line(depth, "Else:".into(), "");
                    self.stmt(other, depth + 1);
                }
            }
            NodeKind::ForStmt => {
                self.line(depth, "ForStmt: Contn:".into(), &for_header(node));
                self.line(depth, "Body:".into(), "");
                if let Some(body) = node.children.last() {
                    self.stmt(body, depth + 1);
                }
            }
            NodeKind::WhileStmt => {
                let cond = node.child(0).map(expr_text).unwrap_or_default();
                self.line(depth, "WhileStmt: Contn:".into(), &format!("({cond})"));
                self.line(depth, "Body:".into(), "");
                if let Some(body) = node.children.last() {
                    self.stmt(body, depth + 1);
                }
            }
            NodeKind::SwitchStmt => {
                let sel = node.child(0).map(expr_text).unwrap_or_default();
                self.line(depth, "SwitchStmt: Contn:".into(), &format!("({sel})"));
                for clause in node.children.iter().skip(1) {
                    self.stmt(clause, depth + 1);
                }
            }
            NodeKind::CaseClause => {
                let body = if node.name() == "default" {
                    self.line(depth, "Default:".into(), "");
                    &node.children[..]
                } else {
                    let label = node.child(0).map(expr_text).unwrap_or_default();
                    self.line(depth, format!("Case {label}:"), "");
                    node.children.get(1..).unwrap_or(&[])
                };
                for s in body {
                    self.stmt(s, depth + 1);
                }
            }
            NodeKind::Pragma | NodeKind::Include | NodeKind::Comment => {}
            kind if kind.is_expression() => self.line(depth, "Expr:".into(), &expr_text(node)),
            _ => {}
        }
    }
}

/// One fine-tuning sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingRecord {
    pub id: String,
    pub source_id: String,
    pub instruction: String,
    pub ast: SerializedAst,
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cfg_dot: Option<String>,
}

pub fn assemble_training_record(
    instruction: &str,
    ast: SerializedAst,
    code: &str,
    id: impl Into<String>,
    source_id: impl Into<String>,
) -> Result<TrainingRecord, SerializeError> {
    if instruction.trim().is_empty() {
        return Err(SerializeError::EmptySection("instruction"));
    }
    if ast.text.trim().is_empty() {
        return Err(SerializeError::EmptySection("ast"));
    }
    if code.trim().is_empty() {
        return Err(SerializeError::EmptySection("code"));
    }
    Ok(TrainingRecord {
        id: id.into(),
        source_id: source_id.into(),
        instruction: instruction.trim().to_string(),
        ast,
        code: code.to_string(),
        cfg_dot: None,
    })
}

impl TrainingRecord {
    /// Model input: instruction, then serialized AST (then CFG if attached).
    pub fn render_input(&self) -> String {
        let mut s = format!("### Instruction\n{}\n\n### AST\n{}\n", self.instruction, self.ast.text);
        if let Some(dot) = &self.cfg_dot {
            s.push_str("\n### CFG\n");
            s.push_str(dot.trim_end());
            s.push('\n');
        }
        s
    }

    /// Input followed by the code target.
    pub fn render(&self) -> String {
        format!("{}\n### Code\n{}\n", self.render_input(), self.code.trim_end())
    }
}
