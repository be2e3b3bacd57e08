// SPDX-License-Identifier: Apache-2.0

//! Syntax tree types for the HLS-C subset.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One input file handed to the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: PathBuf,
    pub text: String,
    pub id: String,
}

impl SourceFile {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        let id = id.into();
        SourceFile {
            path: PathBuf::from(&id),
            text: text.into(),
            id,
        }
    }

    /// Reads a file from disk; the id is the file name.
    pub fn read(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let id = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Ok(SourceFile {
            path: path.to_path_buf(),
            text,
            id,
        })
    }
}

/// 1-based line/column region. `end_col` points one past the last character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        SourceSpan {
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.end_line, self.end_col)
    }

    /// Smallest span covering both.
    pub fn to(&self, other: SourceSpan) -> SourceSpan {
        let (sl, sc) = self.start().min(other.start());
        let (el, ec) = self.end().max(other.end());
        SourceSpan::new(sl, sc, el, ec)
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start() <= other.start() && other.end() <= self.end()
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}-{}:{}",
            self.start_line, self.start_col, self.end_line, self.end_col
        )
    }
}

macro_rules! node_kinds {
    ($($kind:ident),* $(,)?) => {
        /// Kind tag of an [`AstNode`].
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum NodeKind {
            $($kind),*
        }

        impl NodeKind {
            pub const ALL: &'static [NodeKind] = &[$(NodeKind::$kind),*];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $(NodeKind::$kind => stringify!($kind)),*
                }
            }
        }

        impl FromStr for NodeKind {
            type Err = UnknownNodeKind;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $(stringify!($kind) => Ok(NodeKind::$kind),)*
                    _ => Err(UnknownNodeKind(s.to_string())),
                }
            }
        }
    };
}

node_kinds! {
    TranslationUnit,
    Include,
    Pragma,
    FunctionDef,
    ParamList,
    Param,
    TypeName,
    CompoundStmt,
    Declaration,
    Assignment,
    IfStmt,
    ForStmt,
    WhileStmt,
    SwitchStmt,
    CaseClause,
    ReturnStmt,
    ExprStmt,
    CallExpr,
    BinaryExpr,
    UnaryExpr,
    ArraySubscript,
    Identifier,
    Literal,
    Comment,
    JumpStmt,
    ConditionalExpr,
    FieldExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown node kind `{0}`")]
pub struct UnknownNodeKind(pub String);

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl NodeKind {
    /// Kinds that carry control or data semantics and must survive optimization.
    pub const SEMANTIC: &'static [NodeKind] = &[
        NodeKind::FunctionDef,
        NodeKind::IfStmt,
        NodeKind::ForStmt,
        NodeKind::WhileStmt,
        NodeKind::SwitchStmt,
        NodeKind::ReturnStmt,
        NodeKind::Assignment,
        NodeKind::Declaration,
        NodeKind::CallExpr,
    ];

    pub fn is_semantic(&self) -> bool {
        Self::SEMANTIC.contains(self)
    }

    pub fn is_expression(&self) -> bool {
        matches!(
            self,
            NodeKind::Assignment
                | NodeKind::CallExpr
                | NodeKind::BinaryExpr
                | NodeKind::UnaryExpr
                | NodeKind::ArraySubscript
                | NodeKind::Identifier
                | NodeKind::Literal
                | NodeKind::ConditionalExpr
                | NodeKind::FieldExpr
        )
    }
}

/// A syntax tree node.
///
/// Field usage by kind:
///
/// | kind | `name` | `type_text` | children |
/// |---|---|---|---|
/// | `FunctionDef` | function name | return type | `ParamList`, `CompoundStmt` |
/// | `Param` | parameter name | written type | `TypeName`, declarator |
/// | `Declaration` | variable name | written type | `TypeName`, declarator, initializer? |
/// | `IfStmt` | | | condition, then, else? |
/// | `ForStmt` | | | init, condition, update, body |
/// | `WhileStmt` | | | condition, body |
/// | `SwitchStmt` | | | selector, `CaseClause`* |
/// | `CaseClause` | `case` / `default` | | label (case only), statements* |
/// | `Assignment`, `BinaryExpr` | operator | | lhs, rhs |
/// | `UnaryExpr` | operator (`post++`/`post--` for postfix) | | operand |
/// | `CallExpr` | | | callee, args* |
/// | `FieldExpr` | `.` or `->` | | object, `Identifier` |
/// | `JumpStmt` | `break` / `continue` | | |
/// | `Identifier`, `Literal`, `Comment` | text | | |
/// | `Pragma`, `Include` | directive body | | |
///
/// A declarator is an `Identifier` or an `ArraySubscript` chain over one.
/// Missing `for` header parts are represented by an empty `ExprStmt`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AstNode {
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub type_text: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<AstNode>,
    pub span: SourceSpan,
    pub node_id: u32,
}

impl AstNode {
    pub fn new(kind: NodeKind, span: SourceSpan) -> Self {
        AstNode {
            kind,
            name: None,
            type_text: None,
            children: Vec::new(),
            span,
            node_id: 0,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_type(mut self, type_text: impl Into<String>) -> Self {
        self.type_text = Some(type_text.into());
        self
    }

    pub fn with_children(mut self, children: Vec<AstNode>) -> Self {
        self.children = children;
        self
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("")
    }

    pub fn type_text(&self) -> &str {
        self.type_text.as_deref().unwrap_or("")
    }

    pub fn child(&self, idx: usize) -> Option<&AstNode> {
        self.children.get(idx)
    }

    pub fn first_child_of(&self, kind: NodeKind) -> Option<&AstNode> {
        self.children.iter().find(|c| c.kind == kind)
    }

    /// Pre-order iterator over this node and all descendants.
    pub fn iter(&self) -> PreOrder<'_> {
        PreOrder { stack: vec![self] }
    }

    pub fn node_count(&self) -> usize {
        self.iter().count()
    }

    /// Assigns node ids in pre-order starting at `start`; returns the next free id.
    pub fn renumber(&mut self, start: u32) -> u32 {
        let mut next = start;
        fn walk(node: &mut AstNode, next: &mut u32) {
            node.node_id = *next;
            *next += 1;
            for c in &mut node.children {
                walk(c, next);
            }
        }
        walk(self, &mut next);
        next
    }

    /// Equality over kinds, names, type texts and child order; ignores spans and ids.
    pub fn structurally_eq(&self, other: &AstNode) -> bool {
        self.kind == other.kind
            && self.name == other.name
            && self.type_text == other.type_text
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|(a, b)| a.structurally_eq(b))
    }

    pub fn find_by_id(&self, id: u32) -> Option<&AstNode> {
        self.iter().find(|n| n.node_id == id)
    }
}

pub struct PreOrder<'a> {
    stack: Vec<&'a AstNode>,
}

impl<'a> Iterator for PreOrder<'a> {
    type Item = &'a AstNode;

    fn next(&mut self) -> Option<Self::Item> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}
