// SPDX-License-Identifier: Apache-2.0

//! HLS-C front end: tokenizer, recursive-descent parser, tree printer and
//! top-function lookup.
//!
//! The accepted subset covers functions, value/reference parameters,
//! `static`/`const` declarations with array dimensions and brace
//! initializers, assignments, `if`/`else`, `for`, `while`, `switch`,
//! `return`, `break`/`continue`, calls (including method calls), unary,
//! binary and conditional expressions, array subscripts, `#pragma` and
//! `#include` directives and comments. Anything else is reported as
//! [`ParseError::UnsupportedConstruct`].

mod ast;
mod error;
mod lexer;
mod parser;
mod printer;

pub use ast::{AstNode, NodeKind, PreOrder, SourceFile, SourceSpan, UnknownNodeKind};
pub use error::{LookupError, ParseError};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse_text;
pub use printer::{expr_text, pretty_print};

pub(crate) use parser::join_tokens;
pub(crate) use printer::for_header;

/// Name of the synthesis entry function used when none is given.
pub const DEFAULT_TOP: &str = "top_module";

pub fn parse(src: &SourceFile) -> Result<AstNode, ParseError> {
    parse_text(&src.text)
}

/// Returns the unique `FunctionDef` named `name` directly under `tree`.
pub fn find_function<'a>(tree: &'a AstNode, name: &str) -> Result<&'a AstNode, LookupError> {
    if tree.kind != NodeKind::TranslationUnit {
        return Err(LookupError::NotATranslationUnit(tree.kind.to_string()));
    }
    let mut found = tree
        .children
        .iter()
        .filter(|c| c.kind == NodeKind::FunctionDef && c.name() == name);
    match (found.next(), found.next()) {
        (Some(f), None) => Ok(f),
        (Some(_), Some(_)) => Err(LookupError::AmbiguousFunction(name.to_string())),
        (None, _) => Err(LookupError::FunctionNotFound(name.to_string())),
    }
}
