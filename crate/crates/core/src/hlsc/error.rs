// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use super::ast::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: unterminated block comment")]
    UnterminatedComment { span: SourceSpan },

    #[error("{span}: unterminated string or character literal")]
    UnterminatedString { span: SourceSpan },

    #[error("{span}: illegal character `{ch}`")]
    IllegalCharacter { ch: char, span: SourceSpan },

    #[error("{span}: syntax error, expected {}; found {found}", expected.join(" or "))]
    SyntaxError {
        span: SourceSpan,
        expected: Vec<String>,
        found: String,
    },

    #[error("{span}: unsupported construct: {construct}")]
    UnsupportedConstruct { span: SourceSpan, construct: String },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::UnterminatedComment { span }
            | ParseError::UnterminatedString { span }
            | ParseError::IllegalCharacter { span, .. }
            | ParseError::SyntaxError { span, .. }
            | ParseError::UnsupportedConstruct { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("function `{0}` not found")]
    FunctionNotFound(String),

    #[error("function `{0}` is defined more than once")]
    AmbiguousFunction(String),

    #[error("lookup requires a TranslationUnit, got {0}")]
    NotATranslationUnit(String),
}
