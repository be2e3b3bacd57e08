// SPDX-License-Identifier: Apache-2.0

//! Tokenizer for the HLS-C subset.
//!
//! Preprocessor lines (`#pragma`, `#include`, and any other `#` directive)
//! become a single [`TokenKind::Directive`] token; the parser decides which
//! directives it accepts.

use std::fmt;
use std::ops::Range;

use super::ast::SourceSpan;
use super::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Ident,
    Int,
    Float,
    Str,
    Char,
    Op,
    Punct,
    Directive,
    Comment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
    /// Byte range in the source text.
    pub range: Range<usize>,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    pub fn is_op(&self, text: &str) -> bool {
        self.is(TokenKind::Op, text)
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.is(TokenKind::Punct, text)
    }

    pub fn is_ident(&self, text: &str) -> bool {
        self.is(TokenKind::Ident, text)
    }

    pub fn is_word(&self) -> bool {
        matches!(
            self.kind,
            TokenKind::Ident | TokenKind::Int | TokenKind::Float | TokenKind::Str | TokenKind::Char
        )
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            TokenKind::Ident => "ident",
            TokenKind::Int => "int",
            TokenKind::Float => "float",
            TokenKind::Str => "str",
            TokenKind::Char => "char",
            TokenKind::Op => "op",
            TokenKind::Punct => "punct",
            TokenKind::Directive => "directive",
            TokenKind::Comment => "comment",
        };
        write!(f, "{tag}({})", self.text)
    }
}

// Longest first so that maximal munch works with a simple prefix scan.
const OPERATORS: &[&str] = &[
    "<<=", ">>=", "...", "->", "::", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "+", "-", "*", "/", "%", "<", ">", "=", "!",
    "~", "&", "|", "^", "?", ":", ".",
];

const PUNCT: &[char] = &[';', ',', '(', ')', '{', '}', '[', ']'];

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn loc(&self) -> (u32, u32) {
        (self.line, self.col)
    }

    /// True when only whitespace precedes the cursor on the current line.
    fn at_line_start(&self) -> bool {
        self.src[..self.pos]
            .rsplit('\n')
            .next()
            .map(|l| l.chars().all(|c| c == ' ' || c == '\t' || c == '\r'))
            .unwrap_or(true)
    }
}

/// Splits `text` into tokens. Whitespace is skipped; everything else is covered.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        src: text,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let start = cur.pos;
        let (sl, sc) = cur.loc();

        let kind = if c == '/' && cur.peek_at(1) == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            TokenKind::Comment
        } else if c == '/' && cur.peek_at(1) == Some('*') {
            cur.bump_n(2);
            loop {
                if cur.rest().starts_with("*/") {
                    cur.bump_n(2);
                    break;
                }
                if cur.bump().is_none() {
                    return Err(ParseError::UnterminatedComment {
                        span: SourceSpan::new(sl, sc, cur.line, cur.col),
                    });
                }
            }
            TokenKind::Comment
        } else if c == '#' {
            if !cur.at_line_start() {
                return Err(ParseError::IllegalCharacter {
                    ch: c,
                    span: SourceSpan::new(sl, sc, sl, sc + 1),
                });
            }
            // Directive runs to end of line, honoring backslash continuations.
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    let line = &text[start..cur.pos];
                    if line.trim_end_matches('\r').ends_with('\\') {
                        cur.bump();
                        continue;
                    }
                    break;
                }
                cur.bump();
            }
            TokenKind::Directive
        } else if c.is_ascii_alphabetic() || c == '_' {
            while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                cur.bump();
            }
            TokenKind::Ident
        } else if c.is_ascii_digit() || (c == '.' && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
            lex_number(&mut cur)
        } else if c == '"' || c == '\'' {
            cur.bump();
            loop {
                match cur.bump() {
                    Some('\\') => {
                        cur.bump();
                    }
                    Some(q) if q == c => break,
                    Some('\n') | None => {
                        return Err(ParseError::UnterminatedString {
                            span: SourceSpan::new(sl, sc, cur.line, cur.col),
                        })
                    }
                    Some(_) => {}
                }
            }
            if c == '"' {
                TokenKind::Str
            } else {
                TokenKind::Char
            }
        } else if PUNCT.contains(&c) {
            cur.bump();
            TokenKind::Punct
        } else if let Some(op) = OPERATORS.iter().find(|op| cur.rest().starts_with(*op)) {
            cur.bump_n(op.chars().count());
            TokenKind::Op
        } else {
            return Err(ParseError::IllegalCharacter {
                ch: c,
                span: SourceSpan::new(sl, sc, sl, sc + 1),
            });
        };

        let mut end = cur.pos;
        if kind == TokenKind::Directive {
            end = start + text[start..end].trim_end().len();
        }
        let tok_text = &text[start..end];
        let (el, ec) = end_location(sl, sc, tok_text);
        tokens.push(Token {
            kind,
            text: tok_text.to_string(),
            span: SourceSpan::new(sl, sc, el, ec),
            range: start..end,
        });
    }
    Ok(tokens)
}

fn lex_number(cur: &mut Cursor<'_>) -> TokenKind {
    let mut float = false;
    if cur.rest().starts_with("0x") || cur.rest().starts_with("0X") || cur.rest().starts_with("0b") || cur.rest().starts_with("0B") {
        cur.bump_n(2);
        while matches!(cur.peek(), Some(c) if c.is_ascii_hexdigit() || c == '\'') {
            cur.bump();
        }
    } else {
        while let Some(c) = cur.peek() {
            if c.is_ascii_digit() || c == '\'' {
                cur.bump();
            } else if c == '.' && !float {
                float = true;
                cur.bump();
            } else if (c == 'e' || c == 'E')
                && (cur.peek_at(1).is_some_and(|d| d.is_ascii_digit())
                    || (matches!(cur.peek_at(1), Some('+' | '-'))
                        && cur.peek_at(2).is_some_and(|d| d.is_ascii_digit())))
            {
                float = true;
                cur.bump_n(2);
            } else {
                break;
            }
        }
    }
    // Suffixes: u, l, f and combinations.
    while matches!(cur.peek(), Some('u' | 'U' | 'l' | 'L' | 'f' | 'F')) {
        cur.bump();
    }
    if float {
        TokenKind::Float
    } else {
        TokenKind::Int
    }
}

fn end_location(line: u32, col: u32, text: &str) -> (u32, u32) {
    let mut l = line;
    let mut c = col;
    for ch in text.chars() {
        if ch == '\n' {
            l += 1;
            c = 1;
        } else {
            c += 1;
        }
    }
    (l, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(text: &str) -> Vec<String> {
        tokenize(text)
            .unwrap()
            .iter()
            .map(|t| t.to_string())
            .collect()
    }

    #[test]
    fn simple_assignment() {
        assert_eq!(
            render("v_rdy = v_en;"),
            ["ident(v_rdy)", "op(=)", "ident(v_en)", "punct(;)"]
        );
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(tokenize("  \n\t ").unwrap().is_empty());
    }

    #[test]
    fn templated_type_is_split() {
        assert_eq!(
            render("ap_uint<11> v_addr"),
            ["ident(ap_uint)", "op(<)", "int(11)", "op(>)", "ident(v_addr)"]
        );
    }

    #[test]
    fn directives_and_comments() {
        let toks = tokenize("#include <ap_int.h>\n  #pragma HLS PIPELINE II=1\nx; // done\n/* a\nb */").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            [
                TokenKind::Directive,
                TokenKind::Directive,
                TokenKind::Ident,
                TokenKind::Punct,
                TokenKind::Comment,
                TokenKind::Comment
            ]
        );
        assert_eq!(toks[1].text, "#pragma HLS PIPELINE II=1");
        assert_eq!(toks[5].span, SourceSpan::new(4, 1, 5, 5));
    }

    #[test]
    fn directive_continuation() {
        let toks = tokenize("#pragma HLS \\\n  UNROLL\nx").unwrap();
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[0].text, "#pragma HLS \\\n  UNROLL");
    }

    #[test]
    fn numbers() {
        assert_eq!(
            render("0x1F 10u 3.5f 1e-3 .5"),
            ["int(0x1F)", "int(10u)", "float(3.5f)", "float(1e-3)", "float(.5)"]
        );
    }

    #[test]
    fn maximal_munch() {
        assert_eq!(
            render("a<<=b>>c->d::e"),
            ["ident(a)", "op(<<=)", "ident(b)", "op(>>)", "ident(c)", "op(->)", "ident(d)", "op(::)", "ident(e)"]
        );
    }

    #[test]
    fn errors_carry_spans() {
        match tokenize("x /* open") {
            Err(ParseError::UnterminatedComment { span }) => assert_eq!(span.start(), (1, 3)),
            other => panic!("{other:?}"),
        }
        match tokenize("s = \"abc\n") {
            Err(ParseError::UnterminatedString { span }) => assert_eq!(span.start(), (1, 5)),
            other => panic!("{other:?}"),
        }
        match tokenize("a @ b") {
            Err(ParseError::IllegalCharacter { ch: '@', span }) => assert_eq!(span.start(), (1, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            tokenize("x # y"),
            Err(ParseError::IllegalCharacter { ch: '#', .. })
        ));
    }

    #[test]
    fn coverage_of_every_byte() {
        let src = "void f(int a) {\n  // c\n  a += 0x3; /* x */ }\n";
        let toks = tokenize(src).unwrap();
        let mut covered = vec![false; src.len()];
        for t in &toks {
            for i in t.range.clone() {
                assert!(!covered[i]);
                covered[i] = true;
            }
            assert_eq!(&src[t.range.clone()], t.text);
        }
        for (i, b) in src.bytes().enumerate() {
            assert!(covered[i] || (b as char).is_whitespace());
        }
    }
}
