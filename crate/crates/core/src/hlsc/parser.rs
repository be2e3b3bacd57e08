// SPDX-License-Identifier: Apache-2.0

//! Recursive-descent parser producing [`AstNode`] trees.

use super::ast::{AstNode, NodeKind, SourceSpan};
use super::error::ParseError;
use super::lexer::{tokenize, Token, TokenKind};

/// Keywords that can begin or be part of a type.
const TYPE_WORDS: &[&str] = &[
    "void", "bool", "char", "short", "int", "long", "float", "double", "signed", "unsigned", "auto",
];

const QUALIFIERS: &[&str] = &["static", "const", "volatile", "inline", "register", "constexpr"];

/// Reserved words rejected with `UnsupportedConstruct` wherever they appear.
const UNSUPPORTED_WORDS: &[&str] = &[
    "typedef", "struct", "union", "enum", "class", "template", "namespace", "using", "goto", "do",
    "sizeof", "extern", "new", "delete", "try", "catch", "throw", "operator", "friend", "virtual",
    "asm",
];

const STATEMENT_WORDS: &[&str] = &[
    "if", "else", "for", "while", "switch", "case", "default", "return", "break", "continue",
];

const ASSIGN_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=",
];

fn is_reserved(word: &str) -> bool {
    TYPE_WORDS.contains(&word)
        || QUALIFIERS.contains(&word)
        || UNSUPPORTED_WORDS.contains(&word)
        || STATEMENT_WORDS.contains(&word)
        || word == "true"
        || word == "false"
}

/// Binding strength of a binary operator; higher binds tighter.
pub(crate) fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 1,
        "&&" => 2,
        "|" => 3,
        "^" => 4,
        "&" => 5,
        "==" | "!=" => 6,
        "<" | ">" | "<=" | ">=" => 7,
        "<<" | ">>" => 8,
        "+" | "-" => 9,
        "*" | "/" | "%" => 10,
        _ => return None,
    })
}

pub(crate) fn is_assign_op(op: &str) -> bool {
    ASSIGN_OPS.contains(&op)
}

/// Joins token texts with canonical spacing: a space between adjacent words
/// and after commas, nothing elsewhere.
pub(crate) fn join_tokens<'a>(tokens: impl IntoIterator<Item = &'a Token>) -> String {
    let mut out = String::new();
    let mut prev: Option<&Token> = None;
    for tok in tokens {
        if tok.kind == TokenKind::Comment {
            continue;
        }
        if let Some(p) = prev {
            if (p.is_word() && tok.is_word()) || p.is_punct(",") {
                out.push(' ');
            }
        }
        out.push_str(&tok.text);
        prev = Some(tok);
    }
    out
}

/// Parses source text into a `TranslationUnit` with pre-order node ids.
pub fn parse_text(text: &str) -> Result<AstNode, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser::new(tokens);
    let mut root = parser.translation_unit()?;
    root.renumber(0);
    Ok(root)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    last: SourceSpan,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            last: SourceSpan::new(1, 1, 1, 1),
        }
    }

    // ---- token cursor ----

    /// Index of the `n`th non-comment token at or after the cursor.
    fn index_of(&self, n: usize) -> Option<usize> {
        self.tokens[self.pos..]
            .iter()
            .enumerate()
            .filter(|(_, t)| t.kind != TokenKind::Comment)
            .nth(n)
            .map(|(i, _)| self.pos + i)
    }

    fn peek_nth(&self, n: usize) -> Option<&Token> {
        self.index_of(n).map(|i| &self.tokens[i])
    }

    fn peek(&self) -> Option<&Token> {
        self.peek_nth(0)
    }

    fn peek_raw(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let i = self.index_of(0)?;
        self.pos = i + 1;
        let tok = self.tokens[i].clone();
        self.last = tok.span;
        Some(tok)
    }

    fn next_raw(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos)?.clone();
        self.pos += 1;
        self.last = tok.span;
        Some(tok)
    }

    fn here(&self) -> SourceSpan {
        match self.peek() {
            Some(t) => t.span,
            None => SourceSpan::new(self.last.end_line, self.last.end_col, self.last.end_line, self.last.end_col),
        }
    }

    fn at_op(&self, op: &str) -> bool {
        self.peek().is_some_and(|t| t.is_op(op))
    }

    fn at_punct(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.is_punct(p))
    }

    fn at_ident(&self, word: &str) -> bool {
        self.peek().is_some_and(|t| t.is_ident(word))
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.at_punct(p) {
            self.next();
            true
        } else {
            false
        }
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.at_op(op) {
            self.next();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::SyntaxError {
            span: self.here(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self
                .peek()
                .map(|t| format!("`{}`", t.text))
                .unwrap_or_else(|| "end of input".into()),
        }
    }

    fn unsupported(&self, span: SourceSpan, construct: impl Into<String>) -> ParseError {
        ParseError::UnsupportedConstruct {
            span,
            construct: construct.into(),
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<Token> {
        if self.at_punct(p) {
            Ok(self.next().unwrap())
        } else {
            Err(self.error(&[&format!("`{p}`")]))
        }
    }

    fn expect_op(&mut self, op: &str) -> PResult<Token> {
        if self.at_op(op) {
            Ok(self.next().unwrap())
        } else {
            Err(self.error(&[&format!("`{op}`")]))
        }
    }

    fn expect_name(&mut self) -> PResult<Token> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident && !is_reserved(&t.text) => Ok(self.next().unwrap()),
            Some(t) if t.kind == TokenKind::Ident && UNSUPPORTED_WORDS.contains(&t.text.as_str()) => {
                Err(self.unsupported(t.span, t.text.clone()))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn check_unsupported_word(&self) -> PResult<()> {
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Ident && UNSUPPORTED_WORDS.contains(&t.text.as_str()) {
                let what = match t.text.as_str() {
                    "do" => "do-while loop".to_string(),
                    other => other.to_string(),
                };
                return Err(self.unsupported(t.span, what));
            }
        }
        Ok(())
    }

    // ---- top level ----

    fn translation_unit(&mut self) -> PResult<AstNode> {
        let mut children = Vec::new();
        while let Some(tok) = self.peek_raw() {
            match tok.kind {
                TokenKind::Comment => children.push(self.comment()),
                TokenKind::Directive => children.push(self.directive()?),
                _ => children.extend(self.external_declaration()?),
            }
        }
        let span = match (children.first(), children.last()) {
            (Some(first), Some(last)) => SourceSpan::new(1, 1, 1, 1).to(first.span.to(last.span)),
            _ => SourceSpan::new(1, 1, 1, 1),
        };
        Ok(AstNode::new(NodeKind::TranslationUnit, span).with_children(children))
    }

    fn comment(&mut self) -> AstNode {
        let tok = self.next_raw().unwrap();
        AstNode::new(NodeKind::Comment, tok.span).with_name(tok.text)
    }

    fn directive(&mut self) -> PResult<AstNode> {
        let tok = self.next_raw().unwrap();
        let body = tok.text[1..].replace("\\\r\n", " ").replace("\\\n", " ");
        let body = body.trim_start();
        let word_end = body
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(body.len());
        let (word, rest) = body.split_at(word_end);
        let rest = rest.split_whitespace().collect::<Vec<_>>().join(" ");
        match word {
            "pragma" => Ok(AstNode::new(NodeKind::Pragma, tok.span).with_name(rest)),
            "include" => Ok(AstNode::new(NodeKind::Include, tok.span).with_name(rest)),
            other => Err(self.unsupported(tok.span, format!("#{other} directive"))),
        }
    }

    fn external_declaration(&mut self) -> PResult<Vec<AstNode>> {
        self.check_unsupported_word()?;
        let start = self.here();
        let Some((type_text, type_span)) = self.try_type() else {
            return Err(self.error(&["type", "directive"]));
        };
        let name_tok = self.expect_name()?;
        if self.at_punct("(") {
            return self.function_def(start, type_text, name_tok).map(|f| vec![f]);
        }
        self.declaration_rest(start, type_text, type_span, name_tok)
    }

    fn function_def(
        &mut self,
        start: SourceSpan,
        return_type: String,
        name: Token,
    ) -> PResult<AstNode> {
        let params = self.param_list()?;
        if self.at_punct(";") {
            return Err(self.unsupported(self.here(), "function prototype"));
        }
        if !self.at_punct("{") {
            return Err(self.error(&["`{`"]));
        }
        let body = self.compound()?;
        let span = start.to(self.last);
        Ok(AstNode::new(NodeKind::FunctionDef, span)
            .with_name(name.text)
            .with_type(return_type)
            .with_children(vec![params, body]))
    }

    fn param_list(&mut self) -> PResult<AstNode> {
        let open = self.expect_punct("(")?;
        let mut params = Vec::new();
        // `(void)` is an empty list.
        if self.at_ident("void") && self.peek_nth(1).is_some_and(|t| t.is_punct(")")) {
            self.next();
        }
        if !self.at_punct(")") {
            loop {
                params.push(self.param()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        Ok(AstNode::new(NodeKind::ParamList, open.span.to(self.last)).with_children(params))
    }

    fn param(&mut self) -> PResult<AstNode> {
        self.check_unsupported_word()?;
        let start = self.here();
        let Some((type_text, type_span)) = self.try_type() else {
            return Err(self.error(&["parameter type"]));
        };
        let name = self.expect_name()?;
        let declarator = self.declarator_dims(name.clone())?;
        if self.at_op("=") {
            return Err(self.unsupported(self.here(), "default argument"));
        }
        Ok(AstNode::new(NodeKind::Param, start.to(self.last))
            .with_name(name.text)
            .with_type(type_text.clone())
            .with_children(vec![
                AstNode::new(NodeKind::TypeName, type_span).with_type(type_text),
                declarator,
            ]))
    }

    // ---- types ----

    /// Speculatively parses a type. Restores the cursor on failure.
    fn try_type(&mut self) -> Option<(String, SourceSpan)> {
        let save = (self.pos, self.last);
        match self.type_tokens() {
            Some(toks) if !toks.is_empty() => {
                let span = toks[0].span.to(toks[toks.len() - 1].span);
                Some((join_tokens(&toks), span))
            }
            _ => {
                (self.pos, self.last) = save;
                None
            }
        }
    }

    fn type_tokens(&mut self) -> Option<Vec<Token>> {
        let mut toks = Vec::new();
        let mut has_base = false;
        while let Some(t) = self.peek() {
            if t.kind != TokenKind::Ident {
                break;
            }
            if QUALIFIERS.contains(&t.text.as_str()) {
                toks.push(self.next().unwrap());
            } else if TYPE_WORDS.contains(&t.text.as_str()) {
                has_base = true;
                toks.push(self.next().unwrap());
            } else if !has_base && !is_reserved(&t.text) {
                toks.extend(self.scoped_name_with_args()?);
                has_base = true;
            } else {
                break;
            }
        }
        if !has_base {
            return None;
        }
        while let Some(t) = self.peek() {
            if t.is_op("&") || t.is_op("*") || t.is_op("&&") || t.is_ident("const") {
                toks.push(self.next().unwrap());
            } else {
                break;
            }
        }
        Some(toks)
    }

    /// `a::b<...>::c` as a token list.
    fn scoped_name_with_args(&mut self) -> Option<Vec<Token>> {
        let mut toks = vec![self.next()?];
        loop {
            if self.at_op("<") {
                match self.template_args() {
                    Some(args) => toks.extend(args),
                    None => break,
                }
            }
            if self.at_op("::") && self.peek_nth(1).is_some_and(|t| t.kind == TokenKind::Ident) {
                toks.push(self.next().unwrap());
                toks.push(self.next().unwrap());
            } else {
                break;
            }
        }
        Some(toks)
    }

    /// Balanced `<...>` group. `>>` closes two levels.
    fn template_args(&mut self) -> Option<Vec<Token>> {
        let save = (self.pos, self.last);
        let mut toks = vec![self.next()?];
        let mut depth: i32 = 1;
        while depth > 0 {
            let Some(t) = self.peek() else {
                (self.pos, self.last) = save;
                return None;
            };
            if t.is_punct(";") || t.is_punct("{") || t.is_punct("}") || t.kind == TokenKind::Directive {
                (self.pos, self.last) = save;
                return None;
            }
            if t.is_op("<") {
                depth += 1;
            } else if t.is_op(">") {
                depth -= 1;
            } else if t.is_op(">>") {
                if depth < 2 {
                    (self.pos, self.last) = save;
                    return None;
                }
                depth -= 2;
            }
            toks.push(self.next().unwrap());
        }
        Some(toks)
    }

    /// True when the upcoming tokens read as `type name`.
    fn at_declaration(&mut self) -> bool {
        let save = (self.pos, self.last);
        let ok = self.try_type().is_some()
            && self
                .peek()
                .is_some_and(|t| t.kind == TokenKind::Ident && !is_reserved(&t.text));
        (self.pos, self.last) = save;
        ok
    }

    // ---- declarations ----

    fn declarator_dims(&mut self, name: Token) -> PResult<AstNode> {
        let mut node = AstNode::new(NodeKind::Identifier, name.span).with_name(name.text);
        while self.at_punct("[") {
            self.next();
            let dim = self.expression()?;
            self.expect_punct("]")?;
            let span = node.span.to(self.last);
            node = AstNode::new(NodeKind::ArraySubscript, span).with_children(vec![node, dim]);
        }
        Ok(node)
    }

    fn declaration_rest(
        &mut self,
        start: SourceSpan,
        type_text: String,
        type_span: SourceSpan,
        first_name: Token,
    ) -> PResult<Vec<AstNode>> {
        let mut parts = Vec::new();
        let mut name = first_name;
        loop {
            let declarator = self.declarator_dims(name.clone())?;
            let init = if self.eat_op("=") {
                Some(self.initializer()?)
            } else if self.at_punct("(") || self.at_punct("{") {
                return Err(self.unsupported(self.here(), "constructor-style initializer"));
            } else {
                None
            };
            parts.push((name.text.clone(), declarator, init));
            if self.eat_punct(",") {
                name = self.expect_name()?;
                continue;
            }
            self.expect_punct(";")?;
            break;
        }
        let span = start.to(self.last);
        Ok(parts
            .into_iter()
            .map(|(name, declarator, init)| {
                let mut children = vec![
                    AstNode::new(NodeKind::TypeName, type_span).with_type(type_text.clone()),
                    declarator,
                ];
                children.extend(init);
                AstNode::new(NodeKind::Declaration, span)
                    .with_name(name)
                    .with_type(type_text.clone())
                    .with_children(children)
            })
            .collect())
    }

    fn initializer(&mut self) -> PResult<AstNode> {
        if !self.at_punct("{") {
            return self.assignment_expr();
        }
        // Brace lists are kept as one opaque literal.
        let start = self.pos;
        let mut depth = 0;
        loop {
            let Some(t) = self.next() else {
                return Err(self.error(&["`}`"]));
            };
            if t.is_punct("{") {
                depth += 1;
            } else if t.is_punct("}") {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            } else if t.kind == TokenKind::Directive {
                return Err(self.unsupported(t.span, "directive inside initializer"));
            }
        }
        let toks = &self.tokens[start..self.pos];
        let first = toks.iter().find(|t| t.kind != TokenKind::Comment).unwrap();
        let span = first.span.to(self.last);
        Ok(AstNode::new(NodeKind::Literal, span).with_name(join_tokens(toks)))
    }

    // ---- statements ----

    fn compound(&mut self) -> PResult<AstNode> {
        let open = self.expect_punct("{")?;
        let mut items = Vec::new();
        loop {
            match self.peek_raw() {
                None => return Err(self.error(&["`}`"])),
                Some(t) if t.kind == TokenKind::Comment => items.push(self.comment()),
                Some(t) if t.kind == TokenKind::Directive => items.push(self.directive()?),
                Some(t) if t.is_punct("}") => break,
                Some(_) => items.extend(self.statement()?),
            }
        }
        self.expect_punct("}")?;
        Ok(AstNode::new(NodeKind::CompoundStmt, open.span.to(self.last)).with_children(items))
    }

    /// One statement; declarations with several declarators yield several nodes.
    fn statement(&mut self) -> PResult<Vec<AstNode>> {
        self.check_unsupported_word()?;
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error(&["statement"]));
        };
        let start = tok.span;
        if tok.is_punct("{") {
            return Ok(vec![self.compound()?]);
        }
        if tok.is_punct(";") {
            self.next();
            return Ok(vec![AstNode::new(NodeKind::ExprStmt, start)]);
        }
        if tok.kind == TokenKind::Ident {
            match tok.text.as_str() {
                "if" => return Ok(vec![self.if_stmt()?]),
                "for" => return Ok(vec![self.for_stmt()?]),
                "while" => return Ok(vec![self.while_stmt()?]),
                "switch" => return Ok(vec![self.switch_stmt()?]),
                "return" => {
                    self.next();
                    let mut node = AstNode::new(NodeKind::ReturnStmt, start);
                    if !self.at_punct(";") {
                        node.children.push(self.expression()?);
                    }
                    self.expect_punct(";")?;
                    node.span = start.to(self.last);
                    return Ok(vec![node]);
                }
                "break" | "continue" => {
                    self.next();
                    self.expect_punct(";")?;
                    return Ok(vec![
                        AstNode::new(NodeKind::JumpStmt, start.to(self.last)).with_name(tok.text)
                    ]);
                }
                "else" | "case" | "default" => return Err(self.error(&["statement"])),
                _ => {}
            }
            if self.at_declaration() {
                let (type_text, type_span) = self.try_type().unwrap();
                let name = self.expect_name()?;
                if self.at_punct("(") {
                    return Err(self.unsupported(self.here(), "nested function or constructor call declaration"));
                }
                return self.declaration_rest(start, type_text, type_span, name);
            }
        }
        let expr = self.expression()?;
        self.expect_punct(";")?;
        Ok(vec![AstNode::new(NodeKind::ExprStmt, start.to(self.last)).with_children(vec![expr])])
    }

    fn single_statement(&mut self) -> PResult<AstNode> {
        let mut stmts = self.statement()?;
        if stmts.len() != 1 {
            let span = stmts[0].span;
            return Err(self.unsupported(span, "multi-declarator declaration as a branch body"));
        }
        Ok(stmts.pop().unwrap())
    }

    fn paren_condition(&mut self) -> PResult<AstNode> {
        self.expect_punct("(")?;
        let cond = self.expression()?;
        self.expect_punct(")")?;
        Ok(cond)
    }

    fn if_stmt(&mut self) -> PResult<AstNode> {
        let start = self.next().unwrap().span;
        let cond = self.paren_condition()?;
        let then = self.single_statement()?;
        let mut children = vec![cond, then];
        if self.at_ident("else") {
            self.next();
            children.push(self.single_statement()?);
        }
        Ok(AstNode::new(NodeKind::IfStmt, start.to(self.last)).with_children(children))
    }

    fn while_stmt(&mut self) -> PResult<AstNode> {
        let start = self.next().unwrap().span;
        let cond = self.paren_condition()?;
        let body = self.single_statement()?;
        Ok(AstNode::new(NodeKind::WhileStmt, start.to(self.last)).with_children(vec![cond, body]))
    }

    fn empty_expr_stmt(&self) -> AstNode {
        let h = self.here();
        AstNode::new(
            NodeKind::ExprStmt,
            SourceSpan::new(h.start_line, h.start_col, h.start_line, h.start_col),
        )
    }

    fn for_stmt(&mut self) -> PResult<AstNode> {
        let start = self.next().unwrap().span;
        self.expect_punct("(")?;

        let init = if self.at_punct(";") {
            let e = self.empty_expr_stmt();
            self.next();
            e
        } else if self.at_declaration() {
            let decl_start = self.here();
            let (type_text, type_span) = self.try_type().unwrap();
            let name = self.expect_name()?;
            let mut decls = self.declaration_rest(decl_start, type_text, type_span, name)?;
            if decls.len() != 1 {
                return Err(self.unsupported(decl_start.to(self.last), "multiple declarators in for-init"));
            }
            decls.pop().unwrap()
        } else {
            let s = self.here();
            let e = self.expression()?;
            self.expect_punct(";")?;
            AstNode::new(NodeKind::ExprStmt, s.to(e.span)).with_children(vec![e])
        };

        let cond = if self.at_punct(";") {
            self.empty_expr_stmt()
        } else {
            let e = self.expression()?;
            AstNode::new(NodeKind::ExprStmt, e.span).with_children(vec![e])
        };
        self.expect_punct(";")?;

        let update = if self.at_punct(")") {
            self.empty_expr_stmt()
        } else {
            let e = self.expression()?;
            AstNode::new(NodeKind::ExprStmt, e.span).with_children(vec![e])
        };
        if self.at_punct(",") {
            return Err(self.unsupported(self.here(), "comma operator"));
        }
        self.expect_punct(")")?;
        let body = self.single_statement()?;
        Ok(AstNode::new(NodeKind::ForStmt, start.to(self.last))
            .with_children(vec![init, cond, update, body]))
    }

    fn switch_stmt(&mut self) -> PResult<AstNode> {
        let start = self.next().unwrap().span;
        let selector = self.paren_condition()?;
        self.expect_punct("{")?;
        let mut children = vec![selector];
        loop {
            match self.peek_raw() {
                None => return Err(self.error(&["`}`"])),
                // Comments before the first label have no clause to live in.
                Some(t) if t.kind == TokenKind::Comment => {
                    self.next_raw();
                }
                Some(t) if t.is_punct("}") => break,
                Some(t) if t.is_ident("case") || t.is_ident("default") => {
                    children.push(self.case_clause()?);
                }
                Some(_) => return Err(self.error(&["`case`", "`default`", "`}`"])),
            }
        }
        self.expect_punct("}")?;
        Ok(AstNode::new(NodeKind::SwitchStmt, start.to(self.last)).with_children(children))
    }

    fn case_clause(&mut self) -> PResult<AstNode> {
        let label_tok = self.next().unwrap();
        let mut children = Vec::new();
        if label_tok.text == "case" {
            children.push(self.conditional_expr()?);
        }
        self.expect_op(":")?;
        loop {
            match self.peek_raw() {
                None => return Err(self.error(&["`}`"])),
                Some(t) if t.kind == TokenKind::Comment => children.push(self.comment()),
                Some(t) if t.kind == TokenKind::Directive => children.push(self.directive()?),
                Some(t) if t.is_punct("}") || t.is_ident("case") || t.is_ident("default") => break,
                Some(_) => children.extend(self.statement()?),
            }
        }
        Ok(AstNode::new(NodeKind::CaseClause, label_tok.span.to(self.last))
            .with_name(label_tok.text)
            .with_children(children))
    }

    // ---- expressions ----

    fn expression(&mut self) -> PResult<AstNode> {
        self.assignment_expr()
    }

    fn assignment_expr(&mut self) -> PResult<AstNode> {
        let lhs = self.conditional_expr()?;
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Op && is_assign_op(&t.text) {
                let op = self.next().unwrap().text;
                let rhs = self.assignment_expr()?;
                let span = lhs.span.to(rhs.span);
                return Ok(AstNode::new(NodeKind::Assignment, span)
                    .with_name(op)
                    .with_children(vec![lhs, rhs]));
            }
        }
        Ok(lhs)
    }

    fn conditional_expr(&mut self) -> PResult<AstNode> {
        let cond = self.binary_expr(1)?;
        if !self.eat_op("?") {
            return Ok(cond);
        }
        let then = self.assignment_expr()?;
        self.expect_op(":")?;
        let other = self.conditional_expr()?;
        let span = cond.span.to(other.span);
        Ok(AstNode::new(NodeKind::ConditionalExpr, span).with_children(vec![cond, then, other]))
    }

    fn binary_expr(&mut self, min_prec: u8) -> PResult<AstNode> {
        let mut lhs = self.unary_expr()?;
        while let Some(t) = self.peek() {
            if t.kind != TokenKind::Op {
                break;
            }
            let Some(prec) = binary_precedence(&t.text) else { break };
            if prec < min_prec {
                break;
            }
            let op = self.next().unwrap().text;
            let rhs = self.binary_expr(prec + 1)?;
            let span = lhs.span.to(rhs.span);
            lhs = AstNode::new(NodeKind::BinaryExpr, span)
                .with_name(op)
                .with_children(vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> PResult<AstNode> {
        let Some(t) = self.peek().cloned() else {
            return Err(self.error(&["expression"]));
        };
        if t.kind == TokenKind::Op && matches!(t.text.as_str(), "!" | "~" | "-" | "+" | "++" | "--" | "*" | "&") {
            self.next();
            let operand = self.unary_expr()?;
            let span = t.span.to(operand.span);
            return Ok(AstNode::new(NodeKind::UnaryExpr, span)
                .with_name(t.text)
                .with_children(vec![operand]));
        }
        if t.is_punct("(") {
            if let Some(next) = self.peek_nth(1) {
                if next.kind == TokenKind::Ident
                    && (TYPE_WORDS.contains(&next.text.as_str()) || QUALIFIERS.contains(&next.text.as_str()))
                {
                    return Err(self.unsupported(t.span, "cast expression"));
                }
            }
        }
        self.check_unsupported_word()?;
        let primary = self.primary_expr()?;
        self.postfix_expr(primary)
    }

    fn postfix_expr(&mut self, mut node: AstNode) -> PResult<AstNode> {
        loop {
            if self.at_punct("[") {
                self.next();
                let idx = self.expression()?;
                self.expect_punct("]")?;
                let span = node.span.to(self.last);
                node = AstNode::new(NodeKind::ArraySubscript, span).with_children(vec![node, idx]);
            } else if self.at_punct("(") {
                self.next();
                let mut children = vec![node];
                if !self.at_punct(")") {
                    loop {
                        children.push(self.assignment_expr()?);
                        if !self.eat_punct(",") {
                            break;
                        }
                    }
                }
                self.expect_punct(")")?;
                let span = children[0].span.to(self.last);
                node = AstNode::new(NodeKind::CallExpr, span).with_children(children);
            } else if self.at_op(".") || self.at_op("->") {
                let op = self.next().unwrap().text;
                let field = self.expect_name()?;
                let span = node.span.to(field.span);
                node = AstNode::new(NodeKind::FieldExpr, span).with_name(op).with_children(vec![
                    node,
                    AstNode::new(NodeKind::Identifier, field.span).with_name(field.text),
                ]);
            } else if self.at_op("++") || self.at_op("--") {
                let op = self.next().unwrap();
                let span = node.span.to(op.span);
                node = AstNode::new(NodeKind::UnaryExpr, span)
                    .with_name(format!("post{}", op.text))
                    .with_children(vec![node]);
            } else {
                break;
            }
        }
        Ok(node)
    }

    fn primary_expr(&mut self) -> PResult<AstNode> {
        let Some(t) = self.peek().cloned() else {
            return Err(self.error(&["expression"]));
        };
        match t.kind {
            TokenKind::Int | TokenKind::Float | TokenKind::Str | TokenKind::Char => {
                self.next();
                Ok(AstNode::new(NodeKind::Literal, t.span).with_name(t.text))
            }
            TokenKind::Ident if t.text == "true" || t.text == "false" => {
                self.next();
                Ok(AstNode::new(NodeKind::Literal, t.span).with_name(t.text))
            }
            TokenKind::Ident if !is_reserved(&t.text) => {
                let save = (self.pos, self.last);
                let toks = self.scoped_name_with_args().unwrap();
                // A template argument list only belongs to the name when a call follows,
                // as in `ap_uint<8>(x)` or `std::min<int>(a, b)`.
                let toks = if toks.iter().any(|t| t.is_op("<")) && !self.at_punct("(") {
                    (self.pos, self.last) = save;
                    self.scoped_name_plain()
                } else {
                    toks
                };
                let span = toks[0].span.to(toks[toks.len() - 1].span);
                Ok(AstNode::new(NodeKind::Identifier, span).with_name(join_tokens(&toks)))
            }
            TokenKind::Punct if t.text == "(" => {
                self.next();
                let inner = self.expression()?;
                self.expect_punct(")")?;
                Ok(inner)
            }
            _ => Err(self.error(&["expression"])),
        }
    }

    fn scoped_name_plain(&mut self) -> Vec<Token> {
        let mut toks = vec![self.next().unwrap()];
        while self.at_op("::") && self.peek_nth(1).is_some_and(|t| t.kind == TokenKind::Ident) {
            toks.push(self.next().unwrap());
            toks.push(self.next().unwrap());
        }
        toks
    }
}
