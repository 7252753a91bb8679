//! Surface syntax: declaration files, single terms, and printing.
//!
//! ```text
//! decl ::= "def" NAME ":" term ":=" term "." | "axiom" NAME ":" term "."
//! term ::= "fun" "(" NAME ":" term ")" "=>" term
//!        | "(" NAME ":" term ")" "->" term
//!        | app [ "->" term ]
//! app  ::= atom { atom }
//! atom ::= NAME | "Prop" | "U" NAT | "(" term ")"
//! ```

mod lexer;
mod pretty;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::Name;
use lexer::Token;

pub use pretty::{pretty, pretty_type};

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Span {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl ParseError {
    pub fn new(span: Span, message: impl Into<String>) -> ParseError {
        ParseError { span, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTerm {
    pub span: Span,
    pub kind: RawKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawKind {
    Var(Name),
    Univ(u32),
    /// `Prop`, the same universe as `U 0`.
    Prop,
    Pi(Name, Box<RawTerm>, Box<RawTerm>),
    Arrow(Box<RawTerm>, Box<RawTerm>),
    Lam(Name, Box<RawTerm>, Box<RawTerm>),
    App(Box<RawTerm>, Box<RawTerm>),
}

impl RawTerm {
    fn new(span: Span, kind: RawKind) -> RawTerm {
        RawTerm { span, kind }
    }

    /// Structural equality ignoring spans.
    pub fn same_shape(&self, other: &RawTerm) -> bool {
        use RawKind::*;
        match (&self.kind, &other.kind) {
            (Var(a), Var(b)) => a == b,
            (Univ(a), Univ(b)) => a == b,
            (Prop, Prop) | (Prop, Univ(0)) | (Univ(0), Prop) => true,
            (Pi(x, a, b), Pi(y, c, d)) | (Lam(x, a, b), Lam(y, c, d)) => {
                x == y && a.same_shape(c) && b.same_shape(d)
            }
            (Arrow(a, b), Arrow(c, d)) | (App(a, b), App(c, d)) => {
                a.same_shape(c) && b.same_shape(d)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    Definition,
    Axiom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDecl {
    pub kind: DeclKind,
    pub name: Name,
    pub span: Span,
    pub ty: RawTerm,
    /// Present exactly for definitions.
    pub body: Option<RawTerm>,
}

pub fn parse_file(text: &str) -> Result<Vec<RawDecl>, ParseError> {
    let mut parser = Parser::new(text)?;
    let mut decls: Vec<RawDecl> = Vec::new();
    let mut seen = HashSet::new();
    while parser.peek() != &Token::Eof {
        let decl = parser.decl()?;
        if !seen.insert(decl.name.clone()) {
            return Err(ParseError::new(
                decl.span,
                format!("duplicate declaration `{}`", decl.name),
            ));
        }
        decls.push(decl);
    }
    Ok(decls)
}

pub fn parse_term(text: &str) -> Result<RawTerm, ParseError> {
    let mut parser = Parser::new(text)?;
    let term = parser.term()?;
    parser.expect(Token::Eof)?;
    Ok(term)
}

struct Parser {
    tokens: Vec<(Token, Span)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { tokens: lexer::tokenize(text)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        self.peek_at(0)
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let last = self.tokens.len() - 1;
        &self.tokens[(self.pos + offset).min(last)].0
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> (Token, Span) {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::new(self.span(), format!("expected {expected}, found {}", self.peek()))
    }

    fn expect(&mut self, token: Token) -> Result<Span, ParseError> {
        if *self.peek() == token {
            Ok(self.advance().1)
        } else {
            Err(self.error(&token.to_string()))
        }
    }

    fn ident(&mut self) -> Result<(Name, Span), ParseError> {
        match self.peek() {
            Token::Ident(_) => match self.advance() {
                (Token::Ident(name), span) => Ok((name.into(), span)),
                _ => unreachable!(),
            },
            _ => Err(self.error("an identifier")),
        }
    }

    fn decl(&mut self) -> Result<RawDecl, ParseError> {
        let span = self.span();
        let kind = match self.peek() {
            Token::Def => DeclKind::Definition,
            Token::Axiom => DeclKind::Axiom,
            _ => return Err(self.error("`def` or `axiom`")),
        };
        self.advance();
        let (name, _) = self.ident()?;
        self.expect(Token::Colon)?;
        let ty = self.term()?;
        let body = match kind {
            DeclKind::Definition => {
                self.expect(Token::ColonEq)?;
                Some(self.term()?)
            }
            DeclKind::Axiom => None,
        };
        self.expect(Token::Dot)?;
        Ok(RawDecl { kind, name, span, ty, body })
    }

    /// `(` NAME `:` opens a binder rather than a parenthesised term.
    fn at_binder(&self) -> bool {
        *self.peek() == Token::LParen
            && matches!(self.peek_at(1), Token::Ident(_))
            && *self.peek_at(2) == Token::Colon
    }

    fn binder(&mut self) -> Result<(Name, RawTerm), ParseError> {
        self.expect(Token::LParen)?;
        let (name, _) = self.ident()?;
        self.expect(Token::Colon)?;
        let ty = self.term()?;
        self.expect(Token::RParen)?;
        Ok((name, ty))
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let span = self.span();
        if *self.peek() == Token::Fun {
            self.advance();
            let (name, annot) = self.binder()?;
            self.expect(Token::FatArrow)?;
            let body = self.term()?;
            return Ok(RawTerm::new(span, RawKind::Lam(name, Box::new(annot), Box::new(body))));
        }
        if self.at_binder() {
            let (name, dom) = self.binder()?;
            self.expect(Token::Arrow)?;
            let cod = self.term()?;
            return Ok(RawTerm::new(span, RawKind::Pi(name, Box::new(dom), Box::new(cod))));
        }
        let lhs = self.app()?;
        if *self.peek() == Token::Arrow {
            self.advance();
            let rhs = self.term()?;
            return Ok(RawTerm::new(span, RawKind::Arrow(Box::new(lhs), Box::new(rhs))));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Token::Ident(_) | Token::Prop | Token::Univ => true,
            Token::LParen => !self.at_binder(),
            _ => false,
        }
    }

    fn app(&mut self) -> Result<RawTerm, ParseError> {
        let span = self.span();
        let mut head = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            head = RawTerm::new(span, RawKind::App(Box::new(head), Box::new(arg)));
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<RawTerm, ParseError> {
        let span = self.span();
        match self.peek() {
            Token::Ident(_) => {
                let (name, span) = self.ident()?;
                Ok(RawTerm::new(span, RawKind::Var(name)))
            }
            Token::Prop => {
                self.advance();
                Ok(RawTerm::new(span, RawKind::Prop))
            }
            Token::Univ => {
                self.advance();
                match self.peek() {
                    Token::Nat(n) => {
                        let n = *n;
                        self.advance();
                        Ok(RawTerm::new(span, RawKind::Univ(n)))
                    }
                    _ => Err(self.error("a universe level after `U`")),
                }
            }
            Token::LParen => {
                self.advance();
                let inner = self.term()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            _ => Err(self.error("a term")),
        }
    }
}
