//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! formula := or ('->' formula)?          right-associative
//! or      := and ('\/' and)*             left-associative
//! and     := unary ('/\' unary)*         left-associative
//! unary   := '~' unary | atom
//! atom    := 'T' | 'F' | ident | '(' formula ')'
//! ```
//!
//! `~x` desugars to `x -> F` during parsing.

use super::{is_identifier, Formula};
use std::fmt;
use thiserror::Error;

/// Syntax error with 1-based position and the token set that was legal there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: expected {}, found {}",
            self.line,
            self.column,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Neg,
    And,
    Or,
    Imp,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::Neg => "`~`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Imp => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error_here(&self, found: String, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col,
            found,
            expected,
        }
    }

    fn next_token(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\r') | Some(b'\n')) {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        let tok = match self.peek() {
            None => Tok::Eof,
            Some(b'(') => {
                self.bump();
                Tok::LParen
            }
            Some(b')') => {
                self.bump();
                Tok::RParen
            }
            Some(b'~') => {
                self.bump();
                Tok::Neg
            }
            Some(b'/') => {
                self.bump();
                if self.peek() == Some(b'\\') {
                    self.bump();
                    Tok::And
                } else {
                    return Err(self.error_here("`/`".into(), vec!["`/\\`"]));
                }
            }
            Some(b'\\') => {
                self.bump();
                if self.peek() == Some(b'/') {
                    self.bump();
                    Tok::Or
                } else {
                    return Err(self.error_here("`\\`".into(), vec!["`\\/`"]));
                }
            }
            Some(b'-') => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    Tok::Imp
                } else {
                    return Err(self.error_here("`-`".into(), vec!["`->`"]));
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.bump();
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match word {
                    "T" => Tok::Top,
                    "F" => Tok::Bot,
                    _ => Tok::Ident(word.to_string()),
                }
            }
            Some(c) => {
                let found = format!("`{}`", char::from(c));
                return Err(ParseError {
                    line,
                    column: col,
                    found,
                    expected: vec!["a formula token"],
                });
            }
        };
        Ok((tok, line, col))
    }
}

struct Parser {
    tokens: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let (tok, line, col) = &self.tokens[self.pos];
        ParseError {
            line: *line,
            column: *col,
            found: tok.describe(),
            expected,
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or_expr()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.formula()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or_expr(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and_expr()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and_expr()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and_expr(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Neg {
            self.bump();
            let inner = self.unary()?;
            return Ok(Formula::neg(inner));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(name) => {
                self.bump();
                debug_assert!(is_identifier(&name));
                Ok(Formula::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                if *self.peek() == Tok::RParen {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(self.error(vec!["`)`"]))
                }
            }
            _ => Err(self.error(vec!["`T`", "`F`", "an identifier", "`~`", "`(`"])),
        }
    }
}

/// Parse a formula from text. Fails with position and expected-token
/// information on the first offending token.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    loop {
        let t = lexer.next_token()?;
        let eof = t.0 == Tok::Eof;
        tokens.push(t);
        if eof {
            break;
        }
    }
    let mut parser = Parser { tokens, pos: 0 };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(vec!["`/\\`", "`\\/`", "`->`", "end of input"]));
    }
    Ok(f)
}
