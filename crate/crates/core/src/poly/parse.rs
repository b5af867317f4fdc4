//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | identifier | '(' expr ')'
//! exponent := integer | '(' ('+' | '-')? integer ')'
//! ```
//!
//! Division is accepted only by a nonzero constant, which is what the printer
//! emits for non-integral rational coefficients (`3/2*x`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::field::Field;

use super::{PolyError, Polynomial, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent")]
    NegativeExponent,
    #[error("exponent must be a nonnegative integer")]
    NonIntegerExponent,
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("only integer literals are allowed")]
    NonIntegerLiteral,
    #[error("unexpected character `{0}`")]
    InvalidCharacter(char),
    #[error("unexpected `{0}`")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("division is only allowed by a nonzero constant")]
    InvalidDivision,
    #[error("{0}")]
    Arithmetic(PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Decimal,
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Int(v) => v.to_string(),
            Token::Decimal => "decimal literal".into(),
            Token::Ident(s) => s.clone(),
            Token::Plus => "+".into(),
            Token::Minus => "-".into(),
            Token::Star => "*".into(),
            Token::Slash => "/".into(),
            Token::Caret => "^".into(),
            Token::LParen => "(".into(),
            Token::RParen => ")".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = input[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    out.push((start, Token::Decimal));
                } else {
                    let v: BigInt = input[start..i].parse().expect("digits parse");
                    out.push((start, Token::Int(v)));
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(input[start..i].to_string())));
                continue;
            }
            other => {
                return Err(ParseError { position: start, kind: ParseErrorKind::InvalidCharacter(other) })
            }
        };
        out.push((start, tok));
        i += c.len_utf8();
    }
    out.push((input.len(), Token::End));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    vars: &'a Arc<VarTable>,
    field: Field,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> (usize, Token) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, position: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { position, kind }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Token::End => self.err(self.offset(), ParseErrorKind::UnexpectedEnd),
            Token::Decimal => self.err(self.offset(), ParseErrorKind::NonIntegerLiteral),
            t => self.err(self.offset(), ParseErrorKind::UnexpectedToken(t.describe())),
        }
    }

    fn arith<T>(&self, at: usize, r: Result<T, PolyError>) -> Result<T, ParseError> {
        r.map_err(|e| self.err(at, ParseErrorKind::Arithmetic(e)))
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            let at = self.offset();
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.arith(at, acc.add(&rhs))?;
                }
                Token::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.arith(at, acc.sub(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let at = self.offset();
            match self.peek() {
                Token::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.arith(at, acc.mul(&rhs))?;
                }
                Token::Slash => {
                    self.bump();
                    let rhs_at = self.offset();
                    let rhs = self.unary()?;
                    let inv = rhs
                        .as_constant()
                        .and_then(|c| c.inverse())
                        .ok_or_else(|| self.err(rhs_at, ParseErrorKind::InvalidDivision))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Token::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Token::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        let at = self.offset();
        self.bump();
        let exp = self.exponent()?;
        self.arith(at, base.pow(exp))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let at = self.offset();
        let (value, negative) = match self.bump().1 {
            Token::Int(v) => (v, false),
            Token::Minus => {
                return Err(self.err(at, ParseErrorKind::NegativeExponent));
            }
            Token::LParen => {
                let sign = match self.peek() {
                    Token::Minus => {
                        self.bump();
                        true
                    }
                    Token::Plus => {
                        self.bump();
                        false
                    }
                    _ => false,
                };
                let v = match self.bump().1 {
                    Token::Int(v) => v,
                    _ => return Err(self.err(at, ParseErrorKind::NonIntegerExponent)),
                };
                if *self.peek() != Token::RParen {
                    return Err(self.err(at, ParseErrorKind::NonIntegerExponent));
                }
                self.bump();
                (v, sign)
            }
            Token::End => return Err(self.err(at, ParseErrorKind::UnexpectedEnd)),
            _ => return Err(self.err(at, ParseErrorKind::NonIntegerExponent)),
        };
        if negative && !value.is_zero() {
            return Err(self.err(at, ParseErrorKind::NegativeExponent));
        }
        value.to_u32().ok_or_else(|| self.err(at, ParseErrorKind::ExponentTooLarge))
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Token::Int(v) => {
                self.bump();
                Ok(Polynomial::constant(self.vars.clone(), self.field, self.field.from_bigint(&v)))
            }
            Token::Ident(name) => {
                self.bump();
                let idx = self
                    .vars
                    .index_of(&name)
                    .ok_or_else(|| self.err(at, ParseErrorKind::UnknownVariable(name.clone())))?;
                Ok(Polynomial::variable(self.vars.clone(), self.field, idx))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Token::RParen {
                    return Err(self.unexpected());
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `text` into its canonical expanded form over `vars` and `field`.
pub fn parse_polynomial(text: &str, vars: &Arc<VarTable>, field: Field) -> Result<Polynomial, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, vars, field };
    let p = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.unexpected());
    }
    Ok(p)
}
