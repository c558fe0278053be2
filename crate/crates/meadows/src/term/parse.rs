//! Recursive-descent parser for the term grammar.
//!
//! ```text
//! term  := sum
//! sum   := prod (("+" | "-") prod)*
//! prod  := unary (("*" | "|*|" | "/") unary)*
//! unary := "-" unary | atom
//! atom  := NUMBER | "bot" | "+inf" | "-inf" | IDENT | IDENT "(" IDENT ")"
//!        | "log2" "(" term ")" | "s" "(" term ")"
//!        | "cond" "(" term ";" term ";" term ")" | "(" term ")"
//! NUMBER := integer | integer "/" integer   (positive denominator)
//! ```
//!
//! A `NUMBER` of the form `a/b` is recognised only when the three tokens
//! are adjacent (no spaces), so `1/2` is the rational one-half while
//! `1 / 2` divides one by two. `1/0` is never a number (the denominator
//! must be positive) and parses as a division. A unary minus directly on a
//! number folds into a negative literal; `bot`, `inf`, `log2`, `s` and
//! `cond` are recognised contextually and `inf` is reserved.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{Literal, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: found {found}, expected {}", expected.join(" | "))]
pub struct ParseError {
    pub position: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(position: usize, found: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError {
            position,
            found: found.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    SeqStar,
    Slash,
    LParen,
    RParen,
    Semi,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::SeqStar => "`|*|`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            ';' => {
                i += 1;
                Tok::Semi
            }
            '|' => {
                if src[i..].starts_with("|*|") {
                    i += 3;
                    Tok::SeqStar
                } else {
                    return Err(ParseError::new(i, format!("`{c}`"), &["`|*|`"]));
                }
            }
            d if d.is_ascii_digit() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                Tok::Int(src[start..i].parse().expect("digits"))
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(src[start..i].to_string())
            }
            other => {
                return Err(ParseError::new(
                    i,
                    format!("`{other}`"),
                    &["a number", "an identifier", "an operator"],
                ))
            }
        };
        tokens.push(Token { tok, start, end: i });
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    src_len: usize,
}

const ATOM_EXPECTED: &[&str] = &[
    "a number",
    "`bot`",
    "`+inf`",
    "`-inf`",
    "an identifier",
    "`log2(`",
    "`s(`",
    "`cond(`",
    "`(`",
];

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens.get(self.pos + offset)
    }

    fn adjacent(&self, offset: usize) -> bool {
        match (self.peek_at(offset), self.peek_at(offset + 1)) {
            (Some(a), Some(b)) => a.end == b.start,
            _ => false,
        }
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn error_here(&self, expected: &[&str]) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(t.start, t.tok.describe(), expected),
            None => ParseError::new(self.src_len, "end of input", expected),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek().map(|t| &t.tok) == Some(&tok) {
            self.advance();
            Ok(())
        } else {
            Err(self.error_here(&[expected]))
        }
    }

    fn parse_sum(&mut self) -> Result<Term, ParseError> {
        let mut t = self.parse_prod()?;
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Plus) => {
                    self.advance();
                    let rhs = self.parse_prod()?;
                    t = Term::add(t, rhs);
                }
                Some(Tok::Minus) => {
                    self.advance();
                    let rhs = self.parse_prod()?;
                    t = Term::add(t, Term::neg(rhs));
                }
                _ => return Ok(t),
            }
        }
    }

    fn parse_prod(&mut self) -> Result<Term, ParseError> {
        let first = self.parse_unary()?.0;
        self.parse_prod_tail(first)
    }

    fn parse_prod_tail(&mut self, mut t: Term) -> Result<Term, ParseError> {
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Star) => {
                    self.advance();
                    let rhs = self.parse_unary()?.0;
                    t = Term::mul(t, rhs);
                }
                Some(Tok::SeqStar) => {
                    self.advance();
                    let rhs = self.parse_unary()?.0;
                    t = Term::seqmul(t, rhs);
                }
                Some(Tok::Slash) => {
                    self.advance();
                    let rhs = self.parse_unary()?.0;
                    t = Term::div(t, rhs);
                }
                _ => return Ok(t),
            }
        }
    }

    /// Returns the term and whether it is a bare (unparenthesised) rational
    /// literal, which a directly preceding unary minus folds into.
    fn parse_unary(&mut self) -> Result<(Term, bool), ParseError> {
        if self.peek().map(|t| &t.tok) == Some(&Tok::Minus) {
            // `-inf` as one literal when the tokens touch.
            if self.peek_at(1).map(|t| &t.tok) == Some(&Tok::Ident("inf".into()))
                && self.adjacent(0)
            {
                self.advance();
                self.advance();
                return Ok((Term::Const(Literal::NegInf), false));
            }
            self.advance();
            let (inner, bare) = self.parse_unary()?;
            if bare {
                if let Term::Const(Literal::Rational(r)) = inner {
                    return Ok((Term::Const(Literal::Rational(-r)), false));
                }
                unreachable!("bare flag only set for rational literals");
            }
            return Ok((Term::neg(inner), false));
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<(Term, bool), ParseError> {
        let token = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error_here(ATOM_EXPECTED)),
        };
        match token.tok {
            Tok::Int(n) => {
                self.advance();
                // Fraction literal: integer "/" positive-integer, adjacent.
                // After `advance` the slash candidate is at offset 0.
                if let (Some(Tok::Slash), Some(Tok::Int(d))) = (
                    self.peek_at(0).map(|t| &t.tok),
                    self.peek_at(1).map(|t| t.tok.clone()),
                ) {
                    if !d.is_zero()
                        && self.tokens[self.pos - 1].end == self.tokens[self.pos].start
                        && self.adjacent(0)
                    {
                        self.advance();
                        self.advance();
                        let r = BigRational::new(n, d);
                        return Ok((Term::Const(Literal::Rational(r)), true));
                    }
                }
                let r = BigRational::from_integer(n);
                Ok((Term::Const(Literal::Rational(r)), true))
            }
            Tok::Plus => {
                if self.peek_at(1).map(|t| &t.tok) == Some(&Tok::Ident("inf".into()))
                    && self.adjacent(0)
                {
                    self.advance();
                    self.advance();
                    Ok((Term::Const(Literal::PosInf), false))
                } else {
                    Err(self.error_here(ATOM_EXPECTED))
                }
            }
            Tok::LParen => {
                self.advance();
                let t = self.parse_sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok((t, false))
            }
            Tok::Ident(name) => {
                self.advance();
                match name.as_str() {
                    "bot" => Ok((Term::Const(Literal::Bottom), false)),
                    "inf" => Err(ParseError::new(
                        token.start,
                        "`inf`",
                        &["`+inf`", "`-inf`"],
                    )),
                    "log2" if self.peek().map(|t| &t.tok) == Some(&Tok::LParen) => {
                        self.advance();
                        let t = self.parse_sum()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok((Term::log2(t), false))
                    }
                    "s" if self.peek().map(|t| &t.tok) == Some(&Tok::LParen) => {
                        self.advance();
                        let t = self.parse_sum()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok((Term::sign(t), false))
                    }
                    "cond" if self.peek().map(|t| &t.tok) == Some(&Tok::LParen) => {
                        self.advance();
                        let x = self.parse_sum()?;
                        self.expect(Tok::Semi, "`;`")?;
                        let y = self.parse_sum()?;
                        self.expect(Tok::Semi, "`;`")?;
                        let z = self.parse_sum()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok((Term::cond(x, y, z), false))
                    }
                    _ if self.peek().map(|t| &t.tok) == Some(&Tok::LParen) => {
                        self.advance();
                        let label = match self.peek().map(|t| t.tok.clone()) {
                            Some(Tok::Ident(l)) => {
                                self.advance();
                                l
                            }
                            _ => return Err(self.error_here(&["a constant label"])),
                        };
                        self.expect(Tok::RParen, "`)`")?;
                        Ok((Term::fun(name, label), false))
                    }
                    _ => Ok((Term::var(name), false)),
                }
            }
            _ => Err(self.error_here(ATOM_EXPECTED)),
        }
    }
}

/// Parses a term; `parse(print(t))` is structurally equal to `t`.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        src_len: src.len(),
    };
    let t = p.parse_sum()?;
    if p.peek().is_some() {
        return Err(p.error_here(&["end of input", "an operator"]));
    }
    Ok(t)
}
