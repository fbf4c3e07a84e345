//! Polynomial grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' int)?
//! atom   := int | var | 'tK' | '(' expr ')'
//! var    := 'xI_[d1,...,dm]'          (algebraic syntax)
//!         | 'd[d1,...,dm]' 'xI' | 'xI' (differential syntax)
//! ```
//!
//! Division is only allowed by elements of `K`, which makes `p/q` the
//! rational literal. The lexer also knows the connectives used by the
//! differential formula grammar.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Context, DiffVar, Polynomial, Var};
use crate::coeff::{Coefficient, FieldMode};
use crate::error::{Error, Result};
use crate::indexcomb::MultiIndex;

/// How `x_i^ξ` is spelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Syntax {
    /// `x1_[2,0]`
    Algebraic,
    /// `d[2,0]x1`, with bare `x1` for the zero index
    Differential,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    Int(BigInt),
    X { i: u32, xi: Option<Vec<u32>> },
    D { xi: Vec<u32>, i: u32 },
    T(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    Neq,
    And,
    Or,
    Not,
    End,
}

pub(crate) struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    pub(crate) fn tokenize(src: &'a str) -> Result<Vec<(usize, Token)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            let start = lx.pos;
            let tok = lx.next_token()?;
            let end = tok == Token::End;
            out.push((start, tok));
            if end {
                return Ok(out);
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        let at = self.pos;
        let d = self
            .digits()
            .ok_or_else(|| Error::syntax(at, format!("expected {what}")))?;
        d.parse()
            .map_err(|_| Error::syntax(at, format!("{what} `{d}` is too large")))
    }

    /// `[d1,...,dm]`, starting at the opening bracket.
    fn index_list(&mut self) -> Result<Vec<u32>> {
        let open = self.pos;
        if self.bump() != Some('[') {
            return Err(Error::syntax(open, "expected `[`"));
        }
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Err(Error::syntax(open, "unclosed `[`"));
            }
            out.push(self.small_int("index entry")?);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(']') => return Ok(out),
                None => return Err(Error::syntax(open, "unclosed `[`")),
                Some(c) => {
                    return Err(Error::syntax(
                        self.pos - c.len_utf8(),
                        format!("unexpected `{c}` in index list"),
                    ))
                }
            }
        }
    }

    fn next_token(&mut self) -> Result<Token> {
        let start = self.pos;
        let Some(c) = self.bump() else {
            return Ok(Token::End);
        };
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '≠' => Token::Neq,
            '∧' => Token::And,
            '∨' => Token::Or,
            '¬' => Token::Not,
            '=' => {
                if self.peek() == Some('=') {
                    self.bump();
                }
                Token::Eq
            }
            '!' => {
                if self.peek() == Some('=') {
                    self.bump();
                    Token::Neq
                } else {
                    Token::Not
                }
            }
            '&' => {
                if self.peek() == Some('&') {
                    self.bump();
                }
                Token::And
            }
            '|' => {
                if self.peek() == Some('|') {
                    self.bump();
                }
                Token::Or
            }
            c if c.is_ascii_digit() => {
                self.pos = start;
                let d = self.digits().expect("at least one digit");
                Token::Int(d.parse().expect("decimal digits"))
            }
            'x' => {
                let i = self.small_int("coordinate index after `x`")?;
                if self.src[self.pos..].starts_with("_[") {
                    self.bump();
                    Token::X {
                        i,
                        xi: Some(self.index_list()?),
                    }
                } else {
                    Token::X { i, xi: None }
                }
            }
            't' if self.peek().is_some_and(|c| c.is_ascii_digit()) => {
                Token::T(self.small_int("base variable index")? as usize)
            }
            'd' if self.peek() == Some('[') => {
                let xi = self.index_list()?;
                self.skip_ws();
                let at = self.pos;
                if self.bump() != Some('x') {
                    return Err(Error::syntax(at, "expected `x` after derivative operator"));
                }
                let i = self.small_int("coordinate index after `x`")?;
                Token::D { xi, i }
            }
            c if c.is_ascii_alphabetic() => {
                self.pos = start;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.bump();
                }
                match &self.src[start..self.pos] {
                    "and" => Token::And,
                    "or" => Token::Or,
                    "not" => Token::Not,
                    word => return Err(Error::UnknownVariable(word.to_string())),
                }
            }
            c => return Err(Error::syntax(start, format!("unexpected character `{c}`"))),
        };
        Ok(tok)
    }
}

pub(crate) struct Parser {
    toks: Vec<(usize, Token)>,
    at: usize,
    syntax: Syntax,
    m: usize,
    mode: FieldMode,
    /// Upper bound on coordinate indices, when known.
    n: Option<usize>,
}

impl Parser {
    pub(crate) fn new(
        src: &str,
        syntax: Syntax,
        m: usize,
        mode: FieldMode,
        n: Option<usize>,
    ) -> Result<Self> {
        Ok(Parser {
            toks: Lexer::tokenize(src)?,
            at: 0,
            syntax,
            m,
            mode,
            n,
        })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.toks[self.at].1
    }

    pub(crate) fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    pub(crate) fn checkpoint(&self) -> usize {
        self.at
    }

    pub(crate) fn restore(&mut self, at: usize) {
        self.at = at;
    }

    pub(crate) fn advance(&mut self) -> Token {
        let t = self.toks[self.at].1.clone();
        if t != Token::End {
            self.at += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(Error::syntax(self.pos(), format!("expected {what}")))
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            Token::End => Ok(()),
            _ => Err(Error::syntax(self.pos(), "unexpected trailing input")),
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.advance();
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.advance();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.advance();
                    acc = &acc * &self.factor()?;
                }
                Token::Slash => {
                    self.advance();
                    let at = self.pos();
                    let divisor = self.factor()?;
                    let c = divisor.as_constant().ok_or_else(|| {
                        Error::syntax(at, "division by a polynomial in the x variables")
                    })?;
                    let inv = c.inv().map_err(|_| Error::syntax(at, "division by zero"))?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        if *self.peek() == Token::Minus {
            self.advance();
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if *self.peek() == Token::Caret {
            self.advance();
            let at = self.pos();
            match self.advance() {
                Token::Int(e) => {
                    let e = e
                        .to_u32()
                        .ok_or_else(|| Error::syntax(at, "exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::syntax(at, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.pos();
        match self.advance() {
            Token::Int(v) => Ok(Polynomial::constant(Coefficient::from_bigint(v))),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::T(k) => {
                if self.mode == FieldMode::Constants {
                    return Err(Error::UnknownVariable(format!(
                        "t{k} (base variables need rational mode)"
                    )));
                }
                if k == 0 || k > self.m {
                    return Err(Error::IndexOutOfRange(format!(
                        "base variable t{k} outside t1..t{}",
                        self.m
                    )));
                }
                Ok(Polynomial::constant(Coefficient::base_var(k)))
            }
            Token::X { i, xi } => {
                let xi = match (self.syntax, xi) {
                    (Syntax::Algebraic, Some(xi)) => xi,
                    (Syntax::Algebraic, None) => {
                        return Err(Error::syntax(at, format!("expected `_[` after `x{i}`")))
                    }
                    (Syntax::Differential, None) => vec![0; self.m],
                    (Syntax::Differential, Some(_)) => {
                        return Err(Error::syntax(
                            at,
                            format!("write derivatives of x{i} as `d[...]x{i}`"),
                        ))
                    }
                };
                self.variable(i, xi)
            }
            Token::D { xi, i } => match self.syntax {
                Syntax::Differential => self.variable(i, xi),
                Syntax::Algebraic => Err(Error::syntax(
                    at,
                    format!("write coordinates as `x{i}_[...]` here"),
                )),
            },
            Token::End => Err(Error::syntax(at, "unexpected end of input")),
            other => Err(Error::syntax(at, format!("unexpected token {other:?}"))),
        }
    }

    fn variable(&self, i: u32, xi: Vec<u32>) -> Result<Polynomial> {
        if xi.len() != self.m {
            return Err(Error::IndexOutOfRange(format!(
                "x{i} has a multi-index of length {}, expected {}",
                xi.len(),
                self.m
            )));
        }
        if i == 0 || self.n.is_some_and(|n| i as usize > n) {
            return Err(Error::IndexOutOfRange(format!(
                "coordinate x{i} outside x1..x{}",
                self.n.unwrap_or(0)
            )));
        }
        Ok(Polynomial::var(Var::X(DiffVar::new(
            i,
            MultiIndex::new(xi),
        ))))
    }
}

/// Parses `text` in the algebraic syntax.
pub fn parse_poly(text: &str, ctx: &Context) -> Result<Polynomial> {
    parse_poly_with(text, ctx, Syntax::Algebraic)
}

pub fn parse_poly_with(text: &str, ctx: &Context, syntax: Syntax) -> Result<Polynomial> {
    let mut p = Parser::new(text, syntax, ctx.m, ctx.mode, Some(ctx.n))?;
    let out = p.expr()?;
    p.expect_end()?;
    Ok(out)
}
