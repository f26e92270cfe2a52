//! Recursive-descent parser for polynomial text.
//!
//! Grammar (whitespace is insignificant, implicit multiplication is not
//! allowed):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Int(n) => format!("integer `{n}`"),
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        if ch.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(i, c)) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            let n: BigInt = text[pos..end].parse().expect("digits parse");
            out.push((pos, Token::Int(n)));
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let mut end = pos;
            while let Some(&(i, c)) = chars.peek() {
                if !(c.is_alphanumeric() || c == '_' || c == '\'') {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            out.push((pos, Token::Ident(text[pos..end].to_string())));
            continue;
        }
        let tok = match ch {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            _ => {
                return Err(Error::Syntax {
                    position: pos,
                    message: format!("unexpected character `{ch}`"),
                })
            }
        };
        out.push((pos, tok));
        chars.next();
    }
    out.push((text.len(), Token::End));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    variables: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn position(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.position(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.unary()?;
        while *self.peek() == Token::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPolynomial> {
        match self.peek() {
            Token::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Token::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPolynomial> {
        let base = self.atom()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Token::Int(n) => {
                let Ok(e) = u32::try_from(&n) else {
                    return self.error(format!("exponent {n} is too large"));
                };
                self.bump();
                Ok(base.pow(e))
            }
            other => self.error(format!(
                "expected a nonnegative integer exponent, found {}",
                other.describe()
            )),
        }
    }

    fn atom(&mut self) -> Result<IntPolynomial> {
        match self.peek().clone() {
            Token::Int(n) => {
                self.bump();
                Ok(IntPolynomial::constant(self.variables, n))
            }
            Token::Ident(name) => {
                let Some(i) = self.variables.iter().position(|v| *v == name) else {
                    return Err(Error::UnknownVariable(name));
                };
                self.bump();
                Ok(IntPolynomial::var(self.variables, i))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Token::RParen {
                    return self.error(format!("expected `)`, found {}", self.peek().describe()));
                }
                self.bump();
                Ok(inner)
            }
            other => self.error(format!("expected an operand, found {}", other.describe())),
        }
    }
}

/// Parses `text` as a polynomial in the given variables.
pub fn parse_polynomial<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<IntPolynomial> {
    let variables: Vec<String> = variables.iter().map(|v| v.as_ref().to_string()).collect();
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        variables: &variables,
    };
    let poly = parser.expr()?;
    if *parser.peek() != Token::End {
        return parser.error(format!("unexpected {}", parser.peek().describe()));
    }
    Ok(poly)
}

/// Parses an equation `lhs = rhs` (or a bare expression meaning `expr = 0`)
/// into the polynomial `lhs - rhs`.
pub fn parse_equation<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<IntPolynomial> {
    match text.split_once('=') {
        None => parse_polynomial(text, variables),
        Some((lhs, rhs)) => {
            if rhs.contains('=') {
                return Err(Error::Syntax {
                    position: lhs.len() + 1 + rhs.find('=').unwrap_or(0),
                    message: "more than one `=`".into(),
                });
            }
            let l = parse_polynomial(lhs, variables)?;
            let r = parse_polynomial(rhs, variables).map_err(|e| match e {
                Error::Syntax { position, message } => Error::Syntax {
                    position: position + lhs.len() + 1,
                    message,
                },
                other => other,
            })?;
            Ok(&l - &r)
        }
    }
}
