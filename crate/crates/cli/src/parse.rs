//! Polynomial expressions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := identifier | int | int '/' int | '(' expr ')'
//! ```

use hensel_rewrite::{Field, Polynomial};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("zero denominator at byte {offset}")]
    ZeroDenominator { offset: usize },
    #[error("exponent too large at byte {offset}")]
    ExponentOverflow { offset: usize },
    #[error("line {line}: {message}")]
    Problem { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Int(src[start..i].parse().expect("ascii digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: vec!["a token"],
                    found: format!("character {ch:?}"),
                });
            }
        };
        toks.push((tok, start));
        i += 1;
    }
    toks.push((Tok::End, src.len()));
    Ok(toks)
}

struct Parser<'a, F: Field> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
    ctx: &'a F::Ctx,
}

const BASE_START: &[&str] = &["identifier", "number", "'('"];

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&'static str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial<F>, ParseError> {
        let negate = *self.peek() == Tok::Minus;
        if negate {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.negated();
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<F>, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let Tok::Int(k) = self.peek().clone() else {
            return self.fail(&["exponent"]);
        };
        let at = self.offset();
        self.bump();
        let k: u32 = k.try_into().map_err(|_| ParseError::ExponentOverflow { offset: at })?;
        Ok(base.pow(k))
    }

    fn base(&mut self) -> Result<Polynomial<F>, ParseError> {
        let n = self.vars.len();
        match self.peek().clone() {
            Tok::Ident(name) => {
                let at = self.offset();
                self.bump();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::var(n, i, self.ctx)),
                    None => Err(ParseError::UnknownIdentifier { name, offset: at }),
                }
            }
            Tok::Int(num) => {
                self.bump();
                let mut den = BigInt::from(1);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let at = self.offset();
                    match self.peek().clone() {
                        Tok::Int(d) => {
                            self.bump();
                            den = d;
                        }
                        _ => return self.fail(&["number"]),
                    }
                    let c = F::from_ratio(self.ctx, &num, &den).ok_or(ParseError::ZeroDenominator { offset: at })?;
                    return Ok(Polynomial::constant(n, c));
                }
                let c = F::from_ratio(self.ctx, &num, &den).expect("unit denominator");
                Ok(Polynomial::constant(n, c))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail(&["')'", "operator"]);
                }
                self.bump();
                Ok(inner)
            }
            _ => self.fail(BASE_START),
        }
    }
}

/// Parses `src` into an expanded polynomial in `vars`.
pub fn parse_expression<F: Field>(src: &str, vars: &[String], ctx: &F::Ctx) -> Result<Polynomial<F>, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        vars,
        ctx,
    };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["operator", "end of input"]);
    }
    Ok(poly)
}

/// A scalar literal such as `-3` or `2/7`.
pub fn parse_scalar<F: Field>(src: &str, ctx: &F::Ctx) -> Result<F, ParseError> {
    let p = parse_expression::<F>(src, &[], ctx)?;
    Ok(p.constant_term())
}
