use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{Polynomial, Q, Var};
use crate::Error;

/// Parse a polynomial in the input grammar:
///
/// * coefficients: integers (`3`) or rationals (`-7/2`),
/// * variables `x`, `y`, `z`,
/// * operators `+`, `-`, `*`, exponentiation `^` with integer exponents,
/// * parentheses; whitespace is insignificant.
///
/// Example: `x^2*y^2 + y^2*z^2 + z^2*x^2 - 7/2*x*y*z`.
pub fn parse_polynomial(input: &str) -> crate::Result<Polynomial> {
    let tokens = tokenize(input)?;
    let mut p = Parser { tokens, pos: 0 };
    let poly = p.expr()?;
    if p.pos != p.tokens.len() {
        let t = &p.tokens[p.pos];
        return Err(Error::parse(t.line, t.col, format!("unexpected `{}`", t.kind)));
    }
    Ok(poly)
}

impl FromStr for Polynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Var(v) => write!(f, "{}", v.name()),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Caret => write!(f, "^"),
            Tok::Slash => write!(f, "/"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    kind: Tok,
    line: usize,
    col: usize,
}

fn tokenize(input: &str) -> crate::Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n = BigInt::parse_bytes(digits.as_bytes(), 10)
                    .ok_or_else(|| Error::parse(tl, tc, "invalid integer"))?;
                out.push(Spanned { kind: Tok::Int(n), line: tl, col: tc });
            }
            'x' | 'y' | 'z' => {
                let v = match c {
                    'x' => Var::X,
                    'y' => Var::Y,
                    _ => Var::Z,
                };
                chars.next();
                col += 1;
                out.push(Spanned { kind: Tok::Var(v), line: tl, col: tc });
            }
            '+' | '-' | '*' | '^' | '/' | '(' | ')' => {
                let kind = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                chars.next();
                col += 1;
                out.push(Spanned { kind, line: tl, col: tc });
            }
            other => {
                return Err(Error::parse(tl, tc, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.kind.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> crate::Result<()> {
        let (l, c) = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Error::parse(l, c, format!("expected `{want}`, found `{t}`"))),
            None => Err(Error::parse(l, c, format!("expected `{want}`, found end of input"))),
        }
    }

    fn expr(&mut self) -> crate::Result<Polynomial> {
        let mut neg = false;
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            neg = true;
        } else if let Some(Tok::Plus) = self.peek() {
            self.bump();
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc + t;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc - t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> crate::Result<Polynomial> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            let f = self.factor()?;
            acc = acc * f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> crate::Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let (l, c) = self.here();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::parse(l, c, "exponent out of range"))?;
                    if e > u16::MAX as u32 {
                        return Err(Error::parse(l, c, "exponent out of range"));
                    }
                    Ok(base.pow(e))
                }
                _ => Err(Error::parse(l, c, "expected integer exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> crate::Result<Polynomial> {
        let (l, c) = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => {
                // An integer may continue as a rational literal `n/d`.
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let (dl, dc) = self.here();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return Err(Error::parse(dl, dc, "zero denominator"));
                            }
                            Ok(Polynomial::constant(Q::new(n, d)))
                        }
                        _ => Err(Error::parse(dl, dc, "expected denominator after `/`")),
                    }
                } else {
                    Ok(Polynomial::constant(Q::from_integer(n)))
                }
            }
            Some(Tok::Var(v)) => Ok(Polynomial::var(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(t) => Err(Error::parse(l, c, format!("unexpected `{t}`"))),
            None => Err(Error::parse(l, c, "unexpected end of input")),
        }
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Q, has_vars: bool) -> fmt::Result {
    let abs = c.abs();
    if abs.is_one() && has_vars {
        return Ok(());
    }
    if abs.denom().is_one() {
        write!(f, "{}", abs.numer())?;
    } else {
        write!(f, "{}/{}", abs.numer(), abs.denom())?;
    }
    if has_vars {
        write!(f, "*")?;
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    /// Canonical text form; round-trips through the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms().rev().enumerate() {
            let has_vars = mono.iter().any(|&e| e > 0);
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_coeff(f, c, has_vars)?;
            let mut first = true;
            for v in Var::ALL {
                let e = mono[v.index()];
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{}", v.name())?;
                } else {
                    write!(f, "{}^{}", v.name(), e)?;
                }
            }
        }
        Ok(())
    }
}
