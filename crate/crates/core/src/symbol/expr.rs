//! Parser for rational expressions in t with complex literals.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number 'i'? | 'i' | 't' | '(' expr ')'
//! integer:= ('+' | '-')? digits | '(' ('+' | '-')? digits ')'
//! ```

use super::poly::RationalFn;
use crate::error::{Error, Result};
use crate::linalg::C64;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    T,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        let (l0, c0) = (line, col);
        if ch == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if ch.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        let simple = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            't' => Some(Tok::T),
            'i' => Some(Tok::Imag(1.0)),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token {
                tok,
                line: l0,
                column: c0,
            });
            k += 1;
            col += 1;
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    k = j;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            let text: String = chars[start..k].iter().collect();
            let value: f64 = text
                .parse()
                .map_err(|_| err(l0, c0, format!("malformed number '{text}'")))?;
            col += k - start;
            let tok = if k < chars.len() && chars[k] == 'i' {
                k += 1;
                col += 1;
                Tok::Imag(value)
            } else {
                Tok::Num(value)
            };
            out.push(Token {
                tok,
                line: l0,
                column: c0,
            });
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character '{ch}'")));
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RationalFn> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFn> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    let op = self.bump();
                    let rhs = self.unary()?;
                    acc = acc
                        .div(&rhs)
                        .ok_or_else(|| err(op.line, op.column, "division by an identically zero denominator"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFn> {
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFn> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let caret = self.bump();
        let n = self.integer()?;
        base.powi(n).ok_or_else(|| {
            err(
                caret.line,
                caret.column,
                "negative power of an identically zero expression",
            )
        })
    }

    fn integer(&mut self) -> Result<i64> {
        let paren = self.peek().tok == Tok::LParen;
        if paren {
            self.bump();
        }
        let mut sign = 1;
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                sign = -1;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let tok = self.bump();
        let n = match tok.tok {
            Tok::Num(v) if v.fract() == 0.0 && v.abs() <= 64.0 => v as i64 * sign,
            _ => {
                return Err(err(tok.line, tok.column, "exponent must be an integer in [-64, 64]"));
            }
        };
        if paren {
            self.expect_rparen()?;
        }
        Ok(n)
    }

    fn expect_rparen(&mut self) -> Result<()> {
        let tok = self.bump();
        if tok.tok == Tok::RParen {
            Ok(())
        } else {
            Err(err(tok.line, tok.column, "expected ')'"))
        }
    }

    fn atom(&mut self) -> Result<RationalFn> {
        let tok = self.bump();
        match tok.tok {
            Tok::Num(v) => Ok(RationalFn::constant(C64::new(v, 0.0))),
            Tok::Imag(v) => Ok(RationalFn::constant(C64::new(0.0, v))),
            Tok::T => Ok(RationalFn::t()),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::End => Err(err(tok.line, tok.column, "unexpected end of expression")),
            other => Err(err(tok.line, tok.column, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses one entry expression into a rational function of t.
pub fn parse_rational(src: &str) -> Result<RationalFn> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let out = p.expr()?;
    let tail = p.peek().clone();
    if tail.tok != Tok::End {
        return Err(err(
            tail.line,
            tail.column,
            format!("unexpected trailing token {:?}", tail.tok),
        ));
    }
    if out.den.is_zero() {
        return Err(err(1, 1, "identically zero denominator"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    #[test]
    fn zero_and_pole_of_moebius() {
        let f = parse_rational("(t + 1i)/(t - 2i)").unwrap();
        let (z, p) = f.zeros_and_poles();
        assert!((z[0] + I).norm() < 1e-12);
        assert!((p[0] - 2.0 * I).norm() < 1e-12);
    }

    #[test]
    fn precedence_and_literals() {
        let f = parse_rational("-t^2 + 2.5i*t - 1e-1/(3)").unwrap();
        let t = C64::new(0.7, -0.2);
        let want = -t * t + C64::new(0.0, 2.5) * t - 0.1 / 3.0;
        assert!((f.eval(t) - want).norm() < 1e-14);
        let g = parse_rational("(t^2+1)^(-1)*i").unwrap();
        assert!((g.eval(C64::new(1.0, 0.0)) - 0.5 * I).norm() < 1e-15);
    }

    #[test]
    fn zero_denominator_rejected() {
        match parse_rational("1/(t - t)") {
            Err(Error::Parse { line: 1, column: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagnostics_carry_position() {
        match parse_rational("(t + 1)\n * sin(t)") {
            Err(Error::Parse { line: 2, column: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_rational("(t + 1").is_err());
        assert!(parse_rational("t^1.5").is_err());
        assert!(parse_rational("t t").is_err());
    }
}
