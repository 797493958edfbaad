//! Recursive-descent parser and evaluator for closed-form map formulas.
//!
//! Grammar (whitespace insignificant; `-` may be written U+2212, `*` as
//! `×`, `/` as `÷`):
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := factor (("*" | "/") factor)*
//! factor   := base ("^" exponent)?
//! base     := number | "x" | "(" expr ")"
//! exponent := ["-"] number | "(" ["-"] number ["/" integer] ")"
//! number   := integer | decimal
//! ```
//!
//! `+ - * /` are left-associative, `^` binds tighter than either and its
//! exponent must be a rational literal (so `1/2^2` is `1/(2^2)`, while
//! `x^(3/2)` raises to the literal three-halves). There is no unary minus.
//! Decimal literals become exact rationals. Powers are defined for
//! non-negative bases only; `x^(p/2)` evaluates through `sqrt` so that
//! half-integer powers of perfect squares stay exact in `f64`.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    X,
    Const(Rational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    /// (token, byte offset of its first character)
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut toks = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        let tok = match ch {
            c if c.is_whitespace() => {
                it.next();
                continue;
            }
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' | '\u{d7}' => Tok::Star,
            '/' | '\u{f7}' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'x' => Tok::X,
            c if c.is_ascii_digit() || c == '.' => {
                let start = pos;
                let mut end = pos;
                let mut saw_dot = false;
                while let Some(&(p, c2)) = it.peek() {
                    if c2.is_ascii_digit() || (c2 == '.' && !saw_dot) {
                        saw_dot |= c2 == '.';
                        end = p + c2.len_utf8();
                        it.next();
                    } else {
                        break;
                    }
                }
                let text = &src[start..end];
                let value: Rational = text.parse().map_err(|_| Error::Expr {
                    pos: start,
                    msg: format!("bad number literal {text:?}"),
                })?;
                toks.push((Tok::Num(value), start));
                continue;
            }
            other => {
                return Err(Error::Expr {
                    pos,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        it.next();
        toks.push((tok, pos));
    }
    Ok(toks)
}

struct Parser<'a> {
    lx: Lexer<'a>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.lx
            .toks
            .get(self.at)
            .map(|&(_, p)| p)
            .unwrap_or(self.lx.src.len())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.lx.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += t.is_some() as usize;
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Expr {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let exp = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Num(_)) => {
                if let Some(Tok::Num(v)) = self.bump() {
                    Ok(Expr::Const(v))
                } else {
                    unreachable!()
                }
            }
            Some(Tok::X) => {
                self.bump();
                Ok(Expr::X)
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.err("expected a number, 'x', or '('")),
        }
    }

    /// A rational literal, optionally signed and optionally parenthesized.
    /// The fraction form `p/q` is only an exponent inside parentheses:
    /// `x^(3/2)` is a three-halves power, while in `x^3/2` the `^` binds
    /// tighter and the expression is an ordinary quotient.
    fn exponent(&mut self) -> Result<Rational> {
        let parens = self.peek() == Some(&Tok::LParen);
        if parens {
            self.bump();
        }
        let negative = self.peek() == Some(&Tok::Minus);
        if negative {
            self.bump();
        }
        let bad = |p: &Self| p.err("exponent must be a rational literal");
        let mut value = match self.peek() {
            Some(Tok::Num(_)) => match self.bump() {
                Some(Tok::Num(v)) => v,
                _ => unreachable!(),
            },
            _ => return Err(bad(self)),
        };
        if parens && self.peek() == Some(&Tok::Slash) {
            self.bump();
            let den = match self.peek() {
                Some(Tok::Num(d)) if d.is_integer() && d.is_positive() => d.clone(),
                _ => return Err(self.err("exponent denominator must be a positive integer")),
            };
            self.bump();
            if !value.is_integer() {
                return Err(bad(self));
            }
            value = &value / &den;
        }
        if negative {
            value = -value;
        }
        if parens {
            self.expect(Tok::RParen, "')' closing the exponent")?;
        }
        Ok(value)
    }
}

/// Parse a formula in the grammar above.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Expr {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        lx: Lexer { src, toks },
        at: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// `x^(p/q)` for `x >= 0`. Integer exponents use repeated multiplication;
/// half-integer exponents go through `sqrt` (exact for perfect squares);
/// everything else uses `powf`.
fn pow_rational(x: f64, exp: &Rational) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "negative base {x} for fractional power"
        )));
    }
    if x == 0.0 && exp.is_negative() {
        return Err(Error::Domain("zero base with negative exponent".into()));
    }
    if exp.is_integer() {
        let n = exp
            .numer()
            .try_into()
            .map_err(|_| Error::Domain("exponent too large".into()))?;
        return Ok(x.powi(n));
    }
    if *exp.denom() == 2.into() {
        let n: i32 = exp
            .numer()
            .try_into()
            .map_err(|_| Error::Domain("exponent too large".into()))?;
        return Ok(x.sqrt().powi(n));
    }
    Ok(x.powf(exp.to_f64()))
}

impl Expr {
    pub fn eval_f64(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::X => x,
            Expr::Const(c) => c.to_f64(),
            Expr::Add(a, b) => a.eval_f64(x)? + b.eval_f64(x)?,
            Expr::Sub(a, b) => a.eval_f64(x)? - b.eval_f64(x)?,
            Expr::Mul(a, b) => a.eval_f64(x)? * b.eval_f64(x)?,
            Expr::Div(a, b) => {
                let den = b.eval_f64(x)?;
                if den == 0.0 {
                    return Err(Error::Domain(format!("division by zero at x = {x}")));
                }
                a.eval_f64(x)? / den
            }
            Expr::Pow(a, e) => pow_rational(a.eval_f64(x)?, e)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("non-finite value at x = {x}")))
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            Expr::X => 4,
            // A fraction or negative constant prints with an operator in it,
            // so it parenthesizes like the corresponding operation.
            Expr::Const(c) => {
                if c.is_integer() && !c.is_negative() {
                    4
                } else {
                    2
                }
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Expr::X => write!(f, "x")?,
            Expr::Const(c) => {
                if c.is_negative() {
                    // The grammar has no unary minus; render through
                    // subtraction so the text re-parses.
                    write!(f, "0-{}", c.abs())?;
                } else {
                    write!(f, "{c}")?;
                }
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "+")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "-")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Pow(a, e) => {
                a.fmt_prec(f, 4)?;
                if e.is_integer() && !e.is_negative() {
                    write!(f, "^{e}")?;
                } else {
                    write!(f, "^({e})")?;
                }
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
