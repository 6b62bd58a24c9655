//! Text format for polynomials.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' uint)? | '-' factor
//! atom     := rational | var | '(' expr ')'
//! rational := int ('/' uint)?
//! var      := 'T' | 'X' uint
//! ```
//!
//! Binary operators are handled by precedence climbing. Printing is canonical:
//! univariate terms by descending degree, multivariate terms by descending
//! graded-lex order, so `parse(print(p)) == p`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Monomial};
use crate::rat::{format_abs, Rat};
use crate::upoly::UPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    /// `X_k`, `k >= 1`.
    X(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Rat),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Largest `k` among the `X_k` that occur (0 if none).
    pub fn max_var_index(&self) -> u32 {
        match self {
            Expr::Const(_) | Expr::Var(Var::T) => 0,
            Expr::Var(Var::X(k)) => *k,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.max_var_index().max(b.max_var_index()),
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_var_index(),
        }
    }

    pub fn uses_t(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(Var::X(_)) => false,
            Expr::Var(Var::T) => true,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.uses_t() || b.uses_t(),
            Expr::Neg(a) | Expr::Pow(a, _) => a.uses_t(),
        }
    }

    /// Arity inferred from the expression: the largest `X` index, or 1 for an
    /// expression in `T` or a constant.
    pub fn arity(&self) -> usize {
        (self.max_var_index() as usize).max(1)
    }

    fn as_constant(&self) -> Option<Rat> {
        match self {
            Expr::Const(c) => Some(c.clone()),
            Expr::Var(_) => None,
            Expr::Add(a, b) => Some(a.as_constant()? + b.as_constant()?),
            Expr::Mul(a, b) => Some(a.as_constant()? * b.as_constant()?),
            Expr::Neg(a) => Some(-a.as_constant()?),
            Expr::Pow(a, e) => Some(num_traits::pow(a.as_constant()?, *e as usize)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Int(v), start));
                continue;
            }
            b'T' => {
                i += 1;
                if i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    return Err(unknown_ident(text, start));
                }
                out.push((Tok::Var(Var::T), start));
                continue;
            }
            b'X' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i || (i < bytes.len() && bytes[i].is_ascii_alphabetic()) {
                    return Err(unknown_ident(text, start));
                }
                let k: u32 = text[ds..i]
                    .parse()
                    .map_err(|_| err(start, "variable index too large"))?;
                if k == 0 {
                    return Err(err(start, "variable index must be at least 1"));
                }
                out.push((Tok::Var(Var::X(k)), start));
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            c if c.is_ascii_alphabetic() || c == b'_' => return Err(unknown_ident(text, start)),
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character '{ch}'")));
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn unknown_ident(text: &str, start: usize) -> Error {
    let end = text[start..]
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .map_or(text.len(), |n| start + n);
    err(start, format!("unknown identifier '{}'", &text[start..end]))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn binary_prec(tok: &Tok) -> Option<u8> {
        match tok {
            Tok::Plus | Tok::Minus => Some(1),
            Tok::Star => Some(2),
            _ => None,
        }
    }

    /// Precedence climbing over the left-associative binary operators.
    fn expr(&mut self, min_prec: u8) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(prec) = Self::binary_prec(self.peek()) {
            if prec < min_prec {
                break;
            }
            let op = self.bump();
            let rhs = self.expr(prec + 1)?;
            lhs = match op {
                Tok::Plus => Expr::Add(Box::new(lhs), Box::new(rhs)),
                Tok::Minus => Expr::Add(Box::new(lhs), Box::new(Expr::Neg(Box::new(rhs)))),
                Tok::Star => Expr::Mul(Box::new(lhs), Box::new(rhs)),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let at = self.offset();
        let value = match self.peek().clone() {
            Tok::Int(_) => {
                let r = self.rational()?;
                if !r.is_integer() {
                    return Err(err(at, "fractional exponent"));
                }
                r
            }
            Tok::Minus => return Err(err(at, "negative exponent")),
            Tok::LParen => {
                self.bump();
                let inner = self.expr(1)?;
                self.expect(Tok::RParen)?;
                inner
                    .as_constant()
                    .ok_or_else(|| err(at, "exponent must be a nonnegative integer constant"))?
            }
            _ => return Err(err(at, "expected a nonnegative integer exponent")),
        };
        if value.is_negative() {
            return Err(err(at, "negative exponent"));
        }
        if !value.is_integer() {
            return Err(err(at, "fractional exponent"));
        }
        value
            .to_integer()
            .to_u32()
            .ok_or_else(|| err(at, "exponent too large"))
    }

    fn rational(&mut self) -> Result<Rat> {
        let Tok::Int(n) = self.bump() else {
            unreachable!("caller checked for an integer")
        };
        if *self.peek() == Tok::Slash {
            self.bump();
            let at = self.offset();
            let Tok::Int(d) = self.bump() else {
                return Err(err(at, "expected an unsigned integer denominator"));
            };
            if d.is_zero() {
                return Err(err(at, "zero denominator"));
            }
            return Ok(Rat::new(n, d));
        }
        Ok(Rat::from_integer(n))
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(_) => Ok(Expr::Const(self.rational()?)),
            Tok::Var(v) => {
                self.bump();
                Ok(Expr::Var(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr(1)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::End => Err(err(at, "unexpected end of input")),
            t => Err(err(at, format!("unexpected token {}", describe(&t)))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        let at = self.offset();
        let got = self.bump();
        if got != tok {
            return Err(err(
                at,
                format!("expected {}, found {}", describe(&tok), describe(&got)),
            ));
        }
        Ok(())
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("number {v}"),
        Tok::Var(Var::T) => "'T'".into(),
        Tok::Var(Var::X(k)) => format!("'X{k}'"),
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

/// Parse one expression; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr(1)?;
    if *p.peek() != Tok::End {
        let at = p.offset();
        let t = p.peek().clone();
        return Err(err(at, format!("unexpected token {}", describe(&t))));
    }
    Ok(e)
}

pub fn to_upoly(ast: &Expr) -> Result<UPoly> {
    Ok(match ast {
        Expr::Const(c) => UPoly::constant(c.clone()),
        Expr::Var(Var::T) => UPoly::t(),
        Expr::Var(Var::X(k)) => {
            return Err(Error::NotUnivariate(format!("variable X{k} occurs")));
        }
        Expr::Add(a, b) => &to_upoly(a)? + &to_upoly(b)?,
        Expr::Mul(a, b) => &to_upoly(a)? * &to_upoly(b)?,
        Expr::Neg(a) => -to_upoly(a)?,
        Expr::Pow(a, e) => to_upoly(a)?.pow(u64::from(*e)),
    })
}

pub fn to_mpoly(ast: &Expr, arity: usize) -> Result<MPoly> {
    let needed = ast.max_var_index() as usize;
    if needed > arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            found: needed,
        });
    }
    if arity == 0 {
        return Err(Error::invalid("arity must be at least 1"));
    }
    build_mpoly(ast, arity)
}

fn build_mpoly(ast: &Expr, arity: usize) -> Result<MPoly> {
    Ok(match ast {
        Expr::Const(c) => MPoly::constant(arity, c.clone()),
        Expr::Var(Var::T) => {
            return Err(Error::invalid(
                "T is the univariate variable; use X1..Xn in multivariate input",
            ));
        }
        Expr::Var(Var::X(k)) => MPoly::var(arity, *k as usize - 1),
        Expr::Add(a, b) => &build_mpoly(a, arity)? + &build_mpoly(b, arity)?,
        Expr::Mul(a, b) => &build_mpoly(a, arity)? * &build_mpoly(b, arity)?,
        Expr::Neg(a) => -&build_mpoly(a, arity)?,
        Expr::Pow(a, e) => build_mpoly(a, arity)?.pow(u64::from(*e)),
    })
}

pub fn parse_upoly(text: &str) -> Result<UPoly> {
    to_upoly(&parse(text)?)
}

/// Parse a multivariate polynomial; the arity defaults to the largest `X` index.
pub fn parse_mpoly(text: &str, arity: Option<usize>) -> Result<MPoly> {
    let ast = parse(text)?;
    to_mpoly(&ast, arity.unwrap_or_else(|| ast.arity()))
}

fn push_term(out: &mut String, coeff: &Rat, body: &str) {
    let neg = coeff.is_negative();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if body.is_empty() {
        out.push_str(&format_abs(coeff));
    } else if coeff.abs().is_one() {
        out.push_str(body);
    } else {
        out.push_str(&format_abs(coeff));
        out.push('*');
        out.push_str(body);
    }
}

/// Canonical text: `T^2 - 3/2*T + 1`; zero prints as `0`.
pub fn print_upoly(p: &UPoly) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let body = match k {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{k}"),
        };
        push_term(&mut out, c, &body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn monomial_text(m: &Monomial, prefix: &str) -> String {
    m.exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("{prefix}{}", i + 1)
            } else {
                format!("{prefix}{}^{e}", i + 1)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical text in descending graded-lex order: `X1^3 + X1*X2`.
pub fn print_mpoly(p: &MPoly) -> String {
    print_mpoly_with(p, "X")
}

/// Same as [`print_mpoly`] with another variable letter (`Z1`, `Z2`, ...).
pub fn print_mpoly_with(p: &MPoly, prefix: &str) -> String {
    let mut out = String::new();
    for (m, c) in p.terms().rev() {
        push_term(&mut out, c, &monomial_text(m, prefix));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
