//! A small expression language over a [`RingCtx`].
//!
//! ```text
//! expr   = term { ("+" | "-") term } ;
//! term   = unary { ("*" | "/") unary } ;
//! unary  = "-" unary | power ;
//! power  = atom [ "^" integer ] ;
//! atom   = number | symbol | "(" expr ")" ;
//! number = digits [ "/" digits ] ;
//! symbol = letter { letter | digit | "'" } ;
//! ```
//!
//! A literal `p/q` has no spaces, and a number directly after `^` is read as
//! an integer, so `c^2/8` divides by eight. Positions in errors are 1-based character columns.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::chow::{intersection_degree, ChowError, RingCtx, RingElem};
use crate::exact::{fmt_rat, Rat};

/// Maximum nesting depth of a parsed expression.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("column {pos}: unexpected character {ch:?}")]
    UnknownChar { ch: char, pos: usize },
    #[error("column {pos}: zero denominator")]
    ZeroDenominator { pos: usize },
    #[error("column {pos}: unexpected {found}")]
    Unexpected { found: String, pos: usize },
    #[error("column {pos}: unexpected end of input")]
    UnexpectedEnd { pos: usize },
    #[error("column {pos}: unbalanced parenthesis")]
    Unbalanced { pos: usize },
    #[error("column {pos}: exponent must be an integer literal")]
    NonIntegerExponent { pos: usize },
    #[error("column {pos}: expression nested deeper than {MAX_DEPTH}")]
    TooDeep { pos: usize },
    #[error("empty expression")]
    Empty,
    #[error("unbound symbol {0}")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor must be a scalar")]
    NonScalarDivisor,
    #[error("exponent {0} is too large")]
    ExponentTooLarge(BigInt),
    #[error(transparent)]
    Ring(#[from] ChowError),
}

// ---- Tokens ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Symbol,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based column of the first character.
    pub pos: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            '^' => Some(TokenKind::Caret),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Token {
                kind,
                text: c.to_string(),
                pos,
            });
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let after_caret = out.last().is_some_and(|t| t.kind == TokenKind::Caret);
            if !after_caret && i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                let den_start = i + 1;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let den: String = chars[den_start..i].iter().collect();
                if den.bytes().all(|b| b == b'0') {
                    return Err(ExprError::ZeroDenominator { pos: den_start + 1 });
                }
            }
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '\'') {
                i += 1;
            }
        } else {
            return Err(ExprError::UnknownChar { ch: c, pos });
        }
        let kind = if c.is_ascii_digit() {
            TokenKind::Number
        } else {
            TokenKind::Symbol
        };
        out.push(Token {
            kind,
            text: chars[start..i].iter().collect(),
            pos,
        });
    }
    Ok(out)
}

// ---- Syntax tree ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Sym(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) => 1 + a.depth(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Sym(_) => 5,
        }
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    at: usize,
    end_pos: usize,
    depth: usize,
}

pub fn parse(tokens: &[Token]) -> Result<Expr, ExprError> {
    if tokens.is_empty() {
        return Err(ExprError::Empty);
    }
    let last = tokens.last().expect("nonempty");
    let mut p = Parser {
        tokens,
        at: 0,
        end_pos: last.pos + last.text.chars().count(),
        depth: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) if t.kind == TokenKind::RParen => Err(ExprError::Unbalanced { pos: t.pos }),
        Some(t) => Err(unexpected(t)),
    }
}

/// Tokenizes and parses in one step.
pub fn parse_str(text: &str) -> Result<Expr, ExprError> {
    parse(&tokenize(text)?)
}

fn unexpected(t: &Token) -> ExprError {
    ExprError::Unexpected {
        found: format!("{:?}", t.text),
        pos: t.pos,
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn next_is(&self, kind: TokenKind) -> bool {
        self.peek().is_some_and(|t| t.kind == kind)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.at);
        self.at += 1;
        t
    }

    fn enter(&mut self) -> Result<(), ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let pos = self.peek().map_or(self.end_pos, |t| t.pos);
            return Err(ExprError::TooDeep { pos });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(t) = self.peek() {
            let kind = t.kind;
            if kind != TokenKind::Plus && kind != TokenKind::Minus {
                break;
            }
            self.bump();
            let rhs = self.term()?;
            lhs = if kind == TokenKind::Plus {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
            self.check_depth(&lhs)?;
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(t) = self.peek() {
            let kind = t.kind;
            if kind != TokenKind::Star && kind != TokenKind::Slash {
                break;
            }
            self.bump();
            let rhs = self.unary()?;
            lhs = if kind == TokenKind::Star {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
            self.check_depth(&lhs)?;
        }
        Ok(lhs)
    }

    fn check_depth(&self, e: &Expr) -> Result<(), ExprError> {
        if self.depth + e.depth() > MAX_DEPTH {
            let pos = self.peek().map_or(self.end_pos, |t| t.pos);
            return Err(ExprError::TooDeep { pos });
        }
        Ok(())
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.next_is(TokenKind::Minus) {
            self.bump();
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.next_is(TokenKind::Caret) {
            return Ok(base);
        }
        let caret_pos = self.bump().expect("peeked").pos;
        match self.bump() {
            Some(t) if t.kind == TokenKind::Number && !t.text.contains('/') => {
                let e: u32 = t
                    .text
                    .parse()
                    .map_err(|_| ExprError::ExponentTooLarge(t.text.parse().unwrap_or_default()))?;
                if self.next_is(TokenKind::Caret) {
                    return Err(unexpected(self.peek().expect("peeked")));
                }
                Ok(Expr::Pow(Box::new(base), e))
            }
            Some(t) => Err(ExprError::NonIntegerExponent { pos: t.pos }),
            None => Err(ExprError::UnexpectedEnd {
                pos: self.end_pos.max(caret_pos + 1),
            }),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let end = self.end_pos;
        let Some(t) = self.bump().cloned() else {
            return Err(ExprError::UnexpectedEnd { pos: end });
        };
        match t.kind {
            TokenKind::Number => Ok(Expr::Num(t.text.parse().expect("lexed rational"))),
            TokenKind::Symbol => Ok(Expr::Sym(t.text)),
            TokenKind::LParen => {
                self.enter()?;
                let inner = self.expr()?;
                self.depth -= 1;
                match self.bump() {
                    Some(r) if r.kind == TokenKind::RParen => Ok(inner),
                    Some(r) => Err(unexpected(r)),
                    None => Err(ExprError::Unbalanced { pos: t.pos }),
                }
            }
            TokenKind::RParen => Err(ExprError::Unbalanced { pos: t.pos }),
            _ => Err(unexpected(&t)),
        }
    }
}

// ---- Printing ----

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if e.prec() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Expr::Num(r) => write!(f, "({})", fmt_rat(r)),
            Expr::Sym(s) => f.write_str(s),
            Expr::Neg(a) => {
                f.write_str("-")?;
                wrap(a, 3, f)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                wrap(a, 1, f)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                wrap(b, 2, f)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                wrap(a, 2, f)?;
                // A spaced slash keeps `6 / 5` from reading back as the literal `6/5`.
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { " / " })?;
                wrap(b, 3, f)
            }
            Expr::Pow(a, e) => {
                wrap(a, 5, f)?;
                write!(f, "^{e}")
            }
        }
    }
}

// ---- Evaluation ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(Rat),
    Elem(RingElem),
}

impl Value {
    fn into_elem(self, ctx: &Arc<RingCtx>) -> RingElem {
        match self {
            Value::Scalar(r) => RingElem::scalar(ctx, r),
            Value::Elem(e) => e,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(r) => f.write_str(&fmt_rat(r)),
            Value::Elem(e) => write!(f, "{e}"),
        }
    }
}

pub type Bindings = BTreeMap<String, Value>;

/// Bindings for the two generators of `ctx` under their own names.
pub fn generator_bindings(ctx: &Arc<RingCtx>) -> Bindings {
    let (a, b) = ctx.gen_names();
    let mut out = Bindings::new();
    out.insert(a.to_string(), Value::Elem(RingElem::g1(ctx)));
    out.insert(b.to_string(), Value::Elem(RingElem::g2(ctx)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Value,
    /// Intersection number, when the value is a top-degree class.
    pub degree: Option<Rat>,
    pub notes: Vec<String>,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.degree {
            Some(d) => f.write_str(&fmt_rat(d)),
            None => write!(f, "{}", self.value),
        }
    }
}

fn max_degree(e: &RingElem) -> Option<u32> {
    e.terms().map(|(i, j, _)| u32::from(i) + j).max()
}

struct Evaluator<'a> {
    ctx: &'a Arc<RingCtx>,
    bindings: &'a Bindings,
    notes: Vec<String>,
}

impl Evaluator<'_> {
    fn note_overflow(&mut self, deg: u32) {
        let top = self.ctx.n() + 1;
        if deg > top {
            let msg = format!("a product of degree {deg} exceeds dimension {top} and was taken as zero");
            if !self.notes.contains(&msg) {
                self.notes.push(msg);
            }
        }
    }

    fn eval(&mut self, e: &Expr) -> Result<Value, ExprError> {
        Ok(match e {
            Expr::Num(r) => Value::Scalar(r.clone()),
            Expr::Sym(s) => self
                .bindings
                .get(s)
                .cloned()
                .ok_or_else(|| ExprError::Unbound(s.clone()))?,
            Expr::Neg(a) => match self.eval(a)? {
                Value::Scalar(r) => Value::Scalar(-r),
                Value::Elem(x) => Value::Elem(x.scale(&-Rat::one())),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let sub = matches!(e, Expr::Sub(..));
                match (x, y) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if sub { x - y } else { x + y }),
                    (x, y) => {
                        let (x, y) = (x.into_elem(self.ctx), y.into_elem(self.ctx));
                        Value::Elem(if sub { x.try_sub(&y)? } else { x.try_add(&y)? })
                    }
                }
            }
            Expr::Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
                (Value::Scalar(s), Value::Elem(x)) | (Value::Elem(x), Value::Scalar(s)) => Value::Elem(x.scale(&s)),
                (Value::Elem(x), Value::Elem(y)) => {
                    if let (Some(p), Some(q)) = (max_degree(&x), max_degree(&y)) {
                        self.note_overflow(p + q);
                    }
                    Value::Elem(x.try_mul(&y)?)
                }
            },
            Expr::Div(a, b) => {
                let x = self.eval(a)?;
                let d = match self.eval(b)? {
                    Value::Scalar(d) => d,
                    Value::Elem(y) => y.as_scalar().ok_or(ExprError::NonScalarDivisor)?,
                };
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                match x {
                    Value::Scalar(x) => Value::Scalar(x / d),
                    Value::Elem(x) => Value::Elem(x.scale(&(Rat::one() / d))),
                }
            }
            Expr::Pow(a, k) => match self.eval(a)? {
                Value::Scalar(r) => Value::Scalar(num_traits::pow(r, *k as usize)),
                Value::Elem(x) => {
                    if let Some(p) = max_degree(&x) {
                        self.note_overflow(p.saturating_mul(*k));
                    }
                    Value::Elem(x.pow(*k))
                }
            },
        })
    }
}

/// Evaluates `e` in `ctx`. Scalars and ring elements mix freely; the result
/// is in normal form and, when it is a top-degree class, carries its degree.
pub fn evaluate(e: &Expr, ctx: &Arc<RingCtx>, bindings: &Bindings) -> Result<Evaluation, ExprError> {
    let mut ev = Evaluator {
        ctx,
        bindings,
        notes: Vec::new(),
    };
    let value = ev.eval(e)?;
    let top = ctx.n() + 1;
    let degree = match &value {
        Value::Elem(x) if !x.is_zero() && x.is_homogeneous_of(top) => Some(intersection_degree(x)?),
        _ => None,
    };
    Ok(Evaluation {
        value,
        degree,
        notes: ev.notes,
    })
}
