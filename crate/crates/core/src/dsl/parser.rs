//! Tokenizer and recursive-descent parser.
//!
//! ```text
//! sum    := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' ['-'] int]
//! atom   := int | 'C' | 'r' | 'n'i | 'x'i | 'gauss' | '(' sum ')'
//!         | 'Pf' '(' sum ')' | 'pv' '(' sum ')'
//!         | 'delta' '[' int ']' '(' sum ')' | 'delta*' ['[' int ']']
//!         | 'delta' | 'D' '[' int (',' int)* ']' 'delta'
//!         | ('dstar'|'dzero') '(' int ',' sum ')'
//!         | 'project' '(' sum ')' | 'moment' '(' sum ')'
//!         | 'pair' '(' sum ',' sum ')'
//! ```
//!
//! `delta*` is a single token unless the character after `*` can start a
//! factor (`delta*n1` multiplies `delta` by `n1`).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::sphere::MultiIndex;

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    C,
    R,
    N(usize),
    X(usize),
    Gauss,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Pf(Box<Expr>),
    Pv(Box<Expr>),
    /// `density δ∗^[order]`; `delta*[q]` has density 1.
    ThickDelta { order: i32, density: Box<Expr> },
    /// `δ` itself.
    Delta,
    /// `D^alpha δ`.
    DeltaDerivative(MultiIndex),
    DStar(usize, Box<Expr>),
    DZero(usize, Box<Expr>),
    Project(Box<Expr>),
    Moment(Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
}

/// Syntax tree node with its source span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

/// A parsed expression together with the dimension it was checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expression {
    pub dim: usize,
    pub root: Expr,
}

/// Positioned syntax error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    /// 1-based line.
    pub line: usize,
    /// 1-based column, in characters.
    pub column: usize,
    /// The offending source line.
    pub source_line: String,
}

impl ParseError {
    fn at(source: &str, offset: usize, message: impl Into<String>) -> Self {
        let offset = offset.min(source.len());
        let before = &source[..offset];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |p| p + 1);
        let column = source[line_start..offset].chars().count() + 1;
        let source_line = source[line_start..].lines().next().unwrap_or("").to_string();
        Self {
            message: message.into(),
            line,
            column,
            source_line,
        }
    }

    /// Message, source line and a caret under the offending column.
    pub fn render(&self) -> String {
        format!(
            "error: {} at line {}, column {}\n  {}\n  {}^",
            self.message,
            self.line,
            self.column,
            self.source_line,
            " ".repeat(self.column - 1)
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at line {}, column {}", self.message, self.line, self.column)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    DeltaStar,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::DeltaStar => "`delta*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push((tok, Span { start, end: i }));
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v: BigInt = src[start..i].parse().expect("digits");
            out.push((Tok::Int(v), Span { start, end: i }));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            if word == "delta" && bytes.get(i) == Some(&b'*') {
                let next = bytes.get(i + 1).copied();
                let starts_factor = next.is_some_and(|n| n.is_ascii_alphanumeric() || n == b'(' || n == b'-' || n == b'_');
                if !starts_factor {
                    i += 1;
                    out.push((Tok::DeltaStar, Span { start, end: i }));
                    continue;
                }
            }
            out.push((Tok::Ident(word.to_string()), Span { start, end: i }));
            continue;
        }
        let ch = src[start..].chars().next().unwrap_or('?');
        return Err(ParseError::at(src, start, format!("unexpected character `{ch}`")));
    }
    out.push((Tok::Eof, Span { start: src.len(), end: src.len() }));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    dim: usize,
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.src, self.span().start, message)
    }

    fn error_at(&self, span: Span, message: impl Into<String>) -> ParseError {
        ParseError::at(self.src, span.start, message)
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error_here(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    fn node(kind: ExprKind, start: Span, end: Span) -> Expr {
        Expr {
            kind,
            span: Span { start: start.start, end: end.end },
        }
    }

    fn sum(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut lhs = match self.peek() {
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            Tok::Minus => {
                self.bump();
                let inner = self.term()?;
                let end = inner.span;
                Self::node(ExprKind::Neg(Box::new(inner)), start, end)
            }
            _ => self.term()?,
        };
        loop {
            let op = self.peek().clone();
            if op != Tok::Plus && op != Tok::Minus {
                break;
            }
            self.bump();
            let rhs = self.term()?;
            let end = rhs.span;
            let (l, r) = (Box::new(lhs), Box::new(rhs));
            let kind = if op == Tok::Plus { ExprKind::Add(l, r) } else { ExprKind::Sub(l, r) };
            lhs = Self::node(kind, start, end);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut lhs = self.unary()?;
        loop {
            let op = self.peek().clone();
            if op != Tok::Star && op != Tok::Slash {
                break;
            }
            self.bump();
            let rhs = self.unary()?;
            if op == Tok::Slash {
                check_divisor(&rhs).map_err(|(span, msg)| self.error_at(span, msg))?;
            }
            let end = rhs.span;
            let (l, r) = (Box::new(lhs), Box::new(rhs));
            let kind = if op == Tok::Star { ExprKind::Mul(l, r) } else { ExprKind::Div(l, r) };
            lhs = Self::node(kind, start, end);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            let start = self.bump().1;
            let inner = self.unary()?;
            let end = inner.span;
            return Ok(Self::node(ExprKind::Neg(Box::new(inner)), start, end));
        }
        self.power()
    }

    fn signed_int(&mut self) -> PResult<(BigInt, Span)> {
        let start = self.span();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            (Tok::Int(v), end) => Ok((if negative { -v } else { v }, Span { start: start.start, end: end.end })),
            (tok, span) => Err(self.error_at(span, format!("expected an integer, found {}", tok.describe()))),
        }
    }

    fn small_int(&mut self) -> PResult<(i32, Span)> {
        let (v, span) = self.signed_int()?;
        let v = v.to_i32().filter(|v| v.unsigned_abs() <= 1_000).ok_or_else(|| self.error_at(span, "integer out of range"))?;
        Ok((v, span))
    }

    fn axis(&mut self) -> PResult<usize> {
        let (v, span) = self.small_int()?;
        if v < 1 || v as usize > self.dim {
            return Err(self.error_at(span, format!("axis {v} out of range 1..={}", self.dim)));
        }
        Ok(v as usize)
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (exp, span) = self.small_int()?;
        if exp < 0 {
            check_divisor(&base).map_err(|(s, m)| self.error_at(s, m))?;
        }
        let start = base.span;
        Ok(Self::node(ExprKind::Pow(Box::new(base), exp), start, span))
    }

    fn call1(&mut self, start: Span, make: fn(Box<Expr>) -> ExprKind) -> PResult<Expr> {
        self.expect(Tok::LParen)?;
        let inner = self.sum()?;
        let end = self.expect(Tok::RParen)?;
        Ok(Self::node(make(Box::new(inner)), start, end))
    }

    fn atom(&mut self) -> PResult<Expr> {
        let (tok, start) = self.bump();
        match tok {
            Tok::Int(v) => Ok(Self::node(ExprKind::Int(v), start, start)),
            Tok::LParen => {
                let inner = self.sum()?;
                let end = self.expect(Tok::RParen)?;
                Ok(Expr {
                    kind: inner.kind,
                    span: Span { start: start.start, end: end.end },
                })
            }
            Tok::DeltaStar => {
                let mut end = start;
                let order = if *self.peek() == Tok::LBracket {
                    self.bump();
                    let (q, _) = self.small_int()?;
                    end = self.expect(Tok::RBracket)?;
                    q
                } else {
                    0
                };
                let one = Self::node(ExprKind::Int(BigInt::from(1)), start, end);
                Ok(Self::node(ExprKind::ThickDelta { order, density: Box::new(one) }, start, end))
            }
            Tok::Ident(word) => self.ident(&word, start),
            other => Err(self.error_at(start, format!("expected an expression, found {}", other.describe()))),
        }
    }

    fn ident(&mut self, word: &str, start: Span) -> PResult<Expr> {
        let simple = match word {
            "C" => Some(ExprKind::C),
            "r" => Some(ExprKind::R),
            "gauss" => Some(ExprKind::Gauss),
            _ => None,
        };
        if let Some(kind) = simple {
            return Ok(Self::node(kind, start, start));
        }
        if let Some(kind) = self.coordinate(word, start)? {
            return Ok(Self::node(kind, start, start));
        }
        match word {
            "Pf" => self.call1(start, ExprKind::Pf),
            "pv" => self.call1(start, ExprKind::Pv),
            "project" => self.call1(start, ExprKind::Project),
            "moment" => self.call1(start, ExprKind::Moment),
            "delta" => {
                if *self.peek() != Tok::LBracket {
                    return Ok(Self::node(ExprKind::Delta, start, start));
                }
                self.bump();
                let (order, _) = self.small_int()?;
                self.expect(Tok::RBracket)?;
                self.expect(Tok::LParen)?;
                let density = self.sum()?;
                let end = self.expect(Tok::RParen)?;
                Ok(Self::node(ExprKind::ThickDelta { order, density: Box::new(density) }, start, end))
            }
            "D" => {
                let open = self.expect(Tok::LBracket)?;
                let mut exps = Vec::new();
                loop {
                    let (v, span) = self.small_int()?;
                    if v < 0 {
                        return Err(self.error_at(span, "multi-index entries must be non-negative"));
                    }
                    exps.push(v as u32);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::RBracket)?;
                if exps.len() != self.dim {
                    return Err(self.error_at(open, format!("multi-index has {} entries, expected {}", exps.len(), self.dim)));
                }
                match self.bump() {
                    (Tok::Ident(w), end) if w == "delta" => Ok(Self::node(ExprKind::DeltaDerivative(MultiIndex::new(exps)), start, end)),
                    (tok, span) => Err(self.error_at(span, format!("expected `delta`, found {}", tok.describe()))),
                }
            }
            "dstar" | "dzero" => {
                self.expect(Tok::LParen)?;
                let axis = self.axis()?;
                self.expect(Tok::Comma)?;
                let inner = Box::new(self.sum()?);
                let end = self.expect(Tok::RParen)?;
                let kind = if word == "dstar" { ExprKind::DStar(axis, inner) } else { ExprKind::DZero(axis, inner) };
                Ok(Self::node(kind, start, end))
            }
            "pair" => {
                self.expect(Tok::LParen)?;
                let value = self.sum()?;
                self.expect(Tok::Comma)?;
                let phi = self.sum()?;
                let end = self.expect(Tok::RParen)?;
                Ok(Self::node(ExprKind::Pair(Box::new(value), Box::new(phi)), start, end))
            }
            _ => Err(self.error_at(start, format!("unknown identifier `{word}`"))),
        }
    }

    /// `n3` or `x2`, with the axis checked against the dimension.
    fn coordinate(&self, word: &str, start: Span) -> PResult<Option<ExprKind>> {
        let mut chars = word.chars();
        let head = chars.next();
        let rest = chars.as_str();
        if !matches!(head, Some('n' | 'x')) || rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Ok(None);
        }
        let axis: usize = rest.parse().unwrap_or(0);
        if axis < 1 || axis > self.dim {
            return Err(self.error_at(start, format!("axis {rest} out of range 1..={}", self.dim)));
        }
        Ok(Some(if head == Some('n') { ExprKind::N(axis) } else { ExprKind::X(axis) }))
    }
}

/// A divisor or negatively powered base must be a product of numbers, `C`
/// and powers of `r`, so that every quotient stays a sum of homogeneous terms.
fn check_divisor(e: &Expr) -> Result<(), (Span, String)> {
    match &e.kind {
        ExprKind::Int(v) if v.is_zero() => Err((e.span, "division by zero".into())),
        ExprKind::Int(_) | ExprKind::C | ExprKind::R => Ok(()),
        ExprKind::Neg(inner) | ExprKind::Pow(inner, _) => check_divisor(inner),
        ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
            check_divisor(a)?;
            check_divisor(b)
        }
        _ => Err((e.span, "divisor must be a product of numbers, C and powers of r".into())),
    }
}

/// Parses `text` for `R^dim`.
pub fn parse(text: &str, dim: usize) -> Result<Expression, ParseError> {
    if dim < 2 {
        return Err(ParseError::at(text, 0, format!("dimension must be at least 2, got {dim}")));
    }
    let toks = tokenize(text)?;
    let mut p = Parser { src: text, dim, toks, pos: 0 };
    if *p.peek() == Tok::Eof {
        return Err(p.error_here("empty expression"));
    }
    let root = p.sum()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here(format!("unexpected {}", p.peek().describe())));
    }
    Ok(Expression { dim, root })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_calls() {
        let e = parse("project(dstar(1, dstar(2, Pf(1/r))))", 3).unwrap();
        assert!(matches!(e.root.kind, ExprKind::Project(_)));
        let e = parse("dstar(1, Pf(n2/r^2))", 3).unwrap();
        match e.root.kind {
            ExprKind::DStar(1, inner) => assert!(matches!(inner.kind, ExprKind::Pf(_))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn axis_out_of_range() {
        let err = parse("Pf(n4/r)", 3).unwrap_err();
        assert!(err.message.contains("out of range"), "{}", err.message);
        assert_eq!(err.column, 4);
        assert!(parse("dstar(0, Pf(1))", 3).is_err());
    }

    #[test]
    fn delta_star_tokens() {
        let e = parse("C*n1*delta*[-2]", 3).unwrap();
        assert!(matches!(e.root.kind, ExprKind::Mul(..)));
        let e = parse("delta* + Pf(1)", 3).unwrap();
        assert!(matches!(e.root.kind, ExprKind::Add(..)));
        let e = parse("delta*n1", 3).unwrap();
        match e.root.kind {
            ExprKind::Mul(a, _) => assert_eq!(a.kind, ExprKind::Delta),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn positioned_errors() {
        let err = parse("Pf(n1", 3).unwrap_err();
        assert_eq!((err.line, err.column), (1, 6));
        assert!(err.render().ends_with("     ^"));
        let err = parse("Pf(1/n1)", 3).unwrap_err();
        assert!(err.message.contains("divisor"));
        let err = parse("foo(1)", 3).unwrap_err();
        assert!(err.message.contains("unknown identifier"));
        assert!(parse("", 3).is_err());
        assert!(parse("1 2", 3).is_err());
        assert!(parse("D[1,0]delta", 3).is_err());
    }
}
