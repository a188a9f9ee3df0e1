//! Expression front end.
//!
//! Grammar (EBNF), with precedence `^` > unary `-` > `*` > binary `+`/`-`:
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := unary ("*" unary)*
//! unary    := "-" unary | power
//! power    := atom ("^" exponent)?
//! exponent := ["-"] INT          (negative only on the atom h)
//! atom     := INT ("/" INT)? | IDENT | "(" expr ")"
//! INT      := [0-9]+
//! IDENT    := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Atoms are `x1..xn`, `u1..un`, `t`, `sinv` (the class of 1/s), `h`
//! (hbar) and the declared parameter names. Division exists only inside a
//! rational literal like `3/4`; `x1/u1` is rejected. Implicit
//! multiplication by juxtaposition is not in the grammar.

use crate::context::VarContext;
use crate::scalar::Rat;
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

/// A located front-end error (lexing, parsing or lowering).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl ParseError {
    fn new(span: Span, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    X(usize),
    U(usize),
    T,
    SInv,
    Hbar,
    Param(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Num(Rat),
    Atom(AtomKind),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    span: Span,
}

fn lex(src: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
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
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                chars.next();
                col += 1;
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push(Lexed { tok, span });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let value: BigInt = s.parse().expect("digit run");
                out.push(Lexed {
                    tok: Tok::Int(value),
                    span,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Lexed {
                    tok: Tok::Ident(s),
                    span,
                });
            }
            other => {
                return Err(ParseError::new(span, format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Lexed],
    pos: usize,
    ctx: &'a VarContext,
    depth: u32,
    end: Span,
}

const MAX_DEPTH: u32 = 200;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> Span {
        self.toks.get(self.pos).map(|l| l.span).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Lexed> {
        let l = self.toks.get(self.pos);
        if l.is_some() {
            self.pos += 1;
        }
        l
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.here(), "expression nesting too deep"));
        }
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    let span = self.here();
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::new(ExprKind::Add(Box::new(lhs), Box::new(rhs)), span);
                }
                Some(Tok::Minus) => {
                    let span = self.here();
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::new(ExprKind::Sub(Box::new(lhs), Box::new(rhs)), span);
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    let span = self.here();
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::new(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), span);
                }
                Some(Tok::Slash) => {
                    return Err(ParseError::new(
                        self.here(),
                        "division is not in the grammar (only rational literals like 3/4)",
                    ));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            let span = self.here();
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(ParseError::new(span, "expression nesting too deep"));
            }
            self.bump();
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            let caret = self.here();
            self.bump();
            let mut negative = false;
            if let Some(Tok::Minus) = self.peek() {
                negative = true;
                self.bump();
            }
            let span = self.here();
            let e = match self.bump().map(|l| l.tok.clone()) {
                Some(Tok::Int(v)) => v,
                _ => {
                    return Err(ParseError::new(
                        span,
                        "malformed exponent: expected an integer literal",
                    ));
                }
            };
            let e: i64 = e.try_into().map_err(|_| {
                ParseError::new(span, "malformed exponent: integer out of range")
            })?;
            let e = if negative { -e } else { e };
            if e < 0 && base.kind != ExprKind::Atom(AtomKind::Hbar) {
                return Err(ParseError::new(
                    caret,
                    "negative exponents are only allowed on h",
                ));
            }
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), e), caret));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.here();
        match self.bump().map(|l| l.tok.clone()) {
            Some(Tok::Int(v)) => {
                // optional rational literal INT / INT
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dspan = self.here();
                    match self.bump().map(|l| l.tok.clone()) {
                        Some(Tok::Int(d)) if !d.is_zero() => Ok(Expr::new(
                            ExprKind::Num(Rat::new(v, d)),
                            span,
                        )),
                        Some(Tok::Int(_)) => {
                            Err(ParseError::new(dspan, "zero denominator in rational literal"))
                        }
                        _ => Err(ParseError::new(
                            dspan,
                            "expected an integer denominator after '/'",
                        )),
                    }
                } else {
                    Ok(Expr::new(ExprKind::Num(Rat::from_integer(v)), span))
                }
            }
            Some(Tok::Ident(name)) => {
                let kind = self.resolve(&name, span)?;
                Ok(Expr::new(ExprKind::Atom(kind), span))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump().map(|l| l.tok.clone()) {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::new(span, "unbalanced parentheses: '(' never closed")),
                }
            }
            Some(Tok::RParen) => Err(ParseError::new(
                span,
                "unbalanced parentheses: unexpected ')'",
            )),
            Some(other) => Err(ParseError::new(
                span,
                format!("expected an atom, found {other:?}"),
            )),
            None => Err(ParseError::new(span, "expected an expression")),
        }
    }

    fn resolve(&self, name: &str, span: Span) -> Result<AtomKind, ParseError> {
        match name {
            "t" => return Ok(AtomKind::T),
            "sinv" => return Ok(AtomKind::SInv),
            "h" => return Ok(AtomKind::Hbar),
            _ => {}
        }
        if let Some(idx) = self.ctx.param_index(name) {
            return Ok(AtomKind::Param(idx));
        }
        for (prefix, mk) in [("x", AtomKind::X as fn(usize) -> AtomKind), ("u", AtomKind::U)] {
            if let Some(rest) = name.strip_prefix(prefix) {
                if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                    if let Ok(i) = rest.parse::<usize>() {
                        if i >= 1 && i <= self.ctx.n {
                            return Ok(mk(i - 1));
                        }
                        return Err(ParseError::new(
                            span,
                            format!(
                                "unknown identifier '{name}': index out of range 1..={}",
                                self.ctx.n
                            ),
                        ));
                    }
                }
            }
        }
        Err(ParseError::new(span, format!("unknown identifier '{name}'")))
    }
}

/// Parse a source string against a session context.
pub fn parse_expr(src: &str, ctx: &VarContext) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let end = toks
        .last()
        .map(|l| Span {
            line: l.span.line,
            col: l.span.col + 1,
        })
        .unwrap_or(Span { line: 1, col: 1 });
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ctx,
        depth: 0,
        end,
    };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(ParseError::new(p.here(), "unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> VarContext {
        VarContext::new(2, ["theta"])
    }

    #[test]
    fn product_node() {
        let e = parse_expr("theta*x1*u1", &ctx()).unwrap();
        assert!(matches!(e.kind, ExprKind::Mul(_, _)));
    }

    #[test]
    fn sum_with_hbar_level() {
        let e = parse_expr("x1^2 + 2*h^-1", &ctx()).unwrap();
        let ExprKind::Add(_, rhs) = e.kind else {
            panic!("expected a sum");
        };
        let ExprKind::Mul(_, pow) = rhs.kind else {
            panic!("expected a product");
        };
        assert!(matches!(pow.kind, ExprKind::Pow(_, -1)));
    }

    #[test]
    fn division_rejected() {
        let err = parse_expr("x1/u1", &ctx()).unwrap_err();
        assert!(err.message.contains("division is not in the grammar"));
        assert_eq!(err.span, Span { line: 1, col: 3 });
    }

    #[test]
    fn rational_literals_allowed() {
        let e = parse_expr("3/4*x1", &ctx()).unwrap();
        let ExprKind::Mul(lhs, _) = e.kind else {
            panic!();
        };
        assert_eq!(
            lhs.kind,
            ExprKind::Num(Rat::new(BigInt::from(3), BigInt::from(4)))
        );
        assert!(parse_expr("1/0", &ctx()).is_err());
    }

    #[test]
    fn located_errors() {
        let err = parse_expr("x1 + y2", &ctx()).unwrap_err();
        assert!(err.message.contains("unknown identifier 'y2'"));
        assert_eq!(err.span, Span { line: 1, col: 6 });

        let err = parse_expr("(x1 + u1", &ctx()).unwrap_err();
        assert!(err.message.contains("unbalanced parentheses"));

        let err = parse_expr("x1^u1", &ctx()).unwrap_err();
        assert!(err.message.contains("malformed exponent"));

        let err = parse_expr("x3", &ctx()).unwrap_err();
        assert!(err.message.contains("out of range"));
    }

    #[test]
    fn negative_exponent_only_on_h() {
        assert!(parse_expr("h^-3", &ctx()).is_ok());
        let err = parse_expr("x1^-2", &ctx()).unwrap_err();
        assert!(err.message.contains("only allowed on h"));
    }

    #[test]
    fn precedence_shape() {
        // -x1^2 parses as -(x1^2)
        let e = parse_expr("-x1^2", &ctx()).unwrap();
        assert!(matches!(e.kind, ExprKind::Neg(_)));
        // 1 + 2*x1 keeps the product under the sum
        let e = parse_expr("1 + 2*x1", &ctx()).unwrap();
        assert!(matches!(e.kind, ExprKind::Add(_, _)));
    }
}
