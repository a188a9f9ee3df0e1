//! Lowering parsed expressions into symbols.
//!
//! Evaluation runs over a tri-graded accumulator keyed by (hbar-level,
//! t-degree, sinv-power): products distribute, h^-k lands at level k and
//! h at level -1, t-powers become t-degrees, and sinv^p denotes s^{-p}
//! (the basis element of depth p - 1). Assembly per target then validates
//! the atoms: t is only legal on the t side, sinv only on the s side, and
//! every s-side term needs at least one sinv factor (classes are pure
//! principal parts; an entire part has no meaning there).

use crate::context::VarContext;
use crate::param::ParamScalar;
use crate::parse::{AtomKind, Expr, ExprKind, ParseError, Span};
use crate::poly::XuPoly;
use crate::slaurent::SLaurent;
use crate::swsym::SwSymbol;
use crate::twsym::TwSymbol;
use crate::wsym::WSymbol;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerTarget {
    W,
    Sw { s_trunc: usize },
    Tw { d_trunc: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lowered {
    W(WSymbol<ParamScalar>),
    Sw(SwSymbol<ParamScalar>),
    Tw(TwSymbol<ParamScalar>),
}

/// (hbar-level, t-degree, sinv-power) -> coefficient polynomial.
#[derive(Debug, Clone)]
struct TriGraded {
    n: usize,
    terms: BTreeMap<(i64, usize, usize), XuPoly<ParamScalar>>,
}

impl TriGraded {
    fn zero(n: usize) -> Self {
        TriGraded {
            n,
            terms: BTreeMap::new(),
        }
    }

    fn constant(n: usize, p: XuPoly<ParamScalar>) -> Self {
        let mut g = Self::zero(n);
        g.insert((0, 0, 0), p);
        g
    }

    fn insert(&mut self, key: (i64, usize, usize), p: XuPoly<ParamScalar>) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&key) {
            Some(q) => q + &p,
            None => p,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    fn add(mut self, rhs: TriGraded) -> TriGraded {
        for (k, p) in rhs.terms {
            self.insert(k, p);
        }
        self
    }

    fn neg(mut self) -> TriGraded {
        for p in self.terms.values_mut() {
            *p = -&*p;
        }
        self
    }

    fn mul(&self, rhs: &TriGraded) -> TriGraded {
        let mut out = TriGraded::zero(self.n);
        for (&(j1, d1, s1), p1) in &self.terms {
            for (&(j2, d2, s2), p2) in &rhs.terms {
                out.insert((j1 + j2, d1 + d2, s1 + s2), p1 * p2);
            }
        }
        out
    }

    fn pow(&self, k: i64) -> TriGraded {
        let mut acc = TriGraded::constant(self.n, XuPoly::one(self.n));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

fn eval(expr: &Expr, ctx: &VarContext) -> Result<TriGraded, ParseError> {
    let n = ctx.n;
    Ok(match &expr.kind {
        ExprKind::Num(r) => {
            TriGraded::constant(n, XuPoly::constant(n, ParamScalar::from_rat(r.clone())))
        }
        ExprKind::Atom(a) => {
            let mut g = TriGraded::zero(n);
            match a {
                AtomKind::X(i) => g.insert((0, 0, 0), XuPoly::x_var(n, *i)),
                AtomKind::U(i) => g.insert((0, 0, 0), XuPoly::u_var(n, *i)),
                AtomKind::Param(i) => {
                    g.insert((0, 0, 0), XuPoly::constant(n, ParamScalar::param(*i)))
                }
                AtomKind::T => g.insert((0, 1, 0), XuPoly::one(n)),
                AtomKind::SInv => g.insert((0, 0, 1), XuPoly::one(n)),
                AtomKind::Hbar => g.insert((-1, 0, 0), XuPoly::one(n)),
            }
            g
        }
        ExprKind::Neg(e) => eval(e, ctx)?.neg(),
        ExprKind::Add(a, b) => eval(a, ctx)?.add(eval(b, ctx)?),
        ExprKind::Sub(a, b) => eval(a, ctx)?.add(eval(b, ctx)?.neg()),
        ExprKind::Mul(a, b) => eval(a, ctx)?.mul(&eval(b, ctx)?),
        ExprKind::Pow(base, e) => {
            if *e < 0 {
                // parser guarantees the base is h
                let mut g = TriGraded::zero(n);
                g.insert((-e, 0, 0), XuPoly::one(n));
                g
            } else {
                eval(base, ctx)?.pow(*e)
            }
        }
    })
}

/// Reject atoms that have no home in the target before evaluating.
fn check_atoms(expr: &Expr, target: LowerTarget) -> Result<(), ParseError> {
    let mut stack = vec![expr];
    while let Some(e) = stack.pop() {
        match &e.kind {
            ExprKind::Atom(AtomKind::T) if !matches!(target, LowerTarget::Tw { .. }) => {
                return Err(located(
                    e.span,
                    "the atom t only exists in a t-side (tw) symbol",
                ));
            }
            ExprKind::Atom(AtomKind::SInv) if !matches!(target, LowerTarget::Sw { .. }) => {
                return Err(located(
                    e.span,
                    "the atom sinv only exists in an s-side (sw) symbol",
                ));
            }
            ExprKind::Neg(a) => stack.push(a),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            ExprKind::Pow(a, _) => stack.push(a),
            _ => {}
        }
    }
    Ok(())
}

fn located(span: Span, message: &str) -> ParseError {
    ParseError {
        span,
        message: message.to_string(),
    }
}

pub fn lower(expr: &Expr, ctx: &VarContext, target: LowerTarget) -> Result<Lowered, ParseError> {
    check_atoms(expr, target)?;
    let g = eval(expr, ctx)?;
    let n = ctx.n;
    Ok(match target {
        LowerTarget::W => {
            let mut sym = WSymbol::zero(n);
            for (&(j, _, _), p) in &g.terms {
                sym.add_level(j, p.clone());
            }
            Lowered::W(normalize_w_floor(sym))
        }
        LowerTarget::Sw { s_trunc } => {
            let mut sym = SwSymbol::zero(n, s_trunc);
            for (&(j, _, spow), p) in &g.terms {
                if spow == 0 {
                    return Err(located(
                        expr.span,
                        "every term of an s-side symbol needs a sinv factor \
                         (classes are pure principal parts at infinity)",
                    ));
                }
                let depth = spow - 1;
                if depth > s_trunc {
                    continue; // beyond the truncation window
                }
                sym.add_level(j, SLaurent::monomial(s_trunc, depth, p.clone()));
            }
            Lowered::Sw(normalize_sw_floor(sym))
        }
        LowerTarget::Tw { d_trunc } => {
            let mut sym = TwSymbol::zero(n, d_trunc, 0);
            for (&(j, d, _), p) in &g.terms {
                if d > d_trunc {
                    continue;
                }
                sym.add_at(j, d, p.clone());
            }
            // declare the tightest order the filtration admits
            let m = sym
                .levels()
                .map(|(j, tp)| j - tp.val_t() as i64)
                .max()
                .unwrap_or(0);
            Lowered::Tw(normalize_tw_floor(sym.with_order(m)))
        }
    })
}

fn normalize_w_floor(sym: WSymbol<ParamScalar>) -> WSymbol<ParamScalar> {
    let floor = sym.levels().map(|(j, _)| j).min().unwrap_or(0).min(0);
    sym.with_floor(floor)
}

fn normalize_sw_floor(sym: SwSymbol<ParamScalar>) -> SwSymbol<ParamScalar> {
    let floor = sym.levels().map(|(j, _)| j).min().unwrap_or(0).min(0);
    sym.with_floor(floor)
}

fn normalize_tw_floor(sym: TwSymbol<ParamScalar>) -> TwSymbol<ParamScalar> {
    let floor = sym.levels().map(|(j, _)| j).min().unwrap_or(0).min(0);
    sym.with_floor(floor)
}

/// Parse and lower in one step.
pub fn lower_str(
    src: &str,
    ctx: &VarContext,
    target: LowerTarget,
) -> Result<Lowered, ParseError> {
    let ast = crate::parse::parse_expr(src, ctx)?;
    lower(&ast, ctx, target)
}

pub fn lower_w(src: &str, ctx: &VarContext) -> Result<WSymbol<ParamScalar>, ParseError> {
    match lower_str(src, ctx, LowerTarget::W)? {
        Lowered::W(s) => Ok(s),
        _ => unreachable!(),
    }
}

pub fn lower_sw(
    src: &str,
    ctx: &VarContext,
    s_trunc: usize,
) -> Result<SwSymbol<ParamScalar>, ParseError> {
    match lower_str(src, ctx, LowerTarget::Sw { s_trunc })? {
        Lowered::Sw(s) => Ok(s),
        _ => unreachable!(),
    }
}

pub fn lower_tw(
    src: &str,
    ctx: &VarContext,
    d_trunc: usize,
) -> Result<TwSymbol<ParamScalar>, ParseError> {
    match lower_str(src, ctx, LowerTarget::Tw { d_trunc })? {
        Lowered::Tw(s) => Ok(s),
        _ => unreachable!(),
    }
}
