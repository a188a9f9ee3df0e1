//! Canonical ASCII printer.
//!
//! Output reparses to an equal value under the same context. Levels print
//! in decreasing hbar-level order (leading term first); within a level,
//! t-degrees and s-depths ascend and monomials follow the canonical term
//! order. `h` is hbar, `sinv` the class of 1/s.

use crate::context::VarContext;
use crate::param::ParamScalar;
use crate::poly::XuPoly;
use crate::scalar::Rat;
use crate::slaurent::SLaurent;
use crate::swsym::SwSymbol;
use crate::tpoly::TPoly;
use crate::twsym::TwSymbol;
use crate::wsym::WSymbol;
use num_traits::{One, Signed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Extras {
    h_key: i64,
    t_deg: usize,
    s_depth: Option<usize>,
}

impl Extras {
    fn level(h_key: i64) -> Self {
        Extras {
            h_key,
            t_deg: 0,
            s_depth: None,
        }
    }
}

fn push_pow(parts: &mut Vec<String>, base: &str, e: u32) {
    match e {
        0 => {}
        1 => parts.push(base.to_string()),
        _ => parts.push(format!("{base}^{e}")),
    }
}

fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One fully distributed term: sign and body.
fn atomic_term(
    rat: &Rat,
    param_exps: &[u32],
    xe: &[u32],
    ue: &[u32],
    extras: Extras,
    ctx: &VarContext,
) -> (bool, String) {
    let negative = rat.is_negative();
    let abs = rat.abs();
    let mut parts: Vec<String> = Vec::new();
    for (i, &e) in param_exps.iter().enumerate() {
        let name = ctx
            .param_name(i)
            .map(str::to_string)
            .unwrap_or_else(|| format!("p{i}"));
        push_pow(&mut parts, &name, e);
    }
    for (i, &e) in xe.iter().enumerate() {
        push_pow(&mut parts, &format!("x{}", i + 1), e);
    }
    for (i, &e) in ue.iter().enumerate() {
        push_pow(&mut parts, &format!("u{}", i + 1), e);
    }
    push_pow(&mut parts, "t", extras.t_deg as u32);
    if let Some(depth) = extras.s_depth {
        push_pow(&mut parts, "sinv", depth as u32 + 1);
    }
    match -extras.h_key {
        0 => {}
        1 => parts.push("h".to_string()),
        e if e > 1 => parts.push(format!("h^{e}")),
        e => parts.push(format!("h^{e}")),
    }
    if parts.is_empty() || !abs.is_one() {
        parts.insert(0, rat_string(&abs));
    }
    (negative, parts.join("*"))
}

fn push_poly_terms(
    out: &mut Vec<(bool, String)>,
    p: &XuPoly<ParamScalar>,
    extras: Extras,
    ctx: &VarContext,
) {
    for (exp, coeff) in p.terms() {
        for (pexp, rat) in coeff.terms() {
            out.push(atomic_term(rat, pexp.exps(), &exp.xe, &exp.ue, extras, ctx));
        }
    }
}

fn join_terms(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    s
}

pub fn render_poly(p: &XuPoly<ParamScalar>, ctx: &VarContext) -> String {
    let mut terms = Vec::new();
    push_poly_terms(&mut terms, p, Extras::level(0), ctx);
    join_terms(terms)
}

pub fn render_w(sym: &WSymbol<ParamScalar>, ctx: &VarContext) -> String {
    let mut terms = Vec::new();
    for (j, p) in sym.levels().collect::<Vec<_>>().into_iter().rev() {
        push_poly_terms(&mut terms, p, Extras::level(j), ctx);
    }
    join_terms(terms)
}

pub fn render_sw(sym: &SwSymbol<ParamScalar>, ctx: &VarContext) -> String {
    let mut terms = Vec::new();
    for (j, lau) in sym.levels().collect::<Vec<_>>().into_iter().rev() {
        push_slaurent_terms(&mut terms, lau, j, ctx);
    }
    join_terms(terms)
}

fn push_slaurent_terms(
    out: &mut Vec<(bool, String)>,
    lau: &SLaurent<ParamScalar>,
    h_key: i64,
    ctx: &VarContext,
) {
    for (depth, p) in lau.coeffs() {
        push_poly_terms(
            out,
            p,
            Extras {
                h_key,
                t_deg: 0,
                s_depth: Some(depth),
            },
            ctx,
        );
    }
}

pub fn render_tw(sym: &TwSymbol<ParamScalar>, ctx: &VarContext) -> String {
    let mut terms = Vec::new();
    for (j, tp) in sym.levels().collect::<Vec<_>>().into_iter().rev() {
        push_tpoly_terms(&mut terms, tp, j, ctx);
    }
    join_terms(terms)
}

fn push_tpoly_terms(
    out: &mut Vec<(bool, String)>,
    tp: &TPoly<ParamScalar>,
    h_key: i64,
    ctx: &VarContext,
) {
    for (d, p) in tp.coeffs() {
        push_poly_terms(
            out,
            p,
            Extras {
                h_key,
                t_deg: d,
                s_depth: None,
            },
            ctx,
        );
    }
}
