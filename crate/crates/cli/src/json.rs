//! JSON serialization: schema 1.
//!
//! A symbol serializes as a flat list of fully distributed terms, one per
//! (hbar-level, t-degree?, s-depth?, phase-space monomial, parameter
//! monomial); big integers travel as decimal strings so consumers without
//! arbitrary precision keep every digit. Maps are ordered, so identical
//! configurations serialize byte-identically.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use starcalc_core::param::ParamScalar;
use starcalc_core::poly::XuPoly;
use starcalc_core::twsym::PrecisionWindow;
use starcalc_core::{Rat, SLaurent, SwSymbol, TwSymbol, VarContext, WSymbol};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoeffDto {
    pub num: String,
    pub den: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermDto {
    pub hbar: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sdepth: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub monomial: BTreeMap<String, u32>,
    pub coeff: CoeffDto,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SymbolDto {
    pub schema: u32,
    #[serde(rename = "type")]
    pub kind: String,
    pub n: usize,
    pub order: Option<i64>,
    pub j_min: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_deg: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_deg: Option<usize>,
    pub terms: Vec<TermDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct WindowDto {
    pub j_floor: i64,
    pub default_cap: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub caps: BTreeMap<i64, i64>,
}

impl WindowDto {
    pub fn from_window(w: &PrecisionWindow) -> Self {
        WindowDto {
            j_floor: w.floor(),
            default_cap: w.default_cap(),
            caps: w.caps().collect(),
        }
    }
}

fn coeff_dtos(c: &ParamScalar, ctx: &VarContext) -> Vec<CoeffDto> {
    c.terms()
        .map(|(pexp, rat)| {
            let mut params = BTreeMap::new();
            for (i, &e) in pexp.exps().iter().enumerate() {
                if e > 0 {
                    let name = ctx
                        .param_name(i)
                        .map(str::to_string)
                        .unwrap_or_else(|| format!("p{i}"));
                    params.insert(name, e);
                }
            }
            CoeffDto {
                num: rat.numer().to_string(),
                den: rat.denom().to_string(),
                params,
            }
        })
        .collect()
}

fn poly_terms(
    out: &mut Vec<TermDto>,
    p: &XuPoly<ParamScalar>,
    hbar: i64,
    t: Option<usize>,
    sdepth: Option<usize>,
    ctx: &VarContext,
) {
    for (exp, coeff) in p.terms() {
        let mut monomial = BTreeMap::new();
        for (i, &e) in exp.xe.iter().enumerate() {
            if e > 0 {
                monomial.insert(format!("x{}", i + 1), e);
            }
        }
        for (i, &e) in exp.ue.iter().enumerate() {
            if e > 0 {
                monomial.insert(format!("u{}", i + 1), e);
            }
        }
        for dto in coeff_dtos(coeff, ctx) {
            out.push(TermDto {
                hbar,
                t,
                sdepth,
                monomial: monomial.clone(),
                coeff: dto,
            });
        }
    }
}

pub fn w_to_dto(sym: &WSymbol, ctx: &VarContext) -> SymbolDto {
    let mut terms = Vec::new();
    for (j, p) in sym.levels().collect::<Vec<_>>().into_iter().rev() {
        poly_terms(&mut terms, p, j, None, None, ctx);
    }
    SymbolDto {
        schema: SCHEMA_VERSION,
        kind: "w".to_string(),
        n: sym.n(),
        order: sym.order(),
        j_min: sym.j_min(),
        t_deg: None,
        s_deg: None,
        terms,
    }
}

pub fn sw_to_dto(sym: &SwSymbol, ctx: &VarContext) -> SymbolDto {
    let mut terms = Vec::new();
    for (j, lau) in sym.levels().collect::<Vec<_>>().into_iter().rev() {
        for (d, p) in lau.coeffs() {
            poly_terms(&mut terms, p, j, None, Some(d), ctx);
        }
    }
    SymbolDto {
        schema: SCHEMA_VERSION,
        kind: "sw".to_string(),
        n: sym.n(),
        order: sym.order(),
        j_min: sym.j_min(),
        t_deg: None,
        s_deg: Some(sym.s_trunc()),
        terms,
    }
}

pub fn tw_to_dto(sym: &TwSymbol, ctx: &VarContext) -> SymbolDto {
    let mut terms = Vec::new();
    for (j, tp) in sym.levels().collect::<Vec<_>>().into_iter().rev() {
        for (d, p) in tp.coeffs() {
            poly_terms(&mut terms, p, j, Some(d), None, ctx);
        }
    }
    SymbolDto {
        schema: SCHEMA_VERSION,
        kind: "tw".to_string(),
        n: sym.n(),
        order: Some(sym.order()),
        j_min: sym.j_min(),
        t_deg: Some(sym.d_trunc()),
        s_deg: None,
        terms,
    }
}

fn parse_bigint(s: &str, what: &str) -> Result<BigInt, String> {
    s.parse()
        .map_err(|e| format!("invalid {what} integer '{s}': {e}"))
}

fn dto_coeff(dto: &CoeffDto, ctx: &VarContext) -> Result<ParamScalar, String> {
    let num = parse_bigint(&dto.num, "numerator")?;
    let den = parse_bigint(&dto.den, "denominator")?;
    if den == BigInt::from(0) {
        return Err("zero denominator".to_string());
    }
    let mut c = ParamScalar::from_rat(Rat::new(num, den));
    for (name, &e) in &dto.params {
        let idx = ctx
            .param_index(name)
            .ok_or_else(|| format!("undeclared parameter '{name}'"))?;
        for _ in 0..e {
            c = c * ParamScalar::param(idx);
        }
    }
    Ok(c)
}

fn dto_monomial(
    dto: &TermDto,
    n: usize,
    ctx: &VarContext,
) -> Result<XuPoly<ParamScalar>, String> {
    let mut xe = vec![0u32; n];
    let mut ue = vec![0u32; n];
    for (var, &e) in &dto.monomial {
        let (vec, idx_str) = if let Some(rest) = var.strip_prefix('x') {
            (&mut xe, rest)
        } else if let Some(rest) = var.strip_prefix('u') {
            (&mut ue, rest)
        } else {
            return Err(format!("unknown monomial variable '{var}'"));
        };
        let idx: usize = idx_str
            .parse()
            .map_err(|_| format!("unknown monomial variable '{var}'"))?;
        if idx < 1 || idx > n {
            return Err(format!("variable '{var}' out of range for n = {n}"));
        }
        vec[idx - 1] = e;
    }
    Ok(XuPoly::monomial(n, xe, ue, dto_coeff(&dto.coeff, ctx)?))
}

pub fn dto_to_w(dto: &SymbolDto, ctx: &VarContext) -> Result<WSymbol, String> {
    if dto.kind != "w" {
        return Err(format!("expected type \"w\", got \"{}\"", dto.kind));
    }
    let mut sym = WSymbol::zero(dto.n);
    for term in &dto.terms {
        sym.add_level(term.hbar, dto_monomial(term, dto.n, ctx)?);
    }
    Ok(sym.with_floor(dto.j_min))
}

pub fn dto_to_sw(dto: &SymbolDto, ctx: &VarContext) -> Result<SwSymbol, String> {
    if dto.kind != "sw" {
        return Err(format!("expected type \"sw\", got \"{}\"", dto.kind));
    }
    let s_trunc = dto.s_deg.ok_or("missing s_deg for an sw symbol")?;
    let mut sym = SwSymbol::zero(dto.n, s_trunc);
    for term in &dto.terms {
        let depth = term.sdepth.ok_or("missing sdepth on an sw term")?;
        sym.add_level(
            term.hbar,
            SLaurent::monomial(s_trunc, depth, dto_monomial(term, dto.n, ctx)?),
        );
    }
    Ok(sym.with_floor(dto.j_min))
}

pub fn dto_to_tw(dto: &SymbolDto, ctx: &VarContext) -> Result<TwSymbol, String> {
    if dto.kind != "tw" {
        return Err(format!("expected type \"tw\", got \"{}\"", dto.kind));
    }
    let d_trunc = dto.t_deg.ok_or("missing t_deg for a tw symbol")?;
    let m = dto.order.ok_or("missing order for a tw symbol")?;
    let mut sym = TwSymbol::zero(dto.n, d_trunc, m);
    for term in &dto.terms {
        let d = term.t.ok_or("missing t on a tw term")?;
        sym.add_at(term.hbar, d, dto_monomial(term, dto.n, ctx)?);
    }
    Ok(sym.with_floor(dto.j_min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use starcalc_core::lower::{lower_sw, lower_tw, lower_w};

    fn ctx() -> VarContext {
        VarContext::new(2, ["theta"])
    }

    #[test]
    fn w_round_trip() {
        let sym = lower_w("1/2*theta*x1*u2^2 + h^-1 - 3*h", &ctx()).unwrap();
        let dto = w_to_dto(&sym, &ctx());
        let json = serde_json::to_string(&dto).unwrap();
        let back: SymbolDto = serde_json::from_str(&json).unwrap();
        assert_eq!(dto_to_w(&back, &ctx()).unwrap(), sym);
        assert_eq!(back, dto);
    }

    #[test]
    fn sw_round_trip() {
        let sym = lower_sw("u1*sinv + 2/3*sinv^3*h^-1", &ctx(), 4).unwrap();
        let dto = sw_to_dto(&sym, &ctx());
        let json = serde_json::to_string_pretty(&dto).unwrap();
        let back: SymbolDto = serde_json::from_str(&json).unwrap();
        assert_eq!(dto_to_sw(&back, &ctx()).unwrap(), sym);
    }

    #[test]
    fn tw_round_trip() {
        let sym = lower_tw("1 + theta*x1*u1*t*h^-1 + t^2", &ctx(), 4).unwrap();
        let dto = tw_to_dto(&sym, &ctx());
        let json = serde_json::to_string(&dto).unwrap();
        let back: SymbolDto = serde_json::from_str(&json).unwrap();
        let rebuilt = dto_to_tw(&back, &ctx()).unwrap();
        assert_eq!(rebuilt, sym);
        assert_eq!(rebuilt.order(), sym.order());
    }

    #[test]
    fn deterministic_bytes() {
        let sym = lower_w("theta^2*x1 - u1*h", &ctx()).unwrap();
        let a = serde_json::to_string(&w_to_dto(&sym, &ctx())).unwrap();
        let b = serde_json::to_string(&w_to_dto(&sym, &ctx())).unwrap();
        assert_eq!(a, b);
    }
}
