//! Seeded random generators for law checking.
//!
//! Used by the property suites and by the CLI `check` command; everything
//! is deterministic under a fixed RNG stream.

use crate::param::ParamScalar;
use crate::poly::XuPoly;
use crate::scalar::Rat;
use crate::slaurent::SLaurent;
use crate::swsym::SwSymbol;
use crate::twsym::TwSymbol;
use crate::wsym::WSymbol;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

/// Small nonzero-denominator rational with entries in [-bound, bound].
pub fn rat(rng: &mut impl Rng, bound: i64) -> Rat {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational-with-parameters scalar; at most `n_params` parameters appear.
pub fn param_scalar(rng: &mut impl Rng, n_params: usize, bound: i64) -> ParamScalar {
    let mut s = ParamScalar::from_rat(rat(rng, bound));
    for i in 0..n_params {
        if rng.gen_bool(0.3) {
            let deg = rng.gen_range(1..=2u32);
            let mut term = ParamScalar::from_rat(rat(rng, bound));
            for _ in 0..deg {
                term = term * ParamScalar::param(i);
            }
            s = s + term;
        }
    }
    s
}

pub fn xupoly(
    rng: &mut impl Rng,
    n: usize,
    max_deg: u32,
    max_terms: usize,
    n_params: usize,
) -> XuPoly<ParamScalar> {
    let mut p = XuPoly::zero(n);
    let terms = rng.gen_range(0..=max_terms);
    for _ in 0..terms {
        let xe: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_deg)).collect();
        let ue: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_deg)).collect();
        let c = param_scalar(rng, n_params, 3);
        if !c.is_zero() {
            p = &p + &XuPoly::monomial(n, xe, ue, c);
        }
    }
    p
}

pub fn nonzero_xupoly(
    rng: &mut impl Rng,
    n: usize,
    max_deg: u32,
    max_terms: usize,
    n_params: usize,
) -> XuPoly<ParamScalar> {
    loop {
        let p = xupoly(rng, n, max_deg, max_terms.max(1), n_params);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random symbol with levels inside [j_lo, j_hi].
#[allow(clippy::too_many_arguments)]
pub fn wsymbol(
    rng: &mut impl Rng,
    n: usize,
    j_lo: i64,
    j_hi: i64,
    max_deg: u32,
    max_terms: usize,
    n_params: usize,
) -> WSymbol<ParamScalar> {
    let mut levels = Vec::new();
    for j in j_lo..=j_hi {
        if rng.gen_bool(0.7) {
            levels.push((j, xupoly(rng, n, max_deg, max_terms, n_params)));
        }
    }
    WSymbol::from_levels(n, levels).with_floor(j_lo)
}

pub fn slaurent(
    rng: &mut impl Rng,
    n: usize,
    s_trunc: usize,
    max_deg: u32,
    max_terms: usize,
    n_params: usize,
) -> SLaurent<ParamScalar> {
    let mut s = SLaurent::zero(n, s_trunc);
    for d in 0..=s_trunc {
        if rng.gen_bool(0.5) {
            s.insert(d, xupoly(rng, n, max_deg, max_terms, n_params));
        }
    }
    s
}

#[allow(clippy::too_many_arguments)]
pub fn swsymbol(
    rng: &mut impl Rng,
    n: usize,
    s_trunc: usize,
    j_lo: i64,
    j_hi: i64,
    max_deg: u32,
    max_terms: usize,
    n_params: usize,
) -> SwSymbol<ParamScalar> {
    let mut levels = Vec::new();
    for j in j_lo..=j_hi {
        if rng.gen_bool(0.7) {
            levels.push((j, slaurent(rng, n, s_trunc, max_deg, max_terms, n_params)));
        }
    }
    SwSymbol::from_levels(n, s_trunc, levels).with_floor(j_lo)
}

/// Random t-side symbol of declared order `m` satisfying the filtration
/// invariant: at level j > m only t-degrees >= j - m are populated.
#[allow(clippy::too_many_arguments)]
pub fn twsymbol(
    rng: &mut impl Rng,
    n: usize,
    d_trunc: usize,
    m: i64,
    j_lo: i64,
    max_deg: u32,
    max_terms: usize,
    n_params: usize,
) -> TwSymbol<ParamScalar> {
    let mut sym = TwSymbol::zero(n, d_trunc, m);
    for j in j_lo..=(m + d_trunc as i64) {
        let d_min = if j > m { (j - m) as usize } else { 0 };
        for d in d_min..=d_trunc {
            if rng.gen_bool(0.4) {
                sym.add_at(j, d, xupoly(rng, n, max_deg, max_terms, n_params));
            }
        }
    }
    sym.with_floor(j_lo)
}

/// Random invertible rational matrix with small integer entries.
pub fn invertible_matrix(rng: &mut impl Rng, n: usize, bound: i64) -> Vec<Vec<Rat>> {
    loop {
        let m: Vec<Vec<Rat>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Rat::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))
                    .collect()
            })
            .collect();
        if crate::poly::invert_matrix(&m).is_some() {
            return m;
        }
    }
}
