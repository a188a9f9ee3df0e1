//! The formal Laplace transform between the s-side and t-side calculi.
//!
//! On the basis the transform replaces s^{-d-1} hbar^{-j} by
//! (t^d / d!) hbar^{-(j+d)}; the inverse replaces (t^d / d!) hbar^{-d} by
//! s^{-d-1}. The basis rule is bidegree-bijective, so both maps are exact
//! within the populated truncations, and the transform carries the
//! s-convolution product to the t-side product level by level.
//!
//! The inverse is only defined on symbols satisfying the filtration
//! invariant: a level j > m with a t-coefficient below degree j - m has no
//! preimage among s-side symbols of order m.

use crate::error::Result;
use crate::scalar::{factorial, inv_factorial, Rat, Scalar};
use crate::slaurent::SLaurent;
use crate::swsym::SwSymbol;
use crate::twsym::{PrecisionWindow, TwSymbol};
use num_bigint::BigInt;

/// Laplace transform; populates t-degrees up to min(d_trunc, input depth).
pub fn laplace<C: Scalar>(p: &SwSymbol<C>, d_trunc: usize) -> TwSymbol<C> {
    let m = p.order().unwrap_or(0);
    let mut out = TwSymbol::zero(p.n(), d_trunc, m);
    for (j, lau) in p.levels() {
        for (d, poly) in lau.coeffs() {
            if d > d_trunc {
                continue;
            }
            out.add_at(j + d as i64, d, poly.scale_rat(&inv_factorial(d)));
        }
    }
    out.with_floor(p.j_min())
}

/// The window a Laplace image supports: the coefficient of t^d at level j
/// comes solely from s-depth d of level j - d, so it is exact iff
/// d <= depth and j - d clears the input floor.
pub fn laplace_window<C: Scalar>(p: &SwSymbol<C>, d_trunc: usize) -> PrecisionWindow {
    let cap = d_trunc.min(p.s_trunc());
    let floor = p.j_min();
    let mut w = PrecisionWindow::full(floor, cap);
    for j in floor..floor + cap as i64 {
        w = w.with_cap(j, j - floor);
    }
    w
}

/// Inverse Laplace transform; fails with a filtration violation when the
/// input is not a t-side section of its declared order.
pub fn inverse_laplace<C: Scalar>(f: &TwSymbol<C>) -> Result<SwSymbol<C>> {
    f.filtration_check()?;
    let s_trunc = f.d_trunc();
    let mut out = SwSymbol::zero(f.n(), s_trunc);
    for (k, tp) in f.levels() {
        for (d, poly) in tp.coeffs() {
            let fac = C::from_rat(Rat::new(factorial(d), BigInt::from(1)));
            out.add_level(k - d as i64, SLaurent::monomial(s_trunc, d, poly.scale(&fac)));
        }
    }
    Ok(out.with_floor(f.j_min()))
}
