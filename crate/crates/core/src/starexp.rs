//! Star-exponentials exp(t/hbar * P) of order-<= 0 symbols, by three
//! independent routes, plus the harmonic-oscillator closed form and the
//! path-integral bookkeeping identity.
//!
//! Routes:
//! - `series`: sum_k t^k hbar^{-k} P^{star k} / k!,
//! - `ode`: solve dE/dt = hbar^{-1} P star E, E(0) = 1, degree by degree,
//! - `via_resolvent`: Laplace transform of the geometric development of
//!   1/(s - P), with the requested t-degree doubling as the s-depth.
//!
//! All three agree exactly where their windows overlap; the comparison
//! record keeps the intersected window.

use crate::error::Result;
use crate::laplace::{laplace, laplace_window};
use crate::poly::XuPoly;
use crate::scalar::{inv_factorial, Rat, Scalar};
use crate::swsym::resolvent;
use crate::twsym::{PrecisionWindow, TwSymbol};
use crate::wsym::WSymbol;
use std::collections::BTreeMap;

/// sum_{k <= D} t^k hbar^{-k} P^{star k} / k!.
pub fn starexp_series<C: Scalar>(p: &WSymbol<C>, d_trunc: usize) -> Result<TwSymbol<C>> {
    p.require_order_nonpositive()?;
    let mut slices = Vec::with_capacity(d_trunc + 1);
    let mut power = WSymbol::one(p.n());
    for k in 0..=d_trunc {
        if k > 0 {
            power = power.star(p);
        }
        // t^k hbar^{-k} P^{star k} / k!: levels shift up by k
        let slice = power.mul_hbar_pow(-(k as i64)).scale_rat(&inv_factorial(k));
        slices.push((k, slice));
    }
    Ok(TwSymbol::from_t_slices(p.n(), d_trunc, 0, slices))
}

/// Degree-by-degree solution of dE/dt = hbar^{-1} P star E with E(0) = 1.
pub fn starexp_ode<C: Scalar>(p: &WSymbol<C>, d_trunc: usize) -> Result<TwSymbol<C>> {
    p.require_order_nonpositive()?;
    let gen = p.mul_hbar_pow(-1); // hbar^{-1} P
    let mut slices = Vec::with_capacity(d_trunc + 1);
    let mut current = WSymbol::one(p.n());
    slices.push((0, current.clone()));
    for d in 0..d_trunc {
        current = gen
            .star(&current)
            .scale_rat(&Rat::new(1.into(), (d as i64 + 1).into()));
        slices.push((d + 1, current.clone()));
    }
    Ok(TwSymbol::from_t_slices(p.n(), d_trunc, 0, slices))
}

/// Laplace image of the resolvent; s-depth k maps to t-degree k, so the
/// requested t-degree doubles as the resolvent depth.
pub fn starexp_via_resolvent<C: Scalar>(p: &WSymbol<C>, d_trunc: usize) -> Result<TwSymbol<C>> {
    let r = resolvent(p, d_trunc)?;
    Ok(laplace(&r, d_trunc))
}

/// The three routes side by side with their shared guarantee.
#[derive(Debug, Clone)]
pub struct ExpRoutes<C> {
    pub series: TwSymbol<C>,
    pub ode: TwSymbol<C>,
    pub via_resolvent: TwSymbol<C>,
    pub agree_window: PrecisionWindow,
}

impl<C: Scalar> ExpRoutes<C> {
    pub fn compute(p: &WSymbol<C>, d_trunc: usize) -> Result<Self> {
        let series = starexp_series(p, d_trunc)?;
        let ode = starexp_ode(p, d_trunc)?;
        let r = resolvent(p, d_trunc)?;
        let via_resolvent = laplace(&r, d_trunc);
        let agree_window = PrecisionWindow::of_symbol(&series)
            .intersect(&PrecisionWindow::of_symbol(&ode))
            .intersect(&laplace_window(&r, d_trunc));
        Ok(ExpRoutes {
            series,
            ode,
            via_resolvent,
            agree_window,
        })
    }

    /// Exact agreement of all routes inside the shared window.
    pub fn agree(&self) -> bool {
        self.series.eq_within(&self.ode, &self.agree_window)
            && self.series.eq_within(&self.via_resolvent, &self.agree_window)
    }
}

/// Does E satisfy dE/dt = hbar^{-1} P star E through t-degree
/// d_trunc - 1 with E(0) = 1?
pub fn satisfies_evolution<C: Scalar>(e: &TwSymbol<C>, p: &WSymbol<C>) -> bool {
    if e.res_t() != WSymbol::one(p.n()) {
        return false;
    }
    let gen = p.mul_hbar_pow(-1);
    for d in 0..e.d_trunc() {
        let lhs = e
            .t_slice(d + 1)
            .scale(&C::from_int(d as i64 + 1));
        let rhs = gen.star(&e.t_slice(d));
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Truncated Taylor expansion of exp((e^{theta t} - 1) x1 u1 / hbar) for
/// the half-dimension-one oscillator: the closed form of its
/// star-exponential.
pub fn oscillator_closed_form<C: Scalar>(theta: &C, d_trunc: usize) -> TwSymbol<C> {
    let n = 1;
    let xu = &XuPoly::<C>::x_var(n, 0) * &XuPoly::u_var(n, 0);
    // g(t) = e^{theta t} - 1 truncated: valuation 1 in t
    let g: Vec<C> = (0..=d_trunc)
        .map(|r| {
            if r == 0 {
                C::zero()
            } else {
                let mut c = C::from_rat(inv_factorial(r));
                for _ in 0..r {
                    c = c * theta.clone();
                }
                c
            }
        })
        .collect();
    // powers of g in t
    let mut g_pow: Vec<Vec<C>> = vec![vec![C::zero(); d_trunc + 1]];
    g_pow[0][0] = C::one();
    for k in 1..=d_trunc {
        let prev = &g_pow[k - 1];
        let mut next = vec![C::zero(); d_trunc + 1];
        for (d1, c1) in prev.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (d2, c2) in g.iter().enumerate() {
                if d1 + d2 > d_trunc || c2.is_zero() {
                    continue;
                }
                next[d1 + d2] = next[d1 + d2].clone() + c1.clone() * c2.clone();
            }
        }
        g_pow.push(next);
    }
    // exp(g * xu / hbar) = sum_k g^k (xu)^k hbar^{-k} / k!
    let mut out = TwSymbol::zero(n, d_trunc, 0);
    for (k, pow) in g_pow.iter().enumerate() {
        let base = xu.pow(k).scale_rat(&inv_factorial(k));
        for (d, c) in pow.iter().enumerate() {
            if !c.is_zero() {
                out.add_at(k as i64, d, base.scale(c));
            }
        }
    }
    out
}

/// Unfiltered bigraded series: map (hbar-level, t-degree) -> coefficient,
/// truncated at a level bound and a t-degree bound. This is NOT a t-side
/// symbol; the path-integral factor exp(x u / hbar) has t-constant terms
/// at every positive level, outside any filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedSeries<C> {
    n: usize,
    level_max: i64,
    d_max: usize,
    terms: BTreeMap<(i64, usize), XuPoly<C>>,
}

impl<C: Scalar> BigradedSeries<C> {
    pub fn zero(n: usize, level_max: i64, d_max: usize) -> Self {
        BigradedSeries {
            n,
            level_max,
            d_max,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level_max(&self) -> i64 {
        self.level_max
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, usize), &XuPoly<C>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, j: i64, d: usize) -> XuPoly<C> {
        self.terms
            .get(&(j, d))
            .cloned()
            .unwrap_or_else(|| XuPoly::zero(self.n))
    }

    pub fn insert(&mut self, j: i64, d: usize, p: XuPoly<C>) {
        if j > self.level_max || d > self.d_max || p.is_zero() {
            return;
        }
        let sum = &self.coeff(j, d) + &p;
        if sum.is_zero() {
            self.terms.remove(&(j, d));
        } else {
            self.terms.insert((j, d), sum);
        }
    }

    pub fn from_tw(sym: &TwSymbol<C>, level_max: i64, d_max: usize) -> Self {
        let mut out = Self::zero(sym.n(), level_max, d_max);
        for (j, tp) in sym.levels() {
            for (d, p) in tp.coeffs() {
                out.insert(j, d, p.clone());
            }
        }
        out
    }

    /// Plain bigraded multiplication (levels and t-degrees both add).
    /// Exact through the shared truncation: both factors here only carry
    /// nonnegative levels, so no dropped term reaches a kept bidegree.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        let mut out = Self::zero(
            self.n,
            self.level_max.min(rhs.level_max),
            self.d_max.min(rhs.d_max),
        );
        for ((j1, d1), p1) in &self.terms {
            for ((j2, d2), p2) in &rhs.terms {
                if j1 + j2 > out.level_max || d1 + d2 > out.d_max {
                    continue;
                }
                out.insert(j1 + j2, d1 + d2, p1 * p2);
            }
        }
        out
    }
}

/// exp(x1 u1 / hbar) truncated at the level bound (t-constant).
pub fn exp_xu_over_hbar<C: Scalar>(level_max: i64, d_max: usize) -> BigradedSeries<C> {
    let n = 1;
    let xu = &XuPoly::<C>::x_var(n, 0) * &XuPoly::u_var(n, 0);
    let mut out = BigradedSeries::zero(n, level_max, d_max);
    for k in 0..=level_max.max(0) as usize {
        out.insert(k as i64, 0, xu.pow(k).scale_rat(&inv_factorial(k)));
    }
    out
}

/// Truncated expansion of exp(e^{theta t} x1 u1 / hbar): level k carries
/// e^{k theta t} (x1 u1)^k / k!.
pub fn fpi_series<C: Scalar>(theta: &C, level_max: i64, d_max: usize) -> BigradedSeries<C> {
    let n = 1;
    let xu = &XuPoly::<C>::x_var(n, 0) * &XuPoly::u_var(n, 0);
    let mut out = BigradedSeries::zero(n, level_max, d_max);
    for k in 0..=level_max.max(0) as usize {
        let base = xu.pow(k).scale_rat(&inv_factorial(k));
        // e^{k theta t} = sum_d (k theta)^d t^d / d!
        for d in 0..=d_max {
            let mut c = C::from_rat(inv_factorial(d));
            for _ in 0..d {
                c = c * theta.clone() * C::from_int(k as i64);
            }
            if !c.is_zero() {
                out.insert(k as i64, d, base.scale(&c));
            }
        }
    }
    out
}

/// The path-integral record for the oscillator: the series
/// exp(e^{theta t} x u / hbar) and the verification that multiplying the
/// star-exponential symbol by exp(x u / hbar) reproduces it bidegree by
/// bidegree through (level_max, d_max).
#[derive(Debug, Clone)]
pub struct FpiReport<C> {
    pub fpi: BigradedSeries<C>,
    pub product: BigradedSeries<C>,
    pub verified: bool,
}

pub fn fpi_oscillator<C: Scalar>(
    theta: &C,
    d_max: usize,
    level_max: i64,
) -> Result<FpiReport<C>> {
    let xu = &XuPoly::<C>::x_var(1, 0) * &XuPoly::u_var(1, 0);
    let p = WSymbol::from_poly(xu.scale(theta));
    // the star-exponential needs t-degrees up to d_max; levels beyond
    // level_max in the factor would be dropped by the product anyway
    let e = starexp_series(&p, d_max)?;
    let factor = exp_xu_over_hbar::<C>(level_max, d_max);
    let product = factor.mul(&BigradedSeries::from_tw(&e, level_max, d_max));
    let fpi = fpi_series(theta, level_max, d_max);
    let verified = product == fpi;
    Ok(FpiReport {
        fpi,
        product,
        verified,
    })
}
