//! The t-side algebra: two-sided hbar series whose level coefficients are
//! truncated t-polynomials, multiplied by the Leibniz formula with the
//! pointwise t-product and the Cauchy product across hbar-levels.
//!
//! A symbol of declared order `m` satisfies the filtration invariant
//! val_t(f_j) >= j - m for every level j > m (the truncated shadow of the
//! analytic growth bound); levels beyond m + D then vanish identically.
//! The declared order is carried as data since tightness is not decidable
//! from a truncated window.
//!
//! Truncation bookkeeping: the hbar-Cauchy product at level k sums pairs
//! with unboundedly negative i, but a pair missing below a factor's floor
//! forces the partner level above k - floor, whose t-valuation the
//! invariant bounds below. [`PrecisionWindow`] materializes the resulting
//! per-level guarantee; equality tests restrict to windows.

use crate::error::{Error, Result};
use crate::scalar::{multi_factorial, multi_indices, Rat, Scalar};
use crate::tpoly::TPoly;
use crate::wsym::WSymbol;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

#[derive(Debug, Clone)]
pub struct TwSymbol<C> {
    n: usize,
    d_trunc: usize,
    m: i64,
    j_min: i64,
    levels: BTreeMap<i64, TPoly<C>>,
}

impl<C: Scalar> PartialEq for TwSymbol<C> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.d_trunc == other.d_trunc
            && self.m == other.m
            && self.levels == other.levels
    }
}
impl<C: Scalar> Eq for TwSymbol<C> {}

impl<C: Scalar> TwSymbol<C> {
    pub fn zero(n: usize, d_trunc: usize, m: i64) -> Self {
        TwSymbol {
            n,
            d_trunc,
            m,
            j_min: 0,
            levels: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, d_trunc: usize) -> Self {
        let mut out = Self::zero(n, d_trunc, 0);
        out.add_at(0, 0, crate::poly::XuPoly::one(n));
        out
    }

    pub fn from_levels(
        n: usize,
        d_trunc: usize,
        m: i64,
        it: impl IntoIterator<Item = (i64, TPoly<C>)>,
    ) -> Self {
        let mut out = Self::zero(n, d_trunc, m);
        for (j, tp) in it {
            out.add_level(j, tp);
        }
        out.j_min = out.lowest_key().unwrap_or(0).min(0);
        out
    }

    /// Assemble from t-slices: slice d is the WSymbol collecting the
    /// coefficients of t^d across all levels.
    pub fn from_t_slices(
        n: usize,
        d_trunc: usize,
        m: i64,
        slices: impl IntoIterator<Item = (usize, WSymbol<C>)>,
    ) -> Self {
        let mut out = Self::zero(n, d_trunc, m);
        for (d, slice) in slices {
            if d > d_trunc {
                continue;
            }
            for (j, poly) in slice.levels() {
                out.add_at(j, d, poly.clone());
            }
        }
        out.j_min = out.lowest_key().unwrap_or(0).min(0);
        out
    }

    pub fn with_floor(mut self, j_min: i64) -> Self {
        self.j_min = j_min.min(self.lowest_key().unwrap_or(j_min));
        self
    }

    pub fn with_order(mut self, m: i64) -> Self {
        self.m = m;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_trunc(&self) -> usize {
        self.d_trunc
    }

    /// Declared order.
    pub fn order(&self) -> i64 {
        self.m
    }

    pub fn j_min(&self) -> i64 {
        self.j_min
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> impl Iterator<Item = (i64, &TPoly<C>)> {
        self.levels.iter().map(|(&j, tp)| (j, tp))
    }

    pub fn level(&self, j: i64) -> TPoly<C> {
        self.levels
            .get(&j)
            .cloned()
            .unwrap_or_else(|| TPoly::zero(self.n, self.d_trunc))
    }

    pub fn coeff_at(&self, j: i64, d: usize) -> crate::poly::XuPoly<C> {
        self.level(j).coeff(d)
    }

    fn lowest_key(&self) -> Option<i64> {
        self.levels.keys().next().copied()
    }

    pub fn highest_key(&self) -> Option<i64> {
        self.levels.keys().next_back().copied()
    }

    pub fn add_level(&mut self, j: i64, tp: TPoly<C>) {
        if tp.is_zero() {
            return;
        }
        assert_eq!(tp.n(), self.n, "half-dimension mismatch");
        assert_eq!(tp.d_trunc(), self.d_trunc, "t-truncation mismatch");
        let sum = &self.level(j) + &tp;
        if sum.is_zero() {
            self.levels.remove(&j);
        } else {
            self.levels.insert(j, sum);
        }
    }

    pub fn add_at(&mut self, j: i64, d: usize, p: crate::poly::XuPoly<C>) {
        if d > self.d_trunc || p.is_zero() {
            return;
        }
        self.add_level(j, TPoly::monomial(self.d_trunc, d, p));
    }

    fn finish(mut self, j_min: i64) -> Self {
        self.j_min = j_min.min(self.lowest_key().unwrap_or(j_min));
        self
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n, self.d_trunc, self.m);
        for (&j, tp) in &self.levels {
            out.add_level(j, tp.scale(c));
        }
        out.finish(self.j_min)
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&C::from_rat(r.clone()))
    }

    /// Multiply by the central scalar hbar^k: keys shift by -k and the
    /// declared order drops by k, preserving the filtration invariant.
    pub fn mul_hbar_pow(&self, k: i64) -> Self {
        let mut out = Self::zero(self.n, self.d_trunc, self.m - k);
        for (&j, tp) in &self.levels {
            out.add_level(j - k, tp.clone());
        }
        out.finish(self.j_min - k)
    }

    /// The t-degree-d slice as an h-symbol.
    pub fn t_slice(&self, d: usize) -> WSymbol<C> {
        let mut out = WSymbol::zero(self.n);
        for (&j, tp) in &self.levels {
            out.add_level(j, tp.coeff(d));
        }
        out.with_floor(self.j_min)
    }

    /// d/dt. Costs one degree of t-truncation; the declared order rises by
    /// one (t-valuations drop by one above the order).
    pub fn t_derivative(&self) -> Self {
        let mut out = Self::zero(self.n, self.d_trunc.saturating_sub(1), self.m + 1);
        for (&j, tp) in &self.levels {
            out.add_level(j, tp.t_derivative());
        }
        out.finish(self.j_min)
    }

    /// Evaluate at t = 0 (the residue back to the h-algebra).
    pub fn res_t(&self) -> WSymbol<C> {
        let mut out = WSymbol::zero(self.n);
        for (&j, tp) in &self.levels {
            out.add_level(j, tp.at_zero());
        }
        out.with_floor(self.j_min)
    }

    /// val_t(f_j) >= j - m for every level above the declared order.
    pub fn filtration_check(&self) -> Result<()> {
        for (&j, tp) in &self.levels {
            if j > self.m {
                let required = (j - self.m) as usize;
                if tp.val_t() < required {
                    return Err(Error::FiltrationViolation {
                        level: j,
                        val_t: tp.val_t(),
                        required,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn satisfies_filtration(&self) -> bool {
        self.filtration_check().is_ok()
    }

    fn max_u_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.n];
        for tp in self.levels.values() {
            for (_, p) in tp.coeffs() {
                for (mi, v) in m.iter_mut().zip(p.max_u_exponents()) {
                    *mi = (*mi).max(v);
                }
            }
        }
        m
    }

    fn max_x_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.n];
        for tp in self.levels.values() {
            for (_, p) in tp.coeffs() {
                for (mi, v) in m.iter_mut().zip(p.max_x_exponents()) {
                    *mi = (*mi).max(v);
                }
            }
        }
        m
    }

    /// Leibniz star product with the pointwise t-product per level pair;
    /// the declared order is additive.
    pub fn star(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        assert_eq!(self.d_trunc, rhs.d_trunc, "t-truncation mismatch");
        let bounds: Vec<u32> = self
            .max_u_exponents()
            .iter()
            .zip(rhs.max_x_exponents())
            .map(|(&a, b)| a.min(b))
            .collect();
        let zero = vec![0u32; self.n];
        let mut out = Self::zero(self.n, self.d_trunc, self.m + rhs.m);
        for alpha in multi_indices(&bounds) {
            let weight = C::from_rat(Rat::new(1.into(), multi_factorial(&alpha)));
            let shift: i64 = alpha.iter().map(|&a| a as i64).sum();
            for (i, f) in self.levels() {
                let fa = f.derive(&alpha, &zero);
                if fa.is_zero() {
                    continue;
                }
                for (j, g) in rhs.levels() {
                    let gb = g.derive(&zero, &alpha);
                    if gb.is_zero() {
                        continue;
                    }
                    out.add_level(i + j - shift, fa.mul(&gb).scale(&weight));
                }
            }
        }
        out.finish(self.j_min + rhs.j_min)
    }

    /// Coefficient equality inside a window: for every level at or above
    /// the window floor, the t-coefficients agree up to the level's cap.
    pub fn eq_within(&self, rhs: &Self, window: &PrecisionWindow) -> bool {
        if self.n != rhs.n {
            return false;
        }
        let keys: std::collections::BTreeSet<i64> = self
            .levels
            .keys()
            .chain(rhs.levels.keys())
            .copied()
            .collect();
        for j in keys {
            let Some(cap) = window.t_exact(j) else {
                continue;
            };
            let a = self.level(j);
            let b = rhs.level(j);
            for d in 0..=cap.min(self.d_trunc).min(rhs.d_trunc) {
                if a.coeff(d) != b.coeff(d) {
                    return false;
                }
            }
        }
        true
    }
}

impl<C: Scalar> Add for &TwSymbol<C> {
    type Output = TwSymbol<C>;
    fn add(self, rhs: &TwSymbol<C>) -> TwSymbol<C> {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        assert_eq!(self.d_trunc, rhs.d_trunc, "t-truncation mismatch");
        let mut out = TwSymbol::zero(self.n, self.d_trunc, self.m.max(rhs.m));
        for (j, tp) in self.levels() {
            out.add_level(j, tp.clone());
        }
        for (j, tp) in rhs.levels() {
            out.add_level(j, tp.clone());
        }
        out.finish(self.j_min + rhs.j_min)
    }
}

impl<C: Scalar> Sub for &TwSymbol<C> {
    type Output = TwSymbol<C>;
    fn sub(self, rhs: &TwSymbol<C>) -> TwSymbol<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Neg for &TwSymbol<C> {
    type Output = TwSymbol<C>;
    fn neg(self) -> TwSymbol<C> {
        self.scale(&(-C::one()))
    }
}

/// Embed an h-symbol with t-constant coefficients; equals the Laplace image
/// of the (1/s) embedding, and evaluating back at t = 0 recovers the input.
pub fn iota_t<C: Scalar>(p: &WSymbol<C>, d_trunc: usize) -> TwSymbol<C> {
    let m = p.order().unwrap_or(0);
    let mut out = TwSymbol::zero(p.n(), d_trunc, m);
    for (j, poly) in p.levels() {
        out.add_at(j, 0, poly.clone());
    }
    out.finish(p.j_min())
}

/// Per-level guarantee of exactness in the t-degree.
///
/// Levels below `floor` carry no guarantee. At level j >= floor the
/// coefficients are exact for t-degrees 0..=cap(j); caps stores only the
/// levels where the cap falls below `default_cap`, and a negative stored
/// cap means the level is entirely untrusted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionWindow {
    floor: i64,
    default_cap: usize,
    caps: BTreeMap<i64, i64>,
}

impl PrecisionWindow {
    /// Uniform guarantee: every level at or above the floor exact to `cap`.
    pub fn full(floor: i64, cap: usize) -> Self {
        PrecisionWindow {
            floor,
            default_cap: cap,
            caps: BTreeMap::new(),
        }
    }

    /// The coarse window a symbol's own metadata supports.
    pub fn of_symbol<C: Scalar>(sym: &TwSymbol<C>) -> Self {
        Self::full(sym.j_min(), sym.d_trunc())
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn default_cap(&self) -> usize {
        self.default_cap
    }

    pub fn caps(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.caps.iter().map(|(&j, &c)| (j, c))
    }

    fn raw_cap(&self, j: i64) -> i64 {
        self.caps
            .get(&j)
            .copied()
            .unwrap_or(self.default_cap as i64)
    }

    /// Maximal t-degree guaranteed exact at level j, None below the floor
    /// or where nothing is guaranteed.
    pub fn t_exact(&self, j: i64) -> Option<usize> {
        if j < self.floor {
            return None;
        }
        let c = self.raw_cap(j);
        if c < 0 {
            None
        } else {
            Some(c as usize)
        }
    }

    fn set_cap(&mut self, j: i64, cap: i64) {
        if cap < self.default_cap as i64 {
            let e = self.caps.entry(j).or_insert(cap);
            *e = (*e).min(cap);
        }
    }

    /// Lower the cap at one level (builder form).
    pub fn with_cap(mut self, j: i64, cap: i64) -> Self {
        self.set_cap(j, cap);
        self
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let floor = self.floor.max(other.floor);
        let default_cap = self.default_cap.min(other.default_cap);
        let mut out = PrecisionWindow {
            floor,
            default_cap,
            caps: BTreeMap::new(),
        };
        for (&j, _) in self.caps.iter().chain(other.caps.iter()) {
            if j >= floor {
                out.set_cap(j, self.raw_cap(j).min(other.raw_cap(j)));
            }
        }
        out
    }

    /// Window of a Leibniz product, from the factors and their windows.
    ///
    /// A pair missing below a factor's floor pairs with a level above
    /// k - floor, whose t-valuation the partner's filtration invariant
    /// bounds by (k - floor) - m_partner; so level k of the product is
    /// exact in t-degrees d <= k - floor(f) - m(g) and d <= k - floor(g)
    /// - m(f), and up to the truncation degree once k clears both bounds.
    ///
    /// A capped in-window position degrades the output the same way, via
    /// cap + max(0, k - level - m_partner).
    pub fn product<C: Scalar>(
        f: &TwSymbol<C>,
        fw: &Self,
        g: &TwSymbol<C>,
        gw: &Self,
    ) -> Self {
        let d_out = f.d_trunc().min(g.d_trunc()) as i64;
        let floor = fw.floor + gw.floor;
        let mf = f.order();
        let mg = g.order();
        let mut out = PrecisionWindow {
            floor,
            default_cap: d_out as usize,
            caps: BTreeMap::new(),
        };
        // levels where some bound can still fall below d_out
        let mut stop = (fw.floor + mg).max(gw.floor + mf) + d_out;
        for (j, c) in fw.caps() {
            stop = stop.max(j + mg + (d_out - c));
        }
        for (j, c) in gw.caps() {
            stop = stop.max(j + mf + (d_out - c));
        }
        for k in floor..=stop {
            let mut cap = d_out.min(k - fw.floor - mg).min(k - gw.floor - mf);
            for (i, c) in fw.caps() {
                cap = cap.min(c + (k - i - mg).max(0));
            }
            for (i, c) in gw.caps() {
                cap = cap.min(c + (k - i - mf).max(0));
            }
            out.set_cap(k, cap);
        }
        out
    }
}
