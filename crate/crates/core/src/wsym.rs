//! Laurent series in hbar with polynomial coefficients under the Leibniz
//! star product (normal / Wick ordering, [u, x] = hbar).
//!
//! A symbol sum_j p_j hbar^{-j} is stored as the finite map j -> p_j with
//! ord(hbar) = -1, so hbar^k sits at key -k and the order of a symbol is
//! its largest key. Each symbol carries an exactness floor `j_min`: levels
//! at or above the floor are trusted; binary operations sum the floors and
//! clamp to the lowest materialized key so the invariant keys >= j_min
//! always holds. For symbols built from polynomial data every level is in
//! fact exact; the floor is bookkeeping for truncated pipelines.
//!
//! Equality compares the level data (and half-dimension), not the floor.

use crate::error::{Error, Result};
use crate::poly::XuPoly;
use crate::scalar::{multi_factorial, multi_indices, Rat, Scalar};
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

#[derive(Debug, Clone)]
pub struct WSymbol<C> {
    n: usize,
    j_min: i64,
    levels: BTreeMap<i64, XuPoly<C>>,
}

impl<C: Scalar> PartialEq for WSymbol<C> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.levels == other.levels
    }
}
impl<C: Scalar> Eq for WSymbol<C> {}

impl<C: Scalar> WSymbol<C> {
    pub fn zero(n: usize) -> Self {
        WSymbol {
            n,
            j_min: 0,
            levels: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_level(n, 0, XuPoly::one(n))
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::from_level(n, 0, XuPoly::constant(n, c))
    }

    /// hbar^k (stored at key -k).
    pub fn hbar_power(n: usize, k: i64) -> Self {
        Self::from_level(n, -k, XuPoly::one(n))
    }

    /// A single-level symbol p * hbar^{-j}.
    pub fn from_level(n: usize, j: i64, p: XuPoly<C>) -> Self {
        let mut levels = BTreeMap::new();
        if !p.is_zero() {
            assert_eq!(p.n(), n, "half-dimension mismatch");
            levels.insert(j, p);
        }
        let j_min = levels.keys().next().copied().unwrap_or(0).min(0);
        WSymbol { n, j_min, levels }
    }

    /// An order-zero polynomial symbol.
    pub fn from_poly(p: XuPoly<C>) -> Self {
        Self::from_level(p.n(), 0, p)
    }

    pub fn from_levels(n: usize, it: impl IntoIterator<Item = (i64, XuPoly<C>)>) -> Self {
        let mut out = Self::zero(n);
        for (j, p) in it {
            out.add_level(j, p);
        }
        out.j_min = out.lowest_key().unwrap_or(0).min(0);
        out
    }

    /// Override the exactness floor (clamped so keys stay above it).
    pub fn with_floor(mut self, j_min: i64) -> Self {
        self.j_min = j_min.min(self.lowest_key().unwrap_or(j_min));
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j_min(&self) -> i64 {
        self.j_min
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> impl Iterator<Item = (i64, &XuPoly<C>)> {
        self.levels.iter().map(|(&j, p)| (j, p))
    }

    pub fn level(&self, j: i64) -> XuPoly<C> {
        self.levels
            .get(&j)
            .cloned()
            .unwrap_or_else(|| XuPoly::zero(self.n))
    }

    fn lowest_key(&self) -> Option<i64> {
        self.levels.keys().next().copied()
    }

    /// Tight order: the largest key; None is the minus-infinity sentinel of
    /// the zero symbol.
    pub fn order(&self) -> Option<i64> {
        self.levels.keys().next_back().copied()
    }

    /// Order and leading coefficient (the image in the graded ring).
    pub fn principal_symbol(&self) -> Option<(i64, XuPoly<C>)> {
        let m = self.order()?;
        Some((m, self.level(m)))
    }

    pub fn add_level(&mut self, j: i64, p: XuPoly<C>) {
        if p.is_zero() {
            return;
        }
        assert_eq!(p.n(), self.n, "half-dimension mismatch");
        let sum = &self.level(j) + &p;
        if sum.is_zero() {
            self.levels.remove(&j);
        } else {
            self.levels.insert(j, sum);
        }
    }

    fn finish(mut self, j_min: i64) -> Self {
        self.j_min = j_min.min(self.lowest_key().unwrap_or(j_min));
        self
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n);
        for (&j, p) in &self.levels {
            out.add_level(j, p.scale(c));
        }
        out.finish(self.j_min)
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&C::from_rat(r.clone()))
    }

    /// Multiply by the central scalar hbar^k: shifts every key by -k.
    pub fn mul_hbar_pow(&self, k: i64) -> Self {
        let mut out = Self::zero(self.n);
        for (&j, p) in &self.levels {
            out.add_level(j - k, p.clone());
        }
        out.finish(self.j_min - k)
    }

    pub fn derive_u(&self, alpha: &[u32]) -> Self {
        let beta = vec![0; self.n];
        let mut out = Self::zero(self.n);
        for (&j, p) in &self.levels {
            out.add_level(j, p.derive(alpha, &beta));
        }
        out.finish(self.j_min)
    }

    pub fn derive_x(&self, beta: &[u32]) -> Self {
        let alpha = vec![0; self.n];
        let mut out = Self::zero(self.n);
        for (&j, p) in &self.levels {
            out.add_level(j, p.derive(&alpha, beta));
        }
        out.finish(self.j_min)
    }

    /// Coefficient-wise pullback along (x, u) -> (A x, A^{-T} u).
    pub fn affine_substitute(&self, a: &[Vec<Rat>]) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (&j, p) in &self.levels {
            out.add_level(j, p.affine_substitute(a)?);
        }
        Ok(out.finish(self.j_min))
    }

    /// Componentwise max u-exponent over all levels.
    pub fn max_u_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.n];
        for p in self.levels.values() {
            for (mi, v) in m.iter_mut().zip(p.max_u_exponents()) {
                *mi = (*mi).max(v);
            }
        }
        m
    }

    /// Componentwise max x-exponent over all levels.
    pub fn max_x_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.n];
        for p in self.levels.values() {
            for (mi, v) in m.iter_mut().zip(p.max_x_exponents()) {
                *mi = (*mi).max(v);
            }
        }
        m
    }

    /// The Leibniz star product:
    /// sum_alpha hbar^{|alpha|}/alpha! d^alpha_u(P) d^alpha_x(Q).
    ///
    /// The alpha-sum terminates once |alpha| exceeds the u-degree of P or
    /// the x-degree of Q, so the result is exact for polynomial data.
    pub fn star(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        let bounds: Vec<u32> = self
            .max_u_exponents()
            .iter()
            .zip(rhs.max_x_exponents())
            .map(|(&a, b)| a.min(b))
            .collect();
        let mut out = Self::zero(self.n);
        for alpha in multi_indices(&bounds) {
            let da = self.derive_u(&alpha);
            if da.is_zero() {
                continue;
            }
            let db = rhs.derive_x(&alpha);
            if db.is_zero() {
                continue;
            }
            let weight = C::from_rat(Rat::new(1.into(), multi_factorial(&alpha)));
            let shift: i64 = alpha.iter().map(|&a| a as i64).sum();
            for (i, p) in da.levels() {
                for (j, q) in db.levels() {
                    out.add_level(i + j - shift, (p * q).scale(&weight));
                }
            }
        }
        out.finish(self.j_min + rhs.j_min)
    }

    /// k-th star power; the empty product is 1.
    pub fn pow_star(&self, k: usize) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = acc.star(self);
        }
        acc
    }

    /// P (star) Q - Q (star) P.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.star(rhs) - &rhs.star(self)
    }

    /// Fails unless ord(P) <= 0 (needed for resolvents and exponentials).
    pub fn require_order_nonpositive(&self) -> Result<()> {
        match self.order() {
            Some(m) if m > 0 => Err(Error::PositiveOrder(m)),
            _ => Ok(()),
        }
    }
}

impl<C: Scalar> Add for &WSymbol<C> {
    type Output = WSymbol<C>;
    fn add(self, rhs: &WSymbol<C>) -> WSymbol<C> {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        let mut out = self.clone();
        for (j, p) in rhs.levels() {
            out.add_level(j, p.clone());
        }
        out.finish(self.j_min + rhs.j_min)
    }
}

impl<C: Scalar> Sub for &WSymbol<C> {
    type Output = WSymbol<C>;
    fn sub(self, rhs: &WSymbol<C>) -> WSymbol<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Neg for &WSymbol<C> {
    type Output = WSymbol<C>;
    fn neg(self) -> WSymbol<C> {
        self.scale(&(-C::one()))
    }
}
