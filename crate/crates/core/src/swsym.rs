//! The s-side algebra: hbar-Laurent symbols whose level coefficients are
//! Laurent principal parts in s, multiplied by the Leibniz formula with a
//! convolution product in the s variable.
//!
//! `iota` embeds an h-symbol as (1/s) P, `res_s` extracts the residue
//! normalization (the s^{-1} coefficient of every level); res_s after iota
//! is the identity and both are algebra morphisms.

use crate::error::Result;
use crate::scalar::{multi_factorial, multi_indices, Rat, Scalar};
use crate::slaurent::SLaurent;
use crate::wsym::WSymbol;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

#[derive(Debug, Clone)]
pub struct SwSymbol<C> {
    n: usize,
    s_trunc: usize,
    j_min: i64,
    levels: BTreeMap<i64, SLaurent<C>>,
}

impl<C: Scalar> PartialEq for SwSymbol<C> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.s_trunc == other.s_trunc && self.levels == other.levels
    }
}
impl<C: Scalar> Eq for SwSymbol<C> {}

impl<C: Scalar> SwSymbol<C> {
    pub fn zero(n: usize, s_trunc: usize) -> Self {
        SwSymbol {
            n,
            s_trunc,
            j_min: 0,
            levels: BTreeMap::new(),
        }
    }

    /// The multiplicative unit 1/s.
    pub fn unit(n: usize, s_trunc: usize) -> Self {
        let mut out = Self::zero(n, s_trunc);
        out.add_level(0, SLaurent::unit(n, s_trunc));
        out
    }

    pub fn from_level(n: usize, s_trunc: usize, j: i64, f: SLaurent<C>) -> Self {
        let mut out = Self::zero(n, s_trunc);
        out.add_level(j, f);
        out.j_min = out.lowest_key().unwrap_or(0).min(0);
        out
    }

    pub fn from_levels(
        n: usize,
        s_trunc: usize,
        it: impl IntoIterator<Item = (i64, SLaurent<C>)>,
    ) -> Self {
        let mut out = Self::zero(n, s_trunc);
        for (j, f) in it {
            out.add_level(j, f);
        }
        out.j_min = out.lowest_key().unwrap_or(0).min(0);
        out
    }

    pub fn with_floor(mut self, j_min: i64) -> Self {
        self.j_min = j_min.min(self.lowest_key().unwrap_or(j_min));
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s_trunc(&self) -> usize {
        self.s_trunc
    }

    pub fn j_min(&self) -> i64 {
        self.j_min
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> impl Iterator<Item = (i64, &SLaurent<C>)> {
        self.levels.iter().map(|(&j, f)| (j, f))
    }

    pub fn level(&self, j: i64) -> SLaurent<C> {
        self.levels
            .get(&j)
            .cloned()
            .unwrap_or_else(|| SLaurent::zero(self.n, self.s_trunc))
    }

    fn lowest_key(&self) -> Option<i64> {
        self.levels.keys().next().copied()
    }

    pub fn order(&self) -> Option<i64> {
        self.levels.keys().next_back().copied()
    }

    pub fn add_level(&mut self, j: i64, f: SLaurent<C>) {
        if f.is_zero() {
            return;
        }
        assert_eq!(f.n(), self.n, "half-dimension mismatch");
        let f = f.truncated(self.s_trunc);
        let sum = &self.level(j) + &f;
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
        let mut out = Self::zero(self.n, self.s_trunc);
        for (&j, f) in &self.levels {
            out.add_level(j, f.scale(c));
        }
        out.finish(self.j_min)
    }

    fn max_u_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.n];
        for f in self.levels.values() {
            for (_, p) in f.coeffs() {
                for (mi, v) in m.iter_mut().zip(p.max_u_exponents()) {
                    *mi = (*mi).max(v);
                }
            }
        }
        m
    }

    fn max_x_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.n];
        for f in self.levels.values() {
            for (_, p) in f.coeffs() {
                for (mi, v) in m.iter_mut().zip(p.max_x_exponents()) {
                    *mi = (*mi).max(v);
                }
            }
        }
        m
    }

    /// Leibniz star product with s-convolution in place of the pointwise
    /// coefficient product. Output depth is the smaller input depth.
    pub fn star(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        let bounds: Vec<u32> = self
            .max_u_exponents()
            .iter()
            .zip(rhs.max_x_exponents())
            .map(|(&a, b)| a.min(b))
            .collect();
        let mut out = Self::zero(self.n, self.s_trunc.min(rhs.s_trunc));
        let alpha_zero = vec![0u32; self.n];
        for alpha in multi_indices(&bounds) {
            let beta = alpha_zero.clone();
            let weight = C::from_rat(Rat::new(1.into(), multi_factorial(&alpha)));
            let shift: i64 = alpha.iter().map(|&a| a as i64).sum();
            for (i, f) in self.levels() {
                let fa = f.derive(&alpha, &beta);
                if fa.is_zero() {
                    continue;
                }
                for (j, g) in rhs.levels() {
                    let gb = g.derive(&beta, &alpha);
                    if gb.is_zero() {
                        continue;
                    }
                    out.add_level(i + j - shift, fa.convolve(&gb).scale(&weight));
                }
            }
        }
        out.finish(self.j_min + rhs.j_min)
    }
}

impl<C: Scalar> Add for &SwSymbol<C> {
    type Output = SwSymbol<C>;
    fn add(self, rhs: &SwSymbol<C>) -> SwSymbol<C> {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        let mut out = SwSymbol::zero(self.n, self.s_trunc.min(rhs.s_trunc));
        for (j, f) in self.levels() {
            out.add_level(j, f.clone());
        }
        for (j, f) in rhs.levels() {
            out.add_level(j, f.clone());
        }
        out.finish(self.j_min + rhs.j_min)
    }
}

impl<C: Scalar> Sub for &SwSymbol<C> {
    type Output = SwSymbol<C>;
    fn sub(self, rhs: &SwSymbol<C>) -> SwSymbol<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Neg for &SwSymbol<C> {
    type Output = SwSymbol<C>;
    fn neg(self) -> SwSymbol<C> {
        self.scale(&(-C::one()))
    }
}

/// Embed an h-symbol as (1/s) P: every level lands at s-depth 0.
pub fn iota<C: Scalar>(p: &WSymbol<C>, s_trunc: usize) -> SwSymbol<C> {
    let mut out = SwSymbol::zero(p.n(), s_trunc);
    for (j, poly) in p.levels() {
        out.add_level(j, SLaurent::monomial(s_trunc, 0, poly.clone()));
    }
    out.finish(p.j_min())
}

/// Residue morphism: keep the s^{-1} coefficient of every level
/// (normalized so the residue of 1/s is 1).
pub fn res_s<C: Scalar>(f: &SwSymbol<C>) -> WSymbol<C> {
    let mut out = WSymbol::zero(f.n());
    for (j, lau) in f.levels() {
        out.add_level(j, lau.coeff(0));
    }
    out.with_floor(f.j_min())
}

/// The geometric development of 1/(s - P) through s-depth `s_trunc`:
/// sum_{k=0..s_trunc} P^{star k} s^{-k-1}. Requires ord(P) <= 0.
pub fn resolvent<C: Scalar>(p: &WSymbol<C>, s_trunc: usize) -> Result<SwSymbol<C>> {
    p.require_order_nonpositive()?;
    let mut out = SwSymbol::zero(p.n(), s_trunc);
    let mut power = WSymbol::one(p.n());
    for k in 0..=s_trunc {
        if k > 0 {
            power = power.star(p);
        }
        for (j, poly) in power.levels() {
            out.add_level(j, SLaurent::monomial(s_trunc, k, poly.clone()));
        }
    }
    let floor = (0..=s_trunc as i64)
        .map(|k| k * p.j_min())
        .min()
        .unwrap_or(0);
    Ok(out.finish(floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::param::ParamScalar;
    use crate::poly::XuPoly;

    type W = WSymbol<ParamScalar>;
    type P = XuPoly<ParamScalar>;
    type Sw = SwSymbol<ParamScalar>;

    fn xu() -> P {
        &P::x_var(1, 0) * &P::u_var(1, 0)
    }

    #[test]
    fn star_with_derivative_correction() {
        // (u1 s^-1) star (x1 s^-1) = x1 u1 s^-1 + hbar s^-1
        let a = Sw::from_level(1, 4, 0, SLaurent::monomial(4, 0, P::u_var(1, 0)));
        let b = Sw::from_level(1, 4, 0, SLaurent::monomial(4, 0, P::x_var(1, 0)));
        let expected = Sw::from_levels(
            1,
            4,
            [
                (0, SLaurent::monomial(4, 0, xu())),
                (-1, SLaurent::unit(1, 4)),
            ],
        );
        assert_eq!(a.star(&b), expected);
    }

    #[test]
    fn unit_is_one_over_s() {
        let p = Sw::from_levels(
            1,
            3,
            [
                (0, SLaurent::monomial(3, 1, xu())),
                (-2, SLaurent::basis(1, 3, 2)),
            ],
        );
        let one = Sw::unit(1, 3);
        assert_eq!(one.star(&p), p);
        assert_eq!(p.star(&one), p);
    }

    #[test]
    fn depth_rule_without_derivatives() {
        // (x1 s^-2) star (x1 s^-2) = 2 x1^2 s^-3
        let a = Sw::from_level(1, 5, 0, SLaurent::monomial(5, 1, P::x_var(1, 0)));
        let sq = P::x_var(1, 0).pow(2).scale(&ParamScalar::from_int(2));
        assert_eq!(
            a.star(&a),
            Sw::from_level(1, 5, 0, SLaurent::monomial(5, 2, sq))
        );
    }

    #[test]
    fn iota_matches_embedding() {
        assert_eq!(iota(&W::one(1), 3), Sw::unit(1, 3));
        // linearity: x1 u1 + hbar -> (x1 u1 + hbar) s^-1
        let p = &W::from_poly(xu()) + &W::hbar_power(1, 1);
        let img = iota(&p, 3);
        assert_eq!(img.level(0), SLaurent::monomial(3, 0, xu()));
        assert_eq!(img.level(-1), SLaurent::unit(1, 3));
    }

    #[test]
    fn iota_is_morphism_on_example() {
        let u = W::from_poly(P::u_var(1, 0));
        let x = W::from_poly(P::x_var(1, 0));
        assert_eq!(iota(&u, 4).star(&iota(&x, 4)), iota(&u.star(&x), 4));
    }

    #[test]
    fn residue_extraction() {
        assert_eq!(res_s(&Sw::unit(1, 3)), W::one(1));
        // only the s^-1 coefficient survives
        let f = Sw::from_level(1, 3, 0, SLaurent::monomial(3, 2, P::x_var(1, 0)));
        assert!(res_s(&f).is_zero());
        // res_s after iota is the identity
        let p = &W::from_poly(xu()).mul_hbar_pow(2) + &W::one(1);
        assert_eq!(res_s(&iota(&p, 5)), p);
    }

    #[test]
    fn resolvent_series() {
        // 1/(s - 0) = s^-1
        assert_eq!(resolvent(&W::zero(1), 3).unwrap(), Sw::unit(1, 3));
        // 1/(s - 1) = s^-1 + s^-2 + s^-3 + ...
        let r = resolvent(&W::one(1), 2).unwrap();
        for d in 0..=2 {
            assert_eq!(r.level(0).coeff(d), P::one(1));
        }
        // depth 2 for the oscillator Hamiltonian
        let theta = ParamScalar::param(0);
        let p = W::from_poly(xu().scale(&theta));
        let r = resolvent(&p, 2).unwrap();
        assert_eq!(r.level(0).coeff(0), P::one(1));
        assert_eq!(r.level(0).coeff(1), xu().scale(&theta));
        let t2 = theta.clone() * theta;
        assert_eq!(
            r.level(0).coeff(2),
            P::monomial(1, vec![2], vec![2], t2.clone())
        );
        assert_eq!(r.level(-1).coeff(2), xu().scale(&t2));
    }

    #[test]
    fn resolvent_rejects_positive_order() {
        let bad = W::from_level(1, 1, P::x_var(1, 0));
        assert_eq!(resolvent(&bad, 3), Err(Error::PositiveOrder(1)));
    }
}
