//! Laurent principal parts at infinity in the variable s.
//!
//! An `SLaurent` represents sum_{d=0..Ns} c_d s^{-d-1}: a pure principal
//! part at infinity, the representative normal form for classes of
//! holomorphic functions outside a compact modulo entire functions. The
//! entire part is identically absent by construction.
//!
//! The algebra product is convolution, defined on the basis by
//! s^{-a-1} * s^{-b-1} = C(a+b, a) s^{-(a+b)-1} and extended bilinearly;
//! the rule is degree-additive, so truncating at the shared depth drops
//! nothing that a kept coefficient depends on.

use crate::poly::XuPoly;
use crate::scalar::{binomial, Rat, Scalar};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;
use std::ops::{Add, Sub};

/// Depth d holds the coefficient of s^{-d-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SLaurent<C> {
    n: usize,
    s_trunc: usize,
    coeffs: BTreeMap<usize, XuPoly<C>>,
}

impl<C: Scalar> SLaurent<C> {
    pub fn zero(n: usize, s_trunc: usize) -> Self {
        SLaurent {
            n,
            s_trunc,
            coeffs: BTreeMap::new(),
        }
    }

    /// p * s^{-d-1}.
    pub fn monomial(s_trunc: usize, d: usize, p: XuPoly<C>) -> Self {
        let mut out = Self::zero(p.n(), s_trunc);
        out.insert(d, p);
        out
    }

    /// The basis element s^{-d-1}.
    pub fn basis(n: usize, s_trunc: usize, d: usize) -> Self {
        Self::monomial(s_trunc, d, XuPoly::one(n))
    }

    /// s^{-1}, the convolution unit.
    pub fn unit(n: usize, s_trunc: usize) -> Self {
        Self::basis(n, s_trunc, 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s_trunc(&self) -> usize {
        self.s_trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &XuPoly<C>)> {
        self.coeffs.iter().map(|(&d, p)| (d, p))
    }

    pub fn coeff(&self, d: usize) -> XuPoly<C> {
        self.coeffs
            .get(&d)
            .cloned()
            .unwrap_or_else(|| XuPoly::zero(self.n))
    }

    pub fn insert(&mut self, d: usize, p: XuPoly<C>) {
        if d > self.s_trunc || p.is_zero() {
            return;
        }
        let sum = &self.coeff(d) + &p;
        if sum.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, sum);
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n, self.s_trunc);
        for (&d, p) in &self.coeffs {
            out.insert(d, p.scale(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-C::one()))
    }

    /// Convolution product; output depth is the smaller input depth.
    pub fn convolve(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        let mut out = Self::zero(self.n, self.s_trunc.min(rhs.s_trunc));
        for (&a, p) in &self.coeffs {
            for (&b, q) in &rhs.coeffs {
                if a + b > out.s_trunc {
                    break;
                }
                let w = C::from_rat(Rat::new(binomial(a + b, a), BigInt::one()));
                out.insert(a + b, (p * q).scale(&w));
            }
        }
        out
    }

    pub fn derive(&self, alpha_u: &[u32], beta_x: &[u32]) -> Self {
        let mut out = Self::zero(self.n, self.s_trunc);
        for (&d, p) in &self.coeffs {
            out.insert(d, p.derive(alpha_u, beta_x));
        }
        out
    }

    /// Restrict to a shallower truncation depth.
    pub fn truncated(&self, s_trunc: usize) -> Self {
        let mut out = Self::zero(self.n, s_trunc);
        for (&d, p) in &self.coeffs {
            out.insert(d, p.clone());
        }
        out
    }
}

impl<C: Scalar> Add for &SLaurent<C> {
    type Output = SLaurent<C>;
    fn add(self, rhs: &SLaurent<C>) -> SLaurent<C> {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        let mut out = SLaurent::zero(self.n, self.s_trunc.min(rhs.s_trunc));
        for (&d, p) in &self.coeffs {
            out.insert(d, p.clone());
        }
        for (&d, p) in &rhs.coeffs {
            out.insert(d, p.clone());
        }
        out
    }
}

impl<C: Scalar> Sub for &SLaurent<C> {
    type Output = SLaurent<C>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: &SLaurent<C>) -> SLaurent<C> {
        self + &rhs.neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::ParamScalar;

    type S = SLaurent<ParamScalar>;

    #[test]
    fn basis_rule_small_cases() {
        // s^-1 * s^-1 = s^-1
        let e0 = S::basis(1, 4, 0);
        assert_eq!(e0.convolve(&e0), e0);
        // s^-2 * s^-2 = 2 s^-3
        let e1 = S::basis(1, 4, 1);
        assert_eq!(
            e1.convolve(&e1),
            S::monomial(4, 2, XuPoly::constant(1, ParamScalar::from_int(2)))
        );
    }

    #[test]
    fn coefficients_ride_along() {
        // (x1 s^-1) * (u1 s^-1) = x1 u1 s^-1
        let a = S::monomial(3, 0, XuPoly::x_var(1, 0));
        let b = S::monomial(3, 0, XuPoly::u_var(1, 0));
        let xu = &XuPoly::<ParamScalar>::x_var(1, 0) * &XuPoly::u_var(1, 0);
        assert_eq!(a.convolve(&b), S::monomial(3, 0, xu));
    }

    #[test]
    fn depth_truncates_to_min() {
        let a = S::basis(1, 5, 3);
        let b = S::basis(1, 2, 0);
        let c = a.convolve(&b);
        assert_eq!(c.s_trunc(), 2);
        // depth 3 exceeds the output depth: dropped entirely
        assert!(c.is_zero());
    }
}
