//! Truncated polynomials in the central parameter t.
//!
//! A `TPoly` holds the t-expansion of one h-level of a t-side symbol:
//! coefficients for t^0 .. t^D, everything above the truncation degree D
//! dropped. The t-valuation of the zero polynomial is D + 1 by convention.

use crate::poly::XuPoly;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::ops::{Add, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPoly<C> {
    n: usize,
    d_trunc: usize,
    coeffs: BTreeMap<usize, XuPoly<C>>,
}

impl<C: Scalar> TPoly<C> {
    pub fn zero(n: usize, d_trunc: usize) -> Self {
        TPoly {
            n,
            d_trunc,
            coeffs: BTreeMap::new(),
        }
    }

    /// p * t^d, truncated.
    pub fn monomial(d_trunc: usize, d: usize, p: XuPoly<C>) -> Self {
        let mut out = Self::zero(p.n(), d_trunc);
        out.insert(d, p);
        out
    }

    pub fn constant(d_trunc: usize, p: XuPoly<C>) -> Self {
        Self::monomial(d_trunc, 0, p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_trunc(&self) -> usize {
        self.d_trunc
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

    /// Least degree with a nonzero coefficient; D + 1 for the zero polynomial.
    pub fn val_t(&self) -> usize {
        self.coeffs
            .keys()
            .next()
            .copied()
            .unwrap_or(self.d_trunc + 1)
    }

    /// Value at t = 0.
    pub fn at_zero(&self) -> XuPoly<C> {
        self.coeff(0)
    }

    pub fn insert(&mut self, d: usize, p: XuPoly<C>) {
        if d > self.d_trunc || p.is_zero() {
            return;
        }
        let cur = self.coeff(d);
        let sum = &cur + &p;
        if sum.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, sum);
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n, self.d_trunc);
        for (&d, p) in &self.coeffs {
            out.insert(d, p.scale(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-C::one()))
    }

    /// Pointwise product in t, truncated at the shared degree.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        assert_eq!(self.d_trunc, rhs.d_trunc, "t-truncation mismatch");
        let mut out = Self::zero(self.n, self.d_trunc);
        for (&d1, p1) in &self.coeffs {
            for (&d2, p2) in &rhs.coeffs {
                if d1 + d2 > self.d_trunc {
                    break;
                }
                out.insert(d1 + d2, p1 * p2);
            }
        }
        out
    }

    pub fn derive(&self, alpha_u: &[u32], beta_x: &[u32]) -> Self {
        let mut out = Self::zero(self.n, self.d_trunc);
        for (&d, p) in &self.coeffs {
            out.insert(d, p.derive(alpha_u, beta_x));
        }
        out
    }

    /// d/dt, one degree of truncation spent.
    pub fn t_derivative(&self) -> Self {
        let mut out = Self::zero(self.n, self.d_trunc.saturating_sub(1));
        for (&d, p) in &self.coeffs {
            if d > 0 {
                out.insert(d - 1, p.scale(&C::from_int(d as i64)));
            }
        }
        out
    }
}

impl<C: Scalar> Add for &TPoly<C> {
    type Output = TPoly<C>;
    fn add(self, rhs: &TPoly<C>) -> TPoly<C> {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        assert_eq!(self.d_trunc, rhs.d_trunc, "t-truncation mismatch");
        let mut out = self.clone();
        for (&d, p) in &rhs.coeffs {
            out.insert(d, p.clone());
        }
        out
    }
}

impl<C: Scalar> Sub for &TPoly<C> {
    type Output = TPoly<C>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: &TPoly<C>) -> TPoly<C> {
        self + &rhs.neg()
    }
}
