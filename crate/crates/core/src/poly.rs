//! Sparse polynomials in the phase-space variables x_1..x_n, u_1..u_n.
//!
//! Coefficient functions of symbols live here. The representation is a
//! sparse map from the exponent pair (alpha for x, beta for u) to a nonzero
//! scalar; all exponent vectors have length `n` (the half-dimension).

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Monomial exponents: x^xe * u^ue, both vectors of length n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct XuExp {
    pub xe: Vec<u32>,
    pub ue: Vec<u32>,
}

impl XuExp {
    pub fn constant(n: usize) -> Self {
        XuExp {
            xe: vec![0; n],
            ue: vec![0; n],
        }
    }

    fn mul(&self, other: &XuExp) -> XuExp {
        XuExp {
            xe: self.xe.iter().zip(&other.xe).map(|(a, b)| a + b).collect(),
            ue: self.ue.iter().zip(&other.ue).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Sparse polynomial in x_1..x_n, u_1..u_n over the scalar ring `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XuPoly<C> {
    n: usize,
    terms: BTreeMap<XuExp, C>,
}

impl<C: Scalar> XuPoly<C> {
    pub fn zero(n: usize) -> Self {
        XuPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: C) -> Self {
        let mut p = Self::zero(n);
        p.insert_term(XuExp::constant(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, C::one())
    }

    /// x_i (zero-based index).
    pub fn x_var(n: usize, i: usize) -> Self {
        assert!(i < n, "x index {i} out of range for n = {n}");
        let mut e = XuExp::constant(n);
        e.xe[i] = 1;
        let mut p = Self::zero(n);
        p.insert_term(e, C::one());
        p
    }

    /// u_i (zero-based index).
    pub fn u_var(n: usize, i: usize) -> Self {
        assert!(i < n, "u index {i} out of range for n = {n}");
        let mut e = XuExp::constant(n);
        e.ue[i] = 1;
        let mut p = Self::zero(n);
        p.insert_term(e, C::one());
        p
    }

    pub fn monomial(n: usize, xe: Vec<u32>, ue: Vec<u32>, c: C) -> Self {
        assert_eq!(xe.len(), n);
        assert_eq!(ue.len(), n);
        let mut p = Self::zero(n);
        p.insert_term(XuExp { xe, ue }, c);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XuExp, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &XuExp) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    /// Constant term.
    pub fn constant_part(&self) -> C {
        self.coeff(&XuExp::constant(self.n))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.xe.iter().sum::<u32>() + e.ue.iter().sum::<u32>())
            .max()
    }

    /// Componentwise maximum of the u-exponents over all terms.
    pub fn max_u_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.n];
        for e in self.terms.keys() {
            for (mi, &v) in m.iter_mut().zip(&e.ue) {
                *mi = (*mi).max(v);
            }
        }
        m
    }

    /// Componentwise maximum of the x-exponents over all terms.
    pub fn max_x_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.n];
        for e in self.terms.keys() {
            for (mi, &v) in m.iter_mut().zip(&e.xe) {
                *mi = (*mi).max(v);
            }
        }
        m
    }

    fn insert_term(&mut self, exp: XuExp, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        let mut out = Self::zero(self.n);
        for (e, v) in &self.terms {
            out.insert_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&C::from_rat(r.clone()))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Iterated partial derivative: alpha many d/du, beta many d/dx.
    pub fn derive(&self, alpha_u: &[u32], beta_x: &[u32]) -> Self {
        assert_eq!(alpha_u.len(), self.n, "u-derivative index length");
        assert_eq!(beta_x.len(), self.n, "x-derivative index length");
        let mut out = Self::zero(self.n);
        'term: for (e, c) in &self.terms {
            let mut factor = C::one();
            let mut xe = e.xe.clone();
            let mut ue = e.ue.clone();
            for i in 0..self.n {
                for _ in 0..alpha_u[i] {
                    if ue[i] == 0 {
                        continue 'term;
                    }
                    factor = factor * C::from_int(ue[i] as i64);
                    ue[i] -= 1;
                }
                for _ in 0..beta_x[i] {
                    if xe[i] == 0 {
                        continue 'term;
                    }
                    factor = factor * C::from_int(xe[i] as i64);
                    xe[i] -= 1;
                }
            }
            out.insert_term(XuExp { xe, ue }, c.clone() * factor);
        }
        out
    }

    pub fn derive_u(&self, alpha: &[u32]) -> Self {
        self.derive(alpha, &vec![0; self.n])
    }

    pub fn derive_x(&self, beta: &[u32]) -> Self {
        self.derive(&vec![0; self.n], beta)
    }

    /// Pullback along the linear symplectic map (x, u) -> (A x, A^{-T} u).
    ///
    /// Degree-preserving for invertible A; fails on a singular matrix.
    pub fn affine_substitute(&self, a: &[Vec<Rat>]) -> Result<Self> {
        let n = self.n;
        assert_eq!(a.len(), n, "matrix size");
        let inv = invert_matrix(a).ok_or(Error::SingularMatrix)?;
        // images of the generators
        let mut x_img = Vec::with_capacity(n);
        let mut u_img = Vec::with_capacity(n);
        for i in 0..n {
            let mut xi = Self::zero(n);
            let mut ui = Self::zero(n);
            for j in 0..n {
                xi = &xi + &Self::x_var(n, j).scale_rat(&a[i][j]);
                // A^{-T}[i][j] = inv[j][i]
                ui = &ui + &Self::u_var(n, j).scale_rat(&inv[j][i]);
            }
            x_img.push(xi);
            u_img.push(ui);
        }
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut term = Self::constant(n, c.clone());
            for i in 0..n {
                if e.xe[i] > 0 {
                    term = &term * &x_img[i].pow(e.xe[i] as usize);
                }
                if e.ue[i] > 0 {
                    term = &term * &u_img[i].pow(e.ue[i] as usize);
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Bounds for the Leibniz alpha-sum of self (star) other: the sum
    /// terminates once alpha exceeds the u-degrees of the left factor or
    /// the x-degrees of the right factor componentwise.
    pub fn leibniz_bounds(left: &Self, right: &Self) -> Vec<u32> {
        left.max_u_exponents()
            .iter()
            .zip(right.max_x_exponents())
            .map(|(&a, b)| a.min(b))
            .collect()
    }
}

impl<C: Scalar> Add for &XuPoly<C> {
    type Output = XuPoly<C>;
    fn add(self, rhs: &XuPoly<C>) -> XuPoly<C> {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Scalar> Sub for &XuPoly<C> {
    type Output = XuPoly<C>;
    fn sub(self, rhs: &XuPoly<C>) -> XuPoly<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Neg for &XuPoly<C> {
    type Output = XuPoly<C>;
    fn neg(self) -> XuPoly<C> {
        XuPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<C: Scalar> Mul for &XuPoly<C> {
    type Output = XuPoly<C>;
    fn mul(self, rhs: &XuPoly<C>) -> XuPoly<C> {
        assert_eq!(self.n, rhs.n, "half-dimension mismatch");
        let mut out = XuPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.insert_term(e1.mul(e2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

/// Exact inverse of a rational matrix by Gauss-Jordan elimination.
/// Returns None when the matrix is singular.
pub fn invert_matrix(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let mv = m[col][j].clone();
                let iv = inv[col][j].clone();
                m[r][j] -= f.clone() * mv;
                inv[r][j] -= f.clone() * iv;
            }
        }
    }
    Some(inv)
}

/// The pairing sum_i d/du_i(a) * d/dx_i(b), the first-order piece of the
/// Leibniz product (affine-invariant).
pub fn pairing<C: Scalar>(a: &XuPoly<C>, b: &XuPoly<C>) -> XuPoly<C> {
    assert_eq!(a.n(), b.n(), "half-dimension mismatch");
    let n = a.n();
    let mut out = XuPoly::zero(n);
    for i in 0..n {
        let mut alpha = vec![0; n];
        alpha[i] = 1;
        out = &out + &(&a.derive_u(&alpha) * &b.derive_x(&alpha));
    }
    out
}
