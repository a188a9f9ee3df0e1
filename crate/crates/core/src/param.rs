//! Exact rationals with formal parameters.
//!
//! A [`ParamScalar`] is a polynomial over the rationals in finitely many
//! declared parameters (theta, ...): a sparse map from the parameter
//! exponent vector to an exact rational. Arithmetic never divides by a
//! parameter, so the ring is closed under everything the calculus needs.
//!
//! Invariants:
//! - no stored term has a zero coefficient,
//! - exponent vectors carry no trailing zeros (canonical key),
//! - rationals are reduced with positive denominator (num-rational does this).

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Parameter exponent vector, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct ParamExp(Vec<u32>);

impl ParamExp {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        ParamExp(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &ParamExp) -> ParamExp {
        let len = self.0.len().max(other.0.len());
        let mut exps = vec![0u32; len];
        for (i, &e) in self.0.iter().enumerate() {
            exps[i] += e;
        }
        for (i, &e) in other.0.iter().enumerate() {
            exps[i] += e;
        }
        ParamExp(exps)
    }
}

/// Exact rational times monomials in the declared formal parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamScalar {
    terms: BTreeMap<ParamExp, Rat>,
}

impl ParamScalar {
    pub fn from_rat(r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(ParamExp::default(), r);
        }
        ParamScalar { terms }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(k)))
    }

    /// num/den as an exact rational.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rat(Rat::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The parameter with the given declaration index, e.g. `param(0)` = theta.
    pub fn param(index: usize) -> Self {
        let mut exps = vec![0u32; index + 1];
        exps[index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(ParamExp::new(exps), Rat::one());
        ParamScalar { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamExp, &Rat)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ParamExp::is_constant)
    }

    /// The constant term's rational value (zero if absent).
    pub fn constant_part(&self) -> Rat {
        self.terms
            .get(&ParamExp::default())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Largest parameter index mentioned, if any.
    pub fn max_param_index(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|e| e.exps().len().checked_sub(1))
            .max()
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    /// Substitute rational values for the parameters.
    pub fn eval(&self, assignment: &[Rat]) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (exp, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in exp.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = assignment.get(i).ok_or(Error::UnassignedParameter(i))?;
                for _ in 0..e {
                    term *= v;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Sum of absolute values of the rational coefficients after evaluation
    /// would not be right here; this is the plain |.| of the evaluated value.
    pub fn eval_abs(&self, assignment: &[Rat]) -> Result<Rat> {
        Ok(self.eval(assignment)?.abs())
    }

    fn insert_term(&mut self, exp: ParamExp, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl Add for ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: ParamScalar) -> ParamScalar {
        let mut out = self;
        for (exp, coeff) in rhs.terms {
            out.insert_term(exp, coeff);
        }
        out
    }
}

impl Sub for ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: ParamScalar) -> ParamScalar {
        self + (-rhs)
    }
}

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: ParamScalar) -> ParamScalar {
        let mut out = ParamScalar::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.insert_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }
}

impl Zero for ParamScalar {
    fn zero() -> Self {
        ParamScalar::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for ParamScalar {
    fn one() -> Self {
        ParamScalar::from_rat(Rat::one())
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_part().is_one()
    }
}

impl Scalar for ParamScalar {
    fn from_rat(r: Rat) -> Self {
        ParamScalar::from_rat(r)
    }
}
