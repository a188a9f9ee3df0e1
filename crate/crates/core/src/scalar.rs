//! Coefficient scalars.
//!
//! The whole symbol tower (`XuPoly`, `WSymbol`, `SwSymbol`, `TwSymbol`, ...)
//! is generic over a [`Scalar`]: a commutative ring with decidable equality
//! into which the rationals embed. The crate root instantiates everything
//! with [`crate::ParamScalar`] (exact rationals with formal parameters);
//! plain [`Rat`] works too when no parameters are in play.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Neg, Sub};

/// Exact rational number, reduced with positive denominator.
pub type Rat = num_rational::BigRational;

/// Commutative-ring coefficients with an embedding of the rationals.
///
/// `Zero`/`One` (num-traits) supply addition, multiplication and the
/// identities; equality must be structural on a canonical form so that
/// every test assertion is decidable.
pub trait Scalar:
    Clone + Eq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
    fn from_rat(r: Rat) -> Self;

    fn from_int(k: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(k)))
    }
}

impl Scalar for Rat {
    fn from_rat(r: Rat) -> Self {
        r
    }
}

/// k! as a big integer.
pub fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

/// Multi-index factorial: product of the componentwise factorials.
pub fn multi_factorial(alpha: &[u32]) -> BigInt {
    alpha
        .iter()
        .map(|&a| factorial(a as usize))
        .product::<BigInt>()
}

/// Binomial coefficient C(n, k) as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// 1/k! as a rational.
pub fn inv_factorial(k: usize) -> Rat {
    Rat::new(BigInt::one(), factorial(k))
}

/// Enumerate all multi-indices alpha with `0 <= alpha[i] <= bounds[i]`.
pub fn multi_indices(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; bounds.len()]];
    for (i, &b) in bounds.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for idx in out {
            for v in 0..=b {
                let mut idx2 = idx.clone();
                idx2[i] = v;
                next.push(idx2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(multi_factorial(&[2, 3]), BigInt::from(12));
    }

    #[test]
    fn binomials_match_pascal() {
        // independent oracle: additive Pascal recurrence
        let mut row = vec![BigInt::one()];
        for n in 0..=12usize {
            for (k, c) in row.iter().enumerate() {
                assert_eq!(binomial(n, k), *c, "C({n},{k})");
            }
            let mut next = vec![BigInt::one()];
            for k in 1..row.len() {
                next.push(&row[k - 1] + &row[k]);
            }
            next.push(BigInt::one());
            row = next;
        }
    }

    #[test]
    fn multi_index_enumeration() {
        let idx = multi_indices(&[1, 2]);
        assert_eq!(idx.len(), 6);
        assert!(idx.contains(&vec![1, 2]));
        assert!(idx.contains(&vec![0, 0]));
        // empty bounds: the single empty index (n = 0 case)
        assert_eq!(multi_indices(&[]), vec![Vec::<u32>::new()]);
    }
}
