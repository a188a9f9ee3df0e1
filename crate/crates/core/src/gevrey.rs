//! Growth diagnostics for coefficient tails.
//!
//! The analytic symbol classes are carved out by factorial bounds
//! |a_j| <= C eps^{-j} (-j)! on the negative levels and by factorial decay
//! M R^{j-m}/(j-m)! on the positive side. These checks are advisory: they
//! fit the witnesses (eps, C) and (R, M) over a finite window with exact
//! rational arithmetic and compare against caller thresholds. They never
//! gate the core operations.
//!
//! sup-norms over compacts are replaced by the coefficient norm: the sum
//! of absolute values of the rational coefficients after substituting
//! rational parameter values, an upper bound for the sup over the closed
//! unit polydisc. This choice of norm is ours; reports say so.

use crate::error::{Error, Result};
use crate::laplace::laplace;
use crate::param::ParamScalar;
use crate::poly::XuPoly;
use crate::scalar::{factorial, Rat};
use crate::slaurent::SLaurent;
use crate::swsym::SwSymbol;
use crate::twsym::TwSymbol;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Exact representative of base^(1/root), base >= 0, root >= 1.
///
/// Comparisons cross-exponentiate, so ordering and threshold tests are
/// decidable without leaving the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GevreyRatio {
    base: Rat,
    root: u32,
}

impl GevreyRatio {
    pub fn new(base: Rat, root: u32) -> Self {
        assert!(root >= 1, "root must be positive");
        assert!(!base.is_negative(), "base must be nonnegative");
        GevreyRatio { base, root }
    }

    pub fn base(&self) -> &Rat {
        &self.base
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    fn pow(r: &Rat, k: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..k {
            acc *= r;
        }
        acc
    }

    /// self <=> other, exactly: compare base_1^{root_2} with base_2^{root_1}.
    pub fn cmp_exact(&self, other: &Self) -> std::cmp::Ordering {
        Self::pow(&self.base, other.root).cmp(&Self::pow(&other.base, self.root))
    }

    /// self <= t, exactly: compare base with t^root.
    pub fn le_rat(&self, t: &Rat) -> bool {
        if t.is_negative() {
            return false;
        }
        self.base <= Self::pow(t, self.root)
    }

    /// The exact rational value when the base is a perfect root-th power.
    pub fn as_exact_rational(&self) -> Option<Rat> {
        if self.base.is_zero() {
            return Some(Rat::zero());
        }
        let num = self.base.numer().nth_root(self.root);
        let den = self.base.denom().nth_root(self.root);
        let candidate = Rat::new(num, den);
        if Self::pow(&candidate, self.root) == self.base {
            Some(candidate)
        } else {
            None
        }
    }

    /// Floating approximation for display only; verdicts never use it.
    pub fn approx(&self) -> f64 {
        self.base
            .to_f64()
            .map(|b| b.powf(1.0 / self.root as f64))
            .unwrap_or(f64::INFINITY)
    }
}

/// What reports mean by a norm; carried verbatim into rendered output.
pub const NORM_NOTE: &str = "norm = sum of |rational coefficients| after parameter \
substitution, an upper bound for the sup on the closed unit polydisc \
(this artifact's choice of norm)";

/// Sum of |coefficient| after substituting the parameter assignment:
/// a subadditive, submultiplicative norm bounding the sup on the closed
/// unit polydisc.
pub fn coeff_norm(p: &XuPoly<ParamScalar>, eval: &[Rat]) -> Result<Rat> {
    let mut acc = Rat::zero();
    for (_, c) in p.terms() {
        acc += c.eval_abs(eval)?;
    }
    Ok(acc)
}

/// Fit of the factorial growth bound |a_j| <= C eps^{-j} (-j)! over a
/// window of negative levels.
#[derive(Debug, Clone)]
pub struct GevreyReport {
    /// r_j = (||f_j|| / (-j)!)^(1/(-j)) per level.
    pub per_level_ratio: BTreeMap<i64, GevreyRatio>,
    /// sup of the ratios over the window.
    pub fitted_epsilon: GevreyRatio,
    /// witness constant; 1 once eps absorbs the sup.
    pub fitted_c: Rat,
    pub threshold: Rat,
    pub verdict: bool,
}

pub fn fit_gevrey_tail(
    levels: &BTreeMap<i64, XuPoly<ParamScalar>>,
    eval: &[Rat],
    threshold: &Rat,
) -> Result<GevreyReport> {
    let mut per_level_ratio = BTreeMap::new();
    for (&j, p) in levels {
        if j >= 0 {
            continue;
        }
        let k = (-j) as usize;
        let norm = coeff_norm(p, eval)?;
        let ratio = norm / Rat::from_integer(factorial(k));
        per_level_ratio.insert(j, GevreyRatio::new(ratio, k as u32));
    }
    let fitted_epsilon = per_level_ratio
        .values()
        .cloned()
        .max_by(|a, b| a.cmp_exact(b))
        .ok_or(Error::EmptyWindow)?;
    let verdict = fitted_epsilon.le_rat(threshold);
    Ok(GevreyReport {
        per_level_ratio,
        fitted_epsilon,
        fitted_c: Rat::one(),
        threshold: threshold.clone(),
        verdict,
    })
}

/// Structural and growth report for the positive levels of a t-side symbol.
#[derive(Debug, Clone)]
pub struct TwGrowthReport {
    /// Exact pass/fail of val_t(f_j) >= j - m.
    pub structural_ok: bool,
    /// (level, val_t, required) for each violation.
    pub violations: Vec<(i64, usize, usize)>,
    /// rho_j = (||f_{j, j-m}|| (j-m)!)^(1/(j-m)) per level j > m.
    pub per_level_ratio: BTreeMap<i64, GevreyRatio>,
    /// sup of the ratios: the fitted R with witness M = 1; None when the
    /// symbol has no levels above its order.
    pub fitted_r: Option<GevreyRatio>,
}

pub fn check_tw_positive_part(
    f: &TwSymbol<ParamScalar>,
    eval: &[Rat],
) -> Result<TwGrowthReport> {
    let m = f.order();
    let mut violations = Vec::new();
    let mut per_level_ratio = BTreeMap::new();
    for (j, tp) in f.levels() {
        if j <= m {
            continue;
        }
        let required = (j - m) as usize;
        if tp.val_t() < required {
            violations.push((j, tp.val_t(), required));
            continue;
        }
        let norm = coeff_norm(&tp.coeff(required), eval)?;
        let scaled = norm * Rat::from_integer(factorial(required));
        per_level_ratio.insert(j, GevreyRatio::new(scaled, required as u32));
    }
    let fitted_r = per_level_ratio
        .values()
        .cloned()
        .max_by(|a, b| a.cmp_exact(b));
    Ok(TwGrowthReport {
        structural_ok: violations.is_empty(),
        violations,
        per_level_ratio,
        fitted_r,
    })
}

/// Radius verdict of a truncated t-series by exact window tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusVerdict {
    /// The window certifies unbounded root growth with shrinking
    /// term-ratio radius: zero radius of convergence at desk scale.
    Divergent,
    /// No such certificate on this window.
    Convergent,
}

/// Root-test oracle on a finite window. Divergent iff over the nonzero
/// entries (n >= 1) the roots |a_n|^(1/n) strictly increase, the final
/// root is at least twice the first, and the term ratios |a_n|/|a_{n+1}|
/// strictly decrease (ruling out geometric growth, which has a positive
/// radius however steep). All comparisons are exact.
pub fn radius_verdict(t_coeffs: &[Rat]) -> RadiusVerdict {
    let entries: Vec<(u32, Rat)> = t_coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, a)| !a.is_zero())
        .map(|(n, a)| (n as u32, a.abs()))
        .collect();
    if entries.len() < 3 {
        return RadiusVerdict::Convergent;
    }
    for w in entries.windows(2) {
        let (n1, a1) = &w[0];
        let (n2, a2) = &w[1];
        // roots must strictly increase: a2^(1/n2) > a1^(1/n1)
        let lhs = GevreyRatio::new(a2.clone(), *n2);
        let rhs = GevreyRatio::new(a1.clone(), *n1);
        if lhs.cmp_exact(&rhs) != std::cmp::Ordering::Greater {
            return RadiusVerdict::Convergent;
        }
    }
    // term ratios a_n / a_{n+1} strictly decreasing over consecutive entries
    let mut prev_ratio: Option<Rat> = None;
    for w in entries.windows(2) {
        if w[1].0 != w[0].0 + 1 {
            continue;
        }
        let ratio = &w[0].1 / &w[1].1;
        if let Some(p) = prev_ratio {
            if ratio >= p {
                return RadiusVerdict::Convergent;
            }
        }
        prev_ratio = Some(ratio);
    }
    // net growth: last root at least twice the first
    let (n1, a1) = entries.first().unwrap();
    let (nl, al) = entries.last().unwrap();
    let two = Rat::from_integer(BigInt::from(2));
    let lhs = GevreyRatio::pow(al, *n1);
    let rhs = GevreyRatio::pow(&two, n1 * nl) * GevreyRatio::pow(a1, *nl);
    if lhs >= rhs {
        RadiusVerdict::Divergent
    } else {
        RadiusVerdict::Convergent
    }
}

/// Coefficient patterns for the formal-case demonstration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoPattern {
    /// c_j = ((-j)!)^2: the Laplace image has t-coefficients n!.
    FactorialSquared,
    /// c_j = (-j)!: t-coefficients 1 (radius one).
    Factorial,
    /// c_j = 1: t-coefficients 1/n! (entire).
    Constant,
}

impl DemoPattern {
    fn coeff(&self, j: i64) -> Rat {
        let k = (-j) as usize;
        match self {
            DemoPattern::FactorialSquared => {
                let f = factorial(k);
                Rat::from_integer(&f * &f)
            }
            DemoPattern::Factorial => Rat::from_integer(factorial(k)),
            DemoPattern::Constant => Rat::one(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DemoReport {
    /// The hbar^0 coefficient of the Laplace image: t-coefficients
    /// c_{-n}/n! for n = 0..depth.
    pub t_coeffs: Vec<Rat>,
    pub verdict: RadiusVerdict,
}

/// Push sum_j c_j hbar^{-j} / (s - 1) through the Laplace transform and
/// run the radius test on the hbar^0 coefficient. With coefficients
/// violating the factorial bound the image fails to be a germ at t = 0;
/// within the bound it converges.
pub fn formal_counterexample_demo(depth: usize, pattern: DemoPattern) -> DemoReport {
    assert!(depth >= 1, "depth must be positive");
    // 1/(s - 1) expanded at infinity: all depths up to the window
    let geom: SLaurent<Rat> = {
        let mut s = SLaurent::zero(0, depth);
        for d in 0..=depth {
            s.insert(d, XuPoly::one(0));
        }
        s
    };
    let f: SwSymbol<Rat> = SwSymbol::from_levels(
        0,
        depth,
        (-(depth as i64)..=0).map(|j| (j, geom.scale(&pattern.coeff(j)))),
    );
    let img = laplace(&f, depth);
    let t_coeffs: Vec<Rat> = (0..=depth)
        .map(|d| img.level(0).coeff(d).constant_part())
        .collect();
    let verdict = radius_verdict(&t_coeffs);
    DemoReport { t_coeffs, verdict }
}
