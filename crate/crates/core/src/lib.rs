//! Exact symbol calculus for star products and star-exponentials.
//!
//! Three algebra layers share one coefficient domain (sparse polynomials
//! in paired phase-space variables over exact rationals with formal
//! parameters):
//!
//! - the h-algebra: Laurent series in hbar under the Leibniz (normal /
//!   Wick ordered) star product, with [u_i, x_j] = delta_ij hbar
//!   ([`WSymbol`]);
//! - the s-algebra: adds a central variable s, with levels multiplied by
//!   convolution of Laurent principal parts at infinity ([`SwSymbol`]);
//! - the t-algebra: the image of the s-algebra under the formal Laplace
//!   transform s^{-n-1} -> t^n hbar^{-n} / n!, where the convolution
//!   becomes the pointwise product ([`TwSymbol`]).
//!
//! The payoff is the star-exponential exp(t/hbar P) of any order-<= 0
//! symbol, computable by series, by an evolution equation, or through the
//! resolvent, with all routes agreeing exactly ([`starexp`]).
//!
//! The tower is generic over the coefficient [`Scalar`]; the aliases at
//! the crate root fix the exact rational-with-parameters instantiation
//! that the parser, printer and CLI work with.

pub mod context;
pub mod error;
pub mod gevrey;
pub mod laplace;
pub mod lower;
pub mod param;
pub mod parse;
pub mod poly;
pub mod render;
pub mod sample;
pub mod scalar;
pub mod slaurent;
pub mod starexp;
pub mod swsym;
pub mod tpoly;
pub mod twsym;
pub mod wsym;

pub use context::VarContext;
pub use error::{Error, Result};
pub use param::ParamScalar;
pub use scalar::{Rat, Scalar};
pub use twsym::PrecisionWindow;

/// Phase-space polynomial over the default scalar.
pub type XuPoly = poly::XuPoly<ParamScalar>;
/// Truncated t-polynomial over the default scalar.
pub type TPoly = tpoly::TPoly<ParamScalar>;
/// Laurent principal part at infinity over the default scalar.
pub type SLaurent = slaurent::SLaurent<ParamScalar>;
/// h-algebra symbol over the default scalar.
pub type WSymbol = wsym::WSymbol<ParamScalar>;
/// s-algebra symbol over the default scalar.
pub type SwSymbol = swsym::SwSymbol<ParamScalar>;
/// t-algebra symbol over the default scalar.
pub type TwSymbol = twsym::TwSymbol<ParamScalar>;
/// Star-exponential route comparison over the default scalar.
pub type ExpRoutes = starexp::ExpRoutes<ParamScalar>;
/// Unfiltered bigraded series over the default scalar.
pub type BigradedSeries = starexp::BigradedSeries<ParamScalar>;
