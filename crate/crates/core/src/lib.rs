//! Exact growth series and growth partition functions for cancellative
//! homogeneous monoids.
//!
//! The crate enumerates balls in the Cayley graph of a finitely presented
//! homogeneous monoid (or a free group), counts embeddings of connected
//! configurations, performs the kabi / φ base change of the configuration
//! algebra, and evaluates the resulting partition functions. For Artin
//! monoids of finite type it also builds the denominator polynomial of the
//! growth function and isolates its smallest positive root.
//!
//! Arithmetic is generic over a [`Scalar`]; exact work uses [`Rational`].

#![allow(clippy::needless_range_loop)]

pub mod cayley;
pub mod confalg;
pub mod config;
pub mod coxeter;
pub mod error;
pub mod interval;
pub mod omega;
pub mod poly;
pub mod presentation;
pub mod scalar;
pub mod series;
pub mod words;

pub use error::{Error, Result};
pub use scalar::Scalar;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar used throughout.
pub type Rational = BigRational;
/// Arbitrary precision integer.
pub type Integer = BigInt;

/// Truncated power series with exact rational coefficients.
pub type RationalSeries = series::Series<Rational>;
/// Truncated power series with `f64` coefficients.
pub type FloatSeries = series::Series<f64>;
/// Truncated configuration-algebra element with exact coefficients.
pub type RationalConfPoly = confalg::ConfPoly<Rational>;
/// Complex scalar for evaluating partition functions at non-real roots.
pub type Complex64 = num_complex::Complex<f64>;
