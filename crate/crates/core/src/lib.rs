//! Experimental machinery for the quantitative Glasner property of
//! prime-indexed polynomial matrix families acting between tori.
//!
//! The torus layer is generic over [`scalar::TorusScalar`]; exact work uses
//! [`ExactTorusPoint`] (arbitrary-precision rationals) and approximate work
//! uses [`FloatTorusPoint`].

// `!(x > 0.0)` is used on purpose so NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bump;
pub mod error;
pub mod exp_sums;
pub mod pair_counts;
pub mod polynomials;
pub mod primes;
pub mod scalar;
pub mod search;
pub mod stats;
pub mod torus;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use torus::{Metric, Verdict};

pub type Rational = BigRational;

pub type ExactTorusPoint = torus::TorusPoint<Rational>;
pub type FloatTorusPoint = torus::TorusPoint<f64>;
pub type FloatTorusPoint32 = torus::TorusPoint<f32>;

pub type ExactPointSet = torus::PointSet<Rational>;
pub type FloatPointSet = torus::PointSet<f64>;

pub type ExactDensityReport = torus::DensityReport<Rational>;
pub type FloatDensityReport = torus::DensityReport<f64>;

pub type BumpFunction = bump::Bump<f64>;
pub type BumpFunction32 = bump::Bump<f32>;
