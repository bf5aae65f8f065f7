//! Exact combinatorial quotients of torus actions on affine charts.
//!
//! The crate computes quotient fans of positive orthants (and of arbitrary
//! fans) under lattice projections, GIT chamber decompositions, fiber
//! polytopes and their Minkowski sums, and checks explicit birational maps
//! (mutation maps, chart transitions) as exact rational identities.
//!
//! Everything is exact: integers are [`num_bigint::BigInt`] and rationals
//! are [`num_rational::BigRational`]. No floating point is used anywhere.

#![allow(clippy::needless_range_loop)] // matrix code reads better indexed

pub mod acceptance;
pub mod birational;
pub mod catalog;
pub mod error;
pub mod json;
pub mod linalg;
pub mod polyhedral;
pub mod quotients;

pub use error::{Error, Result};
