//! Numerical laboratory for the argument of the Riemann zeta function on the critical
//! line: S(t), its antiderivative S₁(t), the prime Dirichlet polynomial W(t) that
//! approximates Fejér averages of S₁, moment bounds, and a search for large values of
//! ±S₁ on short intervals.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod argument;
pub mod dirichlet;
pub mod error;
pub mod moments;
pub mod numeric;
pub mod report;
pub mod search;
pub mod smoothing;
pub mod zeta;

pub use error::{LabError, Result};
