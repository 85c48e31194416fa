//! Numerical building blocks shared by the analytic modules.

pub mod quad;
pub mod sum;

pub use quad::{integrate, AdaptiveOptions, GaussLegendre, QuadResult};
pub use sum::NeumaierSum;
