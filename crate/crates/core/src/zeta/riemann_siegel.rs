//! Riemann–Siegel formula for Hardy's Z function.

use std::f64::consts::PI;

use super::tables::{chebyshev, RS_C0, RS_C1, RS_C2, RS_C3};
use super::{ln_n, theta_unchecked};
use crate::numeric::NeumaierSum;

/// Z(t) by the Riemann–Siegel formula with corrections C0..C3.
///
/// Intended for t ≥ 10⁴; below that the omitted C4 term is no longer negligible.
pub fn riemann_siegel_z(t: f64) -> f64 {
    z_with_bound(t).0
}

pub(crate) fn z_with_bound(t: f64) -> (f64, f64) {
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let th = theta_unchecked(t);

    let mut main = NeumaierSum::new();
    for k in (1..=n).rev() {
        let phase = th - t * ln_n(k);
        main += phase.cos() / (k as f64).sqrt();
    }
    let main = 2.0 * main.sum();

    let x = 2.0 * p - 1.0;
    let inv_a = 1.0 / a;
    let correction = chebyshev(&RS_C0, x)
        + inv_a
            * (chebyshev(&RS_C1, x)
                + inv_a * (chebyshev(&RS_C2, x) + inv_a * chebyshev(&RS_C3, x)));
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let z = main + sign * correction / a.sqrt();

    // Omitted C4 a^{-4} term (|C4| < 2·10⁻³) plus phase rounding in the main sum.
    let truncation = 2e-3 * a.powf(-4.5);
    let rounding = f64::EPSILON * t * (n as f64).ln().max(1.0) * (n as f64).sqrt().max(1.0);
    (z, truncation + rounding)
}
