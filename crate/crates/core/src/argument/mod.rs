//! The argument function S(t), its antiderivative S₁(t) and the normalizing constant C.
//!
//! S(T) is computed either by following arg ζ continuously along 2 → 2+iT → 1/2+iT, or
//! from the zero count through N(T) = θ(T)/π + 1 + S(T). S₁(T) is computed exactly as
//! (1/π)∫_{1/2}^∞ log|ζ(σ+iT)|dσ, or as C + ∫₀^T S(t)dt.

mod census;
mod window;

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::numeric::quad::simpson;
use crate::numeric::{integrate, AdaptiveOptions, GaussLegendre};
use crate::zeta::{self, hardy_z, log_abs_zeta, rs_theta, rs_theta_error, StripPoint};

pub use census::{count_zeros_upto, verified_zeros, VerifiedZeros};
pub use window::{S1Window, WindowCheck, WindowExtremes};

/// Initial σ-step of the path tracker.
const PATH_STEP: f64 = 0.05;
/// Maximum number of halvings of one path step.
const MAX_HALVINGS: u32 = 20;
/// Distance below which T counts as sitting on an ordinate.
const ORDINATE_PROXIMITY: f64 = 1e-9;
/// Offset used for the half-sum ½{S(T+δ) + S(T−δ)}.
const HALF_SUM_DELTA: f64 = 1e-6;
/// Default σ at which the strip integral is truncated.
pub const DEFAULT_CUTOFF: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SMethod {
    PathTracking,
    ZeroCounting,
}

/// A value of S(T).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArgumentValue {
    pub t: f64,
    pub s_value: f64,
    pub method: SMethod,
    pub est_error: f64,
}

/// A value of S₁(T).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct S1Value {
    pub t: f64,
    pub s1_value: f64,
    /// σ at which the strip integral was truncated (∞ for the integral route).
    pub tail_cutoff: f64,
    pub est_error: f64,
}

/// The constant C = (1/π)∫_{1/2}^∞ log|ζ(σ)|dσ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArgumentConstants {
    #[serde(rename = "C")]
    pub c: f64,
    pub est_error: f64,
}

fn check_range(name: &str, t: f64, lo: f64, hi: f64) -> Result<()> {
    if !(t >= lo && t <= hi) {
        return Err(LabError::domain(format!(
            "{name} needs {lo} <= T <= {hi:e}, got {t}"
        )));
    }
    Ok(())
}

/// S(T) by continuous variation of arg ζ along 2 → 2+iT → 1/2+iT.
///
/// On the vertical segment Re ζ(2+it) ≥ 2 − ζ(2) > 0, so the continuous argument there is
/// the principal one. The horizontal segment is walked from σ = 2 down to 1/2 with steps
/// of at most 0.05, halved until each step changes the argument by less than π/2.
/// Within 10⁻⁹ of an ordinate the half-sum ½{S(T+δ) + S(T−δ)}, δ = 10⁻⁶, is returned.
pub fn s_via_path(t: f64) -> Result<ArgumentValue> {
    check_range("s_via_path", t, 10.0, 1e6)?;
    let (s_value, est_error) = if near_ordinate(t)? {
        let (a, ea) = path_s(t + HALF_SUM_DELTA)?;
        let (b, eb) = path_s(t - HALF_SUM_DELTA)?;
        (0.5 * (a + b), 0.5 * (ea + eb))
    } else {
        path_s(t)?
    };
    Ok(ArgumentValue {
        t,
        s_value,
        method: SMethod::PathTracking,
        est_error,
    })
}

/// Whether Z changes sign within 10⁻⁹ of t (t counts as an ordinate for the half-sum).
pub fn near_ordinate(t: f64) -> Result<bool> {
    if t - ORDINATE_PROXIMITY < 10.0 {
        return Ok(false);
    }
    let a = hardy_z(t - ORDINATE_PROXIMITY)?;
    let b = hardy_z(t + ORDINATE_PROXIMITY)?;
    Ok(a * b <= 0.0)
}

/// Path-tracked S(t) for any 0 < t ≤ 10⁸, without the half-sum convention.
pub(crate) fn path_s(t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(LabError::domain("path tracking needs t > 0"));
    }
    let start = zeta::zeta_at(2.0, t)?;
    let mut z0 = start.value;
    let mut arg = z0.arg();
    let mut sigma = 2.0;
    let mut step = PATH_STEP;
    while sigma > 0.5 {
        let mut halvings = 0;
        let (next_sigma, z1) = loop {
            let s1 = (sigma - step).max(0.5);
            let z1 = zeta::zeta_at(s1, t)?.value;
            if z1.norm() == 0.0 {
                return Err(LabError::Tracking {
                    t,
                    reason: format!("zeta vanishes at sigma = {s1}"),
                });
            }
            let d = (z1 * z0.conj()).arg();
            if d.abs() < 0.5 * PI {
                arg += d;
                break (s1, z1);
            }
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(LabError::Tracking {
                    t,
                    reason: format!(
                        "argument step exceeds pi/2 at sigma = {sigma} after {MAX_HALVINGS} halvings"
                    ),
                });
            }
            step *= 0.5;
        };
        sigma = next_sigma;
        z0 = z1;
        step = (step * 2.0).min(PATH_STEP);
    }
    let end = zeta::zeta_at(0.5, t)?;
    let err = (start.abs_error_bound / start.value.norm()
        + end.abs_error_bound / end.value.norm().max(f64::MIN_POSITIVE))
        / PI;
    Ok((arg / PI, err))
}

/// S(T) = N(T) − θ(T)/π − 1, with N(T) counted from verified ordinates.
///
/// An ordinate within its 10⁻⁹ bracket of T counts one half.
pub fn s_via_counting(t: f64) -> Result<ArgumentValue> {
    check_range("s_via_counting", t, 10.0, 1e5)?;
    let n = count_zeros_upto(t)?;
    let th = rs_theta(t)?;
    Ok(ArgumentValue {
        t,
        s_value: n - th / PI - 1.0,
        method: SMethod::ZeroCounting,
        est_error: rs_theta_error(t) / PI,
    })
}

/// S₁(T) = (1/π)∫_{1/2}^{cutoff} log|ζ(σ+iT)|dσ, with the tail beyond the cutoff
/// bounded by (1/π)·2^{1−cutoff}/log 2.
pub fn s1_strip(t: f64, cutoff: f64) -> Result<S1Value> {
    check_range("s1_strip", t, 10.0, 1e6)?;
    if !(3.0..=40.0).contains(&cutoff) {
        return Err(LabError::domain(format!("strip cutoff {cutoff} outside [3, 40]")));
    }
    strip_integral(t, cutoff)
}

/// Strip integral at any height 0 ≤ t ≤ 10⁶ (t = 0 gives C up to the tail).
pub(crate) fn strip_integral(t: f64, cutoff: f64) -> Result<S1Value> {
    let t = t.abs();
    let mut breaks = vec![0.5, 0.75, 1.0, 1.5, 2.0, 4.0, 8.0, 16.0];
    breaks.retain(|&b| b < cutoff);
    breaks.push(cutoff);
    let opts = AdaptiveOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-9,
        ..AdaptiveOptions::default()
    };
    let q = integrate(
        |sigma| log_abs_zeta(StripPoint::new(sigma, t)?),
        &breaks,
        &opts,
    )?;
    let tail = 2f64.powf(1.0 - cutoff) / LN_2;
    Ok(S1Value {
        t,
        s1_value: q.value / PI,
        tail_cutoff: cutoff,
        est_error: (q.error + tail) / PI,
    })
}

/// S₁(T) = C + ∫₀^T S(t)dt.
///
/// [0, 10] uses path-tracked samples of S at step 0.01 (Simpson); [10, T] integrates
/// N(t) − θ(t)/π − 1 exactly between verified ordinates.
pub fn s1_via_integral(t: f64) -> Result<S1Value> {
    check_range("s1_via_integral", t, 10.0, 2000.0)?;
    let c = constant_c();
    let (head, head_err) = integral_of_s_below_ten()?;
    let body = integral_of_s(10.0, t)?;
    Ok(S1Value {
        t,
        s1_value: c.c + head + body,
        tail_cutoff: f64::INFINITY,
        est_error: c.est_error + head_err + t * rs_theta_error(t) / PI,
    })
}

/// ∫_a^b S(t)dt for 10 ≤ a < b ≤ 10⁵ from verified ordinates.
pub fn integral_of_s(a: f64, b: f64) -> Result<f64> {
    check_range("integral_of_s", a, 10.0, 1e5)?;
    check_range("integral_of_s", b, a, 1e5)?;
    if a == b {
        return Ok(0.0);
    }
    let zeros = census::zeros_in(a, b)?;
    let n_a = count_zeros_upto(a)?;
    let mut counted = crate::numeric::NeumaierSum::new();
    counted += n_a * (b - a);
    for g in &zeros {
        counted += b - g;
    }
    let theta_int = integral_of_theta(a, b)?;
    Ok(counted.sum() - theta_int / PI - (b - a))
}

/// ∫_a^b θ(t)dt by 16-point Gauss–Legendre on pieces of length ≤ 10.
pub(crate) fn integral_of_theta(a: f64, b: f64) -> Result<f64> {
    rs_theta(a)?;
    let gl = gl16();
    let pieces = ((b - a) / 10.0).ceil().max(1.0) as usize;
    let h = (b - a) / pieces as f64;
    let mut acc = crate::numeric::NeumaierSum::new();
    for i in 0..pieces {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == pieces { b } else { lo + h };
        acc += gl.integrate(zeta::theta_unchecked, lo, hi);
    }
    Ok(acc.sum())
}

pub(crate) fn gl16() -> &'static GaussLegendre {
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    GL.get_or_init(|| GaussLegendre::new(16))
}

/// ∫₀^{10} S(t)dt from path-tracked samples; value and Richardson error estimate.
fn integral_of_s_below_ten() -> Result<(f64, f64)> {
    static CACHE: OnceLock<std::result::Result<(f64, f64), LabError>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            use rayon::prelude::*;
            let h = 0.01;
            let samples: Vec<f64> = (0..=1000usize)
                .into_par_iter()
                .map(|i| {
                    if i == 0 {
                        // S(0+) = −1 since N = 0 and θ(0) = 0.
                        Ok(-1.0)
                    } else {
                        path_s(i as f64 * h).map(|(s, _)| s)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let fine = simpson(&samples, h);
            let coarse_samples: Vec<f64> = samples.iter().step_by(2).copied().collect();
            let coarse = simpson(&coarse_samples, 2.0 * h);
            Ok((fine, (fine - coarse).abs() / 15.0 + 1e-12))
        })
        .clone()
}

/// The constant C, computed once per process.
pub fn constant_c() -> ArgumentConstants {
    static C: OnceLock<ArgumentConstants> = OnceLock::new();
    *C.get_or_init(|| {
        compute_constant_c(DEFAULT_CUTOFF).expect("log|zeta| on the real axis is integrable")
    })
}

/// C with the σ-integral truncated at `cutoff`; the tail bound enters `est_error`.
pub fn compute_constant_c(cutoff: f64) -> Result<ArgumentConstants> {
    if !(3.0..=40.0).contains(&cutoff) {
        return Err(LabError::domain(format!("cutoff {cutoff} outside [3, 40]")));
    }
    let mut breaks = vec![0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 4.0, 8.0, 16.0];
    breaks.retain(|&b| b < cutoff);
    breaks.push(cutoff);
    let opts = AdaptiveOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_depth: 40,
        ..AdaptiveOptions::default()
    };
    let q = integrate(
        |sigma| {
            let z = zeta::zeta_at(sigma, 0.0)?.value;
            Ok(real_log_abs(z))
        },
        &breaks,
        &opts,
    )?;
    Ok(ArgumentConstants {
        c: q.value / PI,
        est_error: (q.error + 2f64.powf(1.0 - cutoff) / LN_2) / PI,
    })
}

fn real_log_abs(z: Complex64) -> f64 {
    z.norm().ln()
}
