//! The Riemann zeta function in the critical strip, the Riemann–Siegel theta function,
//! Hardy's Z function and zero location on the critical line.
//!
//! ζ(σ+it) is evaluated by Euler–Maclaurin summation with an adaptive number of
//! Bernoulli corrections. On the critical line above `RS_THRESHOLD` Hardy's Z uses the
//! Riemann–Siegel formula with four correction terms.

mod riemann_siegel;
mod tables;
pub(crate) mod zeros;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{LabError, Result};

pub use riemann_siegel::riemann_siegel_z;
pub use zeros::{zero_ordinates, zero_ordinates_with_step, ZeroBracket};

/// Largest height accepted by the strip evaluators.
pub const T_MAX: f64 = 1e8;
/// Heights above which Hardy's Z switches to the Riemann–Siegel formula.
pub const RS_THRESHOLD: f64 = 1e4;
/// Heights above which ζ on the critical line itself uses Riemann–Siegel.
const ZETA_RS_THRESHOLD: f64 = 1e6;
/// |ζ| below this is reported as a singularity by [`log_abs_zeta`].
pub const SINGULARITY_THRESHOLD: f64 = 1e-30;

const EPS: f64 = f64::EPSILON;

/// A point σ + it of the strip 1/2 ≤ σ ≤ 40, 0 ≤ t ≤ 10⁸.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripPoint {
    sigma: f64,
    t: f64,
}

impl StripPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(0.5..=40.0).contains(&sigma) {
            return Err(LabError::domain(format!("sigma = {sigma} outside [1/2, 40]")));
        }
        if !(0.0..=T_MAX).contains(&t) {
            return Err(LabError::domain(format!("t = {t} outside [0, 1e8]")));
        }
        if sigma == 1.0 && t == 0.0 {
            return Err(LabError::domain("s = 1 is the pole of zeta"));
        }
        Ok(Self { sigma, t })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// A complex value together with the error bound declared by its evaluation method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_error_bound: f64,
}

/// ζ(σ + it).
///
/// The declared bound combines the first omitted Euler–Maclaurin term with a
/// rounding estimate for the phases t·log n. The latter grows like ε·t·log(t)^{3/2},
/// so the bound is about 10⁻¹¹ at t = 10³, 4·10⁻¹⁰ at t = 10⁵ and 5·10⁻⁹ at t = 10⁶.
pub fn zeta(p: StripPoint) -> Result<EvalResult> {
    if p.sigma == 0.5 && p.t > ZETA_RS_THRESHOLD {
        let (z, err) = riemann_siegel::z_with_bound(p.t);
        let th = theta_unchecked(p.t);
        let value = Complex64::from_polar(z, -th);
        return Ok(EvalResult {
            value,
            abs_error_bound: err + z.abs() * EPS * p.t.ln() * p.t.abs() * 4.0,
        });
    }
    Ok(euler_maclaurin(p.sigma, p.t))
}

/// ζ at a raw (σ, t), validated through [`StripPoint`].
pub fn zeta_at(sigma: f64, t: f64) -> Result<EvalResult> {
    zeta(StripPoint::new(sigma, t)?)
}

/// log|ζ(σ + it)|.
///
/// Returns [`LabError::Singularity`] when |ζ| < 10⁻³⁰ or when |ζ| is below ten times the
/// declared evaluation error, where the logarithm carries no information.
pub fn log_abs_zeta(p: StripPoint) -> Result<f64> {
    let r = zeta(p)?;
    let modulus = r.value.norm();
    if modulus < SINGULARITY_THRESHOLD || modulus < 10.0 * r.abs_error_bound {
        return Err(LabError::Singularity {
            sigma: p.sigma,
            t: p.t,
            modulus,
        });
    }
    Ok(modulus.ln())
}

/// Riemann–Siegel theta function θ(t) for t ≥ 10.
///
/// Asymptotic expansion through the t⁻⁹ term; the truncation error is below 10⁻¹³ at
/// t = 10 and decreases like t⁻¹¹. Rounding in the leading term contributes about
/// ε·t·log t (10⁻⁹ at t = 10⁶).
pub fn rs_theta(t: f64) -> Result<f64> {
    if !(t >= 10.0) || !t.is_finite() {
        return Err(LabError::domain(format!(
            "theta expansion needs t >= 10, got {t}"
        )));
    }
    Ok(theta_unchecked(t))
}

/// Declared absolute error of [`rs_theta`].
pub fn rs_theta_error(t: f64) -> f64 {
    1e-13 * (10.0 / t).powi(11) + 4.0 * EPS * t * t.ln().max(1.0)
}

pub(crate) fn theta_unchecked(t: f64) -> f64 {
    let r = 1.0 / t;
    let r2 = r * r;
    let series = r
        * (1.0 / 48.0
            + r2 * (7.0 / 5760.0
                + r2 * (31.0 / 80640.0 + r2 * (127.0 / 430080.0 + r2 * (511.0 / 1216512.0)))));
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + series
}

/// Hardy's Z(t) = e^{iθ(t)} ζ(1/2 + it), real for real t ≥ 10.
pub fn hardy_z(t: f64) -> Result<f64> {
    hardy_z_with_bound(t).map(|(z, _)| z)
}

/// Hardy's Z together with its declared absolute error.
pub fn hardy_z_with_bound(t: f64) -> Result<(f64, f64)> {
    if !(t >= 10.0) || t > T_MAX {
        return Err(LabError::domain(format!("hardy_z needs 10 <= t <= 1e8, got {t}")));
    }
    if t > RS_THRESHOLD {
        return Ok(riemann_siegel::z_with_bound(t));
    }
    let r = euler_maclaurin(0.5, t);
    let th = theta_unchecked(t);
    let rot = Complex64::from_polar(1.0, th);
    Ok(((rot * r.value).re, r.abs_error_bound + r.value.norm() * rs_theta_error(t)))
}

const LN_TABLE_SIZE: usize = 1 << 19;

fn ln_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..LN_TABLE_SIZE).map(|n| (n.max(1) as f64).ln()).collect())
}

#[inline]
pub(crate) fn ln_n(n: usize) -> f64 {
    if n < LN_TABLE_SIZE {
        ln_table()[n]
    } else {
        (n as f64).ln()
    }
}

/// Number of Euler–Maclaurin main-sum terms used at s.
pub(crate) fn em_terms(sigma: f64, t: f64) -> usize {
    let modulus = sigma.hypot(t);
    ((modulus / 3.0).ceil() as usize).max(20)
}

/// Euler–Maclaurin evaluation, valid for σ > 0 away from s = 1.
fn euler_maclaurin(sigma: f64, t: f64) -> EvalResult {
    let s = Complex64::new(sigma, t);
    let n_terms = em_terms(sigma, t);

    let mut re = crate::numeric::NeumaierSum::new();
    let mut im = crate::numeric::NeumaierSum::new();
    let mut rounding = 0.0;
    // Sum from the smallest terms upward.
    for n in (1..n_terms).rev() {
        let l = ln_n(n);
        let mag = if sigma == 0.5 {
            1.0 / (n as f64).sqrt()
        } else {
            (-sigma * l).exp()
        };
        let (sn, cs) = (t * l).sin_cos();
        re += mag * cs;
        im += -mag * sn;
        let w = mag * (1.0 + t * l);
        rounding += w * w;
    }
    let head = Complex64::new(re.sum(), im.sum());

    let nf = n_terms as f64;
    let ln_big = nf.ln();
    // N^{-s}
    let n_pow = Complex64::from_polar((-sigma * ln_big).exp(), -t * ln_big);
    let mut tail = n_pow * 0.5 + n_pow * nf / (s - 1.0);

    // Bernoulli corrections: B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let inv_n2 = 1.0 / (nf * nf);
    let mut poch = s;
    let mut pow = n_pow / nf;
    let mut trunc = 0.0;
    let mut scale = head.norm() + tail.norm();
    let kmax = tables::BERNOULLI_SCALED.len() - 1;
    for k in 1..=kmax {
        let term = poch * pow * tables::BERNOULLI_SCALED[k - 1];
        tail += term;
        scale = scale.max(tail.norm());
        let kf = k as f64;
        poch *= (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf);
        pow *= inv_n2;
        let next = poch * pow * tables::BERNOULLI_SCALED[k];
        let ratio = (s + (2.0 * kf + 1.0)).norm() / (sigma + 2.0 * kf + 1.0);
        trunc = next.norm() * ratio;
        if trunc < 1e-17 * scale || k == kmax {
            break;
        }
    }

    let value = head + tail;
    let rounding = EPS * (rounding.sqrt() + 4.0 * value.norm() + 1.0);
    EvalResult {
        value,
        abs_error_bound: trunc + rounding,
    }
}
