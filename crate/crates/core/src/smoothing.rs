//! Fejér-kernel smoothing of S₁ and the explicit-formula identity it satisfies.
//!
//! With f(z) = (sin(τz/2)/(τz/2))², whose Fourier transform is the triangle
//! f̂(x) = (2π/τ)·max(0, 1 − |x|/τ), the average ∫ f(u)S₁(t+u)du equals a finite sum over
//! prime powers n ≤ e^τ, minus a pole correction, plus a sum over zeros off the critical
//! line (empty at the heights handled here).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::argument::{constant_c, S1Window, WindowCheck};
use crate::dirichlet::{build_table, full_lambda_sum, PrimePowerTable};
use crate::error::{LabError, Result};
use crate::numeric::{integrate, AdaptiveOptions, GaussLegendre};

/// Heights up to which the sum over zeros with β > 1/2 is known to be empty.
pub const ZERO_FREE_HEIGHT: f64 = 1e5;
/// Cap on quadrature panels for one smoothed average.
const MAX_PANELS: usize = 400_000;

/// (sin u/u)², with the series 1 − u²/3 + 2u⁴/45 near 0.
pub fn fejer(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 3.0 + 2.0 * u2 * u2 / 45.0
    } else {
        let s = u.sin() / u;
        s * s
    }
}

/// Fourier transform of f(u) = (sin(τu/2)/(τu/2))²: (2π/τ)·max(0, 1 − |x|/τ).
pub fn fejer_hat(x: f64, tau: f64) -> f64 {
    2.0 * PI / tau * (1.0 - x.abs() / tau).max(0.0)
}

/// Re (sin w/w)² at w = z_re + i·z_im.
pub fn fejer_complex_sq(z_re: f64, z_im: f64) -> Result<f64> {
    if z_im.abs() > 700.0 {
        return Err(LabError::domain(format!(
            "imaginary part {z_im} would overflow sinh/cosh"
        )));
    }
    let w = Complex64::new(z_re, z_im);
    let q = if w.norm() < 1e-4 {
        let w2 = w * w;
        Complex64::new(1.0, 0.0) - w2 / 3.0 + w2 * w2 * (2.0 / 45.0)
    } else {
        let s = Complex64::new(z_re.sin() * z_im.cosh(), z_re.cos() * z_im.sinh());
        let r = s / w;
        r * r
    };
    Ok(q.re)
}

/// Parameters of one smoothed average: kernel width τ, truncation H and centre t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FejerParams {
    pub tau: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub t: f64,
}

impl FejerParams {
    pub fn new(tau: f64, h: f64, t: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(LabError::domain(format!("tau must be positive, got {tau}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(LabError::domain(format!("H must be positive, got {h}")));
        }
        if !(t.abs() + h <= 1e6) {
            return Err(LabError::domain(format!(
                "|t| + H = {} exceeds the S1 range 1e6",
                t.abs() + h
            )));
        }
        Ok(Self { tau, h, t })
    }

    /// The hypotheses τ < log t and H < t under which the truncated average tracks W.
    pub fn smoothing_hypotheses_hold(&self) -> bool {
        self.t > 1.0 && self.tau < self.t.ln() && self.h < self.t
    }

    /// Half-width Hτ/2 of the integration range in the kernel variable.
    pub fn half_width(&self) -> f64 {
        0.5 * self.h * self.tau
    }
}

/// A source of S₁ values for smoothing.
pub trait S1Source: Sync {
    fn s1(&self, x: f64) -> Result<f64>;

    /// Points in [a, b] where S₁ has a derivative jump.
    fn kinks(&self, _a: f64, _b: f64) -> Vec<f64> {
        Vec::new()
    }

    /// Uniform error bound of the supplied values.
    fn model_error(&self) -> f64 {
        0.0
    }
}

impl S1Source for S1Window {
    fn s1(&self, x: f64) -> Result<f64> {
        S1Window::s1(self, x)
    }

    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        S1Window::kinks(self, a, b)
    }

    fn model_error(&self) -> f64 {
        S1Window::model_error(self)
    }
}

/// A constant in place of S₁, for checking the kernel mass.
#[derive(Debug, Clone, Copy)]
pub struct ConstantS1(pub f64);

impl S1Source for ConstantS1 {
    fn s1(&self, _x: f64) -> Result<f64> {
        Ok(self.0)
    }
}

/// ∫_{−Hτ/2}^{Hτ/2} (sin v/v)²·S₁(t + 2v/τ) dv and its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothedS1 {
    pub value: f64,
    pub quad_error: f64,
    /// Error of the S₁ values times the kernel mass π.
    pub model_error: f64,
    pub panels: usize,
}

impl SmoothedS1 {
    pub fn error(&self) -> f64 {
        self.quad_error + self.model_error
    }
}

/// The S₁ window needed to smooth at `p`.
pub fn window_for(p: &FejerParams) -> Result<S1Window> {
    let a = p.t - p.h;
    let b = p.t + p.h;
    let (lo, hi) = if a >= 0.0 {
        (a, b)
    } else if b <= 0.0 {
        (-b, -a)
    } else {
        (0.0, a.abs().max(b.abs()))
    };
    S1Window::new(lo, hi)
}

/// Truncated Fejér average of S₁ around t.
pub fn smoothed_s1(p: &FejerParams) -> Result<SmoothedS1> {
    let w = window_for(p)?;
    smoothed_s1_with(p, &w)
}

/// [`smoothed_s1`] with a caller-supplied S₁.
///
/// The range is split at the kernel zeros v = kπ and at the images of the kinks of S₁,
/// and integrated by globally adaptive Gauss–Kronrod.
pub fn smoothed_s1_with<S: S1Source + ?Sized>(p: &FejerParams, src: &S) -> Result<SmoothedS1> {
    let v_max = p.half_width();
    let to_x = |v: f64| p.t + 2.0 * v / p.tau;
    let to_v = |x: f64| 0.5 * p.tau * (x - p.t);

    let mut breaks = vec![-v_max, v_max];
    let k_max = (v_max / PI).floor() as i64;
    for k in -k_max..=k_max {
        breaks.push(k as f64 * PI);
    }
    for x in src.kinks(to_x(-v_max), to_x(v_max)) {
        breaks.push(to_v(x));
    }
    breaks.retain(|v| v.abs() <= v_max);
    breaks.sort_by(f64::total_cmp);
    let min_gap = 1e-12 * v_max.max(1.0);
    breaks.dedup_by(|b, a| *b - *a <= min_gap);
    if let Some(last) = breaks.last_mut() {
        *last = v_max;
    }

    let opts = AdaptiveOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        max_depth: 30,
        max_panels: MAX_PANELS,
    };
    let q = integrate(|v| Ok(fejer(v) * src.s1(to_x(v))?), &breaks, &opts)?;
    if !q.converged && q.panels >= MAX_PANELS {
        return Err(LabError::Resource(format!(
            "smoothed S1 needed more than {MAX_PANELS} quadrature panels"
        )));
    }
    Ok(SmoothedS1 {
        value: q.value,
        quad_error: q.error,
        model_error: PI * src.model_error(),
        panels: q.panels,
    })
}

/// 2∬_{1/2 ≤ σ ≤ 1, 0 ≤ x ≤ 1−σ} Re f(−t − xi) dx dσ with f(z) = (sin(τz/2)/(τz/2))².
///
/// The integrand does not depend on σ, so the triangle reduces exactly to
/// 2∫₀^{1/2} (1/2 − x)·Re f(−t − xi) dx, evaluated by 32-point Gauss–Legendre.
pub fn pole_term(t: f64, tau: f64) -> Result<f64> {
    pole_term_with_error(t, tau).map(|(v, _)| v)
}

/// [`pole_term`] with the difference to a 20-point rule as error estimate.
pub fn pole_term_with_error(t: f64, tau: f64) -> Result<(f64, f64)> {
    if !(t >= 10.0) {
        return Err(LabError::domain(format!("pole term needs t >= 10, got {t}")));
    }
    if !(tau > 0.0) {
        return Err(LabError::domain("pole term needs tau > 0"));
    }
    let integrand = |x: f64| {
        fejer_complex_sq(-0.5 * tau * t, -0.5 * tau * x).map(|f| 2.0 * (0.5 - x) * f)
    };
    let fine = GaussLegendre::new(32).try_integrate(integrand, 0.0, 0.5)?;
    let coarse = GaussLegendre::new(20).try_integrate(integrand, 0.0, 0.5)?;
    Ok((fine, (fine - coarse).abs()))
}

/// Bound on the part of the τ-scaled average (2/τ)∫(sin v/v)²S₁(t+2v/τ)dv lying outside
/// |v| ≤ Hτ/2, using (sin v/v)² ≤ 1/v² and the envelope |S₁(x)| ≤ 2 log(|x| + 10):
/// (16/τ²)·[log(A + H)/H + log(1 + A/H)/A] with A = |t| + 10.
pub fn tail_bound(p: &FejerParams) -> f64 {
    let a = p.t.abs() + 10.0;
    16.0 / (p.tau * p.tau) * ((a + p.h).ln() / p.h + (1.0 + a / p.h).ln() / a)
}

/// Both sides of the smoothed explicit formula at one (t, τ, H).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub t: f64,
    pub tau: f64,
    #[serde(rename = "H")]
    pub h: f64,
    /// (2/τ)∫_{−Hτ/2}^{Hτ/2} (sin u/u)² S₁(t + 2u/τ) du.
    pub lhs: f64,
    /// (1/π)Σ_{n ≤ e^τ} Λ(n)/(√n (log n)²)·f̂(log n)·cos(t log n).
    pub rhs_sum: f64,
    /// 2∬ Re f(−t − xi) over the triangle.
    pub rhs_pole: f64,
    /// C·f̂(0) = 2πC/τ.
    pub rhs_constant: f64,
    /// Sum over zeros with β > 1/2: empty for t ≤ 10⁵.
    pub zero_terms: f64,
    /// lhs − (rhs_sum − rhs_constant + zero_terms − rhs_pole).
    pub residual: f64,
    /// lhs − (rhs_sum + zero_terms − rhs_pole), the assembly without the C·f̂(0) term.
    pub residual_without_constant: f64,
    pub tail_bound: f64,
    pub quadrature_error: f64,
    pub smoothing_hypotheses: bool,
    pub window_check: Option<WindowCheck>,
}

/// Evaluates both sides of the identity and their residual.
pub fn lemma1_identity_check(p: &FejerParams) -> Result<IdentityReport> {
    let table = build_table(p.tau)?;
    lemma1_identity_check_with(p, &table)
}

/// [`lemma1_identity_check`] with a prebuilt prime-power table for τ.
pub fn lemma1_identity_check_with(p: &FejerParams, table: &PrimePowerTable) -> Result<IdentityReport> {
    if p.t > ZERO_FREE_HEIGHT {
        return Err(LabError::domain(format!(
            "identity check needs t <= 1e5 where no zeros off the line exist, got {}",
            p.t
        )));
    }
    if table.tau() != p.tau {
        return Err(LabError::domain("prime table was built for a different tau"));
    }
    let window = window_for(p)?;
    let smoothed = smoothed_s1_with(p, &window)?;
    let (rhs_pole, pole_err) = pole_term_with_error(p.t, p.tau)?;
    let scale = 2.0 / p.tau;
    let lhs = scale * smoothed.value;
    let rhs_sum = full_lambda_sum(p.t, table);
    let rhs_constant = constant_c().c * fejer_hat(0.0, p.tau);
    let zero_terms = 0.0;
    let residual_without_constant = lhs - (rhs_sum + zero_terms - rhs_pole);
    let residual = lhs - (rhs_sum - rhs_constant + zero_terms - rhs_pole);
    Ok(IdentityReport {
        t: p.t,
        tau: p.tau,
        h: p.h,
        lhs,
        rhs_sum,
        rhs_pole,
        rhs_constant,
        zero_terms,
        residual,
        residual_without_constant,
        tail_bound: tail_bound(p),
        quadrature_error: scale * smoothed.error() + pole_err + constant_c().est_error * 2.0 * PI / p.tau,
        smoothing_hypotheses: p.smoothing_hypotheses_hold(),
        window_check: window.check().copied(),
    })
}
