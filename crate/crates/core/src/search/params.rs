use std::f64::consts::{LN_10, PI};

use serde::Serialize;

use crate::error::{LabError, Result};

/// Exponent of T in H = T^{27/82 + ε}.
pub const H_EXPONENT: f64 = 27.0 / 82.0;

/// Side conditions of the parameter choice, each evaluated with no slack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConditionFlags {
    /// k ≥ 2, needed for M and for the moment lower bound.
    pub k_at_least_2: bool,
    /// mτ < (ε/10)·log T.
    pub m_tau_below_eps_log_t: bool,
    /// (2k log k)² < e^{4τ/5}.
    pub k_log_k_below_exp_tau: bool,
    /// e^{3kτ} < H^{1/2}.
    pub odd_term_below_sqrt_h: bool,
    /// δ < 1/60.
    pub delta_below_one_sixtieth: bool,
}

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.k_at_least_2
            && self.m_tau_below_eps_log_t
            && self.k_log_k_below_exp_tau
            && self.odd_term_below_sqrt_h
            && self.delta_below_one_sixtieth
    }
}

/// Smallest log T at which every condition holds, for a fixed ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Feasibility {
    pub eps: f64,
    /// None when no log T ≤ e^700 is feasible.
    pub threshold_ln_t: Option<f64>,
    pub threshold_log10_t: Option<f64>,
    pub bisection_steps: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchParams {
    pub eps: f64,
    /// Infinite when T itself overflows; `ln_t` is always exact.
    #[serde(rename = "T")]
    pub t: f64,
    pub ln_t: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub ln_h: f64,
    pub tau: f64,
    pub k: u64,
    pub m: u64,
    /// k^{1/2}/(30 log k), defined for k ≥ 2.
    #[serde(rename = "M")]
    pub m_level: Option<f64>,
    pub bound_b: f64,
    /// 500 k^{3/2}/ε³ · (log log T)²/log T.
    pub delta: f64,
    pub flags: ConditionFlags,
    pub feasible: bool,
    pub feasibility: Option<Feasibility>,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1e-3) {
        return Err(LabError::domain(format!("eps must lie in (0, 1e-3), got {eps}")));
    }
    Ok(())
}

/// Parameters at height T, with the feasibility threshold for this ε.
pub fn derive_params(t: f64, eps: f64) -> Result<SearchParams> {
    if !t.is_finite() {
        return Err(LabError::domain(format!("T must be finite, got {t}")));
    }
    let mut p = derive_params_log(t.ln(), eps)?;
    p.t = t;
    p.feasibility = Some(feasibility_threshold(eps)?);
    Ok(p)
}

/// Parameters from L = log T, for heights beyond the f64 range.
pub fn derive_params_log(ln_t: f64, eps: f64) -> Result<SearchParams> {
    check_eps(eps)?;
    if !(ln_t > std::f64::consts::E && ln_t.is_finite()) {
        return Err(LabError::domain(format!(
            "T must exceed e^e, got log T = {ln_t}"
        )));
    }
    let ll = ln_t.ln();
    let ln_h = (H_EXPONENT + eps) * ln_t;
    let tau = 2.0 * ln_h.ln();
    let k_raw = eps * eps / 1000.0 * ln_t.powf(2.0 / 3.0) / ll.powf(4.0 / 3.0);
    let k = if k_raw >= u64::MAX as f64 {
        u64::MAX
    } else {
        k_raw.floor() as u64
    };
    let kf = k as f64;
    let m = k.saturating_mul(2).saturating_add(1);
    let m_level = (k >= 2).then(|| kf.sqrt() / (30.0 * kf.ln()));
    let bound_b = eps / (4000.0 * PI) * ln_t.powf(1.0 / 3.0) / ll.powf(5.0 / 3.0);
    let delta = 500.0 * kf.powf(1.5) / eps.powi(3) * ll * ll / ln_t;
    let flags = ConditionFlags {
        k_at_least_2: k >= 2,
        m_tau_below_eps_log_t: (m as f64) * tau < eps / 10.0 * ln_t,
        k_log_k_below_exp_tau: k >= 2 && (2.0 * kf * kf.ln()).powi(2) < (0.8 * tau).exp(),
        odd_term_below_sqrt_h: 3.0 * kf * tau < 0.5 * ln_h,
        delta_below_one_sixtieth: delta < 1.0 / 60.0,
    };
    Ok(SearchParams {
        eps,
        t: ln_t.exp(),
        ln_t,
        h: ln_h.exp(),
        ln_h,
        tau,
        k,
        m,
        m_level,
        bound_b,
        delta,
        feasible: flags.all(),
        flags,
        feasibility: None,
    })
}

fn feasible_at(ln_t: f64, eps: f64) -> bool {
    derive_params_log(ln_t, eps).is_ok_and(|p| p.flags.all())
}

/// Locates the smallest feasible log T: a scan over log log T in unit steps finds the
/// first feasible point, then bisection in log T narrows the last infeasible gap.
pub fn feasibility_threshold(eps: f64) -> Result<Feasibility> {
    check_eps(eps)?;
    let mut prev = std::f64::consts::E * (1.0 + 1e-12);
    let mut hit = None;
    for x in 1..=700 {
        let ln_t = (x as f64).exp();
        if ln_t <= prev {
            continue;
        }
        if feasible_at(ln_t, eps) {
            hit = Some(ln_t);
            break;
        }
        prev = ln_t;
    }
    let Some(mut hi) = hit else {
        return Ok(Feasibility {
            eps,
            threshold_ln_t: None,
            threshold_log10_t: None,
            bisection_steps: 0,
        });
    };
    let mut lo = prev;
    let mut steps = 0;
    while hi - lo > 4.0 * f64::EPSILON * hi && steps < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible_at(mid, eps) {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    Ok(Feasibility {
        eps,
        threshold_ln_t: Some(hi),
        threshold_log10_t: Some(hi / LN_10),
        bisection_steps: steps,
    })
}
