//! Moments of grid functions, the closed-form moment bounds, and the criterion that turns
//! moment information into a large value of W + R.

use std::collections::HashMap;
use std::f64::consts::{E, PI};
use std::ops::{Add, Neg, Sub};

use rayon::prelude::*;
use serde::Serialize;

use crate::dirichlet::{GridFunction, PrimePowerTable};
use crate::error::{LabError, Result};
use crate::numeric::quad::simpson;
use crate::numeric::NeumaierSum;

/// Largest k accepted by the moment integrators.
pub const MAX_K: u32 = 12;

/// A real number stored as sign·e^{ln_abs}, for quantities such as e^{3kτ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignedLog {
    /// −1, 0 or 1.
    pub sign: i8,
    /// log|x|; −∞ for zero.
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: Self = Self {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    /// e^{ln}.
    pub fn exp(ln: f64) -> Self {
        Self { sign: 1, ln_abs: ln }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    /// The plain value; ±∞ when it does not fit a double.
    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * self.ln_abs.exp()
    }

    /// self < other.
    pub fn lt(self, other: Self) -> bool {
        (self - other).sign < 0
    }
}

impl Neg for SignedLog {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }
}

impl Add for SignedLog {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= other.ln_abs {
            (self, other)
        } else {
            (other, self)
        };
        let r = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            Self {
                sign: big.sign,
                ln_abs: big.ln_abs + r.ln_1p(),
            }
        } else if r == 1.0 {
            Self::ZERO
        } else {
            Self {
                sign: big.sign,
                ln_abs: big.ln_abs + (-r).ln_1p(),
            }
        }
    }

}

impl Sub for SignedLog {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        self + -other
    }
}

/// A moment with its Richardson error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub error: f64,
}

/// Index range of the grid covering [T, T+H] with both ends on grid nodes.
fn window(g: &GridFunction, t: f64, h: f64) -> Result<(usize, usize)> {
    if !(h > 0.0) {
        return Err(LabError::domain("moment interval needs H > 0"));
    }
    let node = |x: f64| -> Result<usize> {
        let r = (x - g.t0) / g.dt;
        let i = r.round();
        if (r - i).abs() > 1e-6 || i < 0.0 || i as usize >= g.len() {
            return Err(LabError::domain(format!(
                "{x} is not a node of the grid starting at {} with step {} and {} samples",
                g.t0,
                g.dt,
                g.len()
            )));
        }
        Ok(i as usize)
    };
    let a = node(t)?;
    let b = node(t + h)?;
    if b < a + 2 {
        return Err(LabError::domain("moment interval needs at least two grid steps"));
    }
    Ok((a, b))
}

fn check_resolution(g: &GridFunction, bandwidth: Option<f64>) -> Result<()> {
    if let Some(w) = bandwidth {
        if w > 0.0 && g.dt > PI / (4.0 * w) {
            return Err(LabError::domain(format!(
                "grid step {} exceeds pi/(4*{w}), an eighth of the shortest period",
                g.dt
            )));
        }
    }
    Ok(())
}

fn moment_of(
    g: &GridFunction,
    t: f64,
    h: f64,
    bandwidth: Option<f64>,
    f: impl Fn(f64) -> f64,
) -> Result<MomentEstimate> {
    check_resolution(g, bandwidth)?;
    let (a, b) = window(g, t, h)?;
    let vals: Vec<f64> = g.values[a..=b].iter().map(|&v| f(v)).collect();
    let fine = simpson(&vals, g.dt);
    let error = if vals.len() >= 5 {
        let coarse_vals: Vec<f64> = vals.iter().step_by(2).copied().collect();
        // Keep the same endpoint: the coarse grid may stop one fine step short.
        let covered = (coarse_vals.len() - 1) * 2;
        let fine_part = simpson(&vals[..=covered], g.dt);
        let coarse = simpson(&coarse_vals, 2.0 * g.dt);
        (fine_part - coarse).abs() / 15.0
    } else {
        fine.abs()
    };
    Ok(MomentEstimate {
        value: fine,
        error: error + 4.0 * f64::EPSILON * fine.abs(),
    })
}

fn check_k(k: u32) -> Result<()> {
    if !(1..=MAX_K).contains(&k) {
        return Err(LabError::domain(format!("k = {k} outside [1, {MAX_K}]")));
    }
    Ok(())
}

/// ∫_T^{T+H} |g|^{2k} dt by composite Simpson on the grid; T and T+H must be grid nodes.
///
/// `bandwidth` is the largest angular frequency present in g (log of the largest prime
/// for W); when given, dt must not exceed π/(4·bandwidth).
pub fn even_moment(
    g: &GridFunction,
    k: u32,
    t: f64,
    h: f64,
    bandwidth: Option<f64>,
) -> Result<MomentEstimate> {
    check_k(k)?;
    let p = 2 * k as i32;
    moment_of(g, t, h, bandwidth, |v| v.abs().powi(p))
}

/// ∫_T^{T+H} g^{2k+1} dt, signed.
pub fn odd_moment(
    g: &GridFunction,
    k: u32,
    t: f64,
    h: f64,
    bandwidth: Option<f64>,
) -> Result<MomentEstimate> {
    check_k(k)?;
    let p = 2 * k as i32 + 1;
    moment_of(g, t, h, bandwidth, |v| v.powi(p))
}

/// ∫_T^{T+H} |g|^{2k+1} dt.
pub fn abs_odd_moment(
    g: &GridFunction,
    k: u32,
    t: f64,
    h: f64,
    bandwidth: Option<f64>,
) -> Result<MomentEstimate> {
    check_k(k)?;
    let p = 2 * k as i32 + 1;
    moment_of(g, t, h, bandwidth, |v| v.abs().powi(p))
}

/// The lower bound (1/(5√(10e))·√k/log k)^{2k}·H − e^{3kτ} for ∫|W|^{2k}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvenMomentLowerBound {
    /// log of (1/(5√(10e))·√k/log k)^{2k}·H.
    pub ln_first: f64,
    /// log of the subtracted e^{3kτ}.
    pub ln_subtracted: f64,
    pub value: SignedLog,
    /// (2k log k)² < e^{4τ/5}.
    pub hypothesis: bool,
}

/// Lower bound for the even moment; the hypothesis flag records (2k log k)² < e^{4τ/5}.
pub fn lemma4_lower_bound(k: u32, tau: f64, h: f64) -> Result<EvenMomentLowerBound> {
    if k < 2 {
        return Err(LabError::domain("the even-moment lower bound needs k >= 2"));
    }
    if !(tau > 0.0 && h > 0.0) {
        return Err(LabError::domain("the even-moment lower bound needs tau > 0 and H > 0"));
    }
    let kf = f64::from(k);
    let c = 1.0 / (5.0 * (10.0 * E).sqrt()) * kf.sqrt() / kf.ln();
    let ln_first = 2.0 * kf * c.ln() + h.ln();
    let ln_subtracted = 3.0 * kf * tau;
    let value = SignedLog::exp(ln_first) - SignedLog::exp(ln_subtracted);
    let hypothesis = 2.0 * (2.0 * kf * kf.ln()).ln() < 0.8 * tau;
    Ok(EvenMomentLowerBound {
        ln_first,
        ln_subtracted,
        value,
        hypothesis,
    })
}

/// The odd-moment bound e^{3kτ + 3τ/2}, in log form.
pub fn lemma4_odd_bound(k: u32, tau: f64) -> Result<SignedLog> {
    if k < 1 || !(tau > 0.0) {
        return Err(LabError::domain("the odd-moment bound needs k >= 1 and tau > 0"));
    }
    Ok(SignedLog::exp(3.0 * f64::from(k) * tau + 1.5 * tau))
}

/// The remainder-moment bound H{25^m + (log T)³(50τm²/(ε³ log T))^m}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemainderMomentBound {
    /// log(H·25^m).
    pub ln_first: f64,
    /// log(H·(log T)³·(50τm²/(ε³ log T))^m).
    pub ln_second: f64,
    /// log of the whole bound.
    pub ln_value: f64,
    /// m odd and m ≥ 3.
    pub m_odd_at_least_3: bool,
    /// 0 < ε < 1/1000.
    pub eps_in_range: bool,
    /// mτ < (ε/10)·log T.
    pub m_tau_small: bool,
}

impl RemainderMomentBound {
    pub fn hypotheses_hold(&self) -> bool {
        self.m_odd_at_least_3 && self.eps_in_range && self.m_tau_small
    }
}

/// [`lemma3_rhs_log`] for T and H given directly.
pub fn lemma3_rhs(m: u32, tau: f64, eps: f64, t: f64, h: f64) -> Result<RemainderMomentBound> {
    lemma3_rhs_log(m, tau, eps, t.ln(), h.ln())
}

/// The remainder-moment bound from log T and log H, so T may be far beyond f64 range.
pub fn lemma3_rhs_log(m: u32, tau: f64, eps: f64, ln_t: f64, ln_h: f64) -> Result<RemainderMomentBound> {
    if !(ln_t > 0.0 && tau > 0.0 && eps > 0.0) {
        return Err(LabError::domain("lemma3_rhs needs log T > 0, tau > 0 and eps > 0"));
    }
    let mf = f64::from(m);
    let ln_first = ln_h + mf * 25f64.ln();
    let ratio = 50.0 * tau * mf * mf / (eps.powi(3) * ln_t);
    let ln_second = ln_h + 3.0 * ln_t.ln() + mf * ratio.ln();
    let ln_value = (SignedLog::exp(ln_first) + SignedLog::exp(ln_second)).ln_abs;
    Ok(RemainderMomentBound {
        ln_first,
        ln_second,
        ln_value,
        m_odd_at_least_3: m >= 3 && m % 2 == 1,
        eps_in_range: eps > 0.0 && eps < 1e-3,
        m_tau_small: mf * tau < eps / 10.0 * ln_t,
    })
}

/// The three moment conditions and whether they yield max ±(W + R) ≥ M/8.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentCriterion {
    /// ∫|W|^{2k} ≥ H·M^{2k}.
    pub even_lower: bool,
    /// |∫W^{2k+1}| ≤ ½H·M^{2k+1}.
    pub odd_upper: bool,
    /// ∫|R|^{2k+1} < H·(M/2)^{2k+1}.
    pub r_upper: bool,
    #[serde(rename = "M")]
    pub m: f64,
    pub conclusion_available: bool,
    pub even_moment: f64,
    pub odd_moment: f64,
    pub r_moment: f64,
}

impl MomentCriterion {
    pub fn conditions(&self) -> [bool; 3] {
        [self.even_lower, self.odd_upper, self.r_upper]
    }
}

/// Checks the three conditions on the moments of `wr` over [T, T+H].
///
/// `r_moment` bounds ∫|R|^{2k+1}; it is 0 where no zeros off the critical line exist.
/// Quadrature error estimates are charged against each condition.
pub fn lemma5_certify(
    wr: &GridFunction,
    k: u32,
    m: f64,
    t: f64,
    h: f64,
    r_moment: f64,
) -> Result<MomentCriterion> {
    if !(m > 0.0) {
        return Err(LabError::domain("M must be positive"));
    }
    if !(r_moment >= 0.0) {
        return Err(LabError::domain("r_moment must be non-negative"));
    }
    let even = even_moment(wr, k, t, h, None)?;
    let odd = odd_moment(wr, k, t, h, None)?;
    let kf = f64::from(k);
    let ln_m = m.ln();
    let ln_h = h.ln();
    let even_need = SignedLog::exp(ln_h + 2.0 * kf * ln_m);
    let odd_allow = SignedLog::exp(0.5f64.ln() + ln_h + (2.0 * kf + 1.0) * ln_m);
    let r_allow = SignedLog::exp(ln_h + (2.0 * kf + 1.0) * (ln_m - 2f64.ln()));
    let even_lower = !SignedLog::from_f64(even.value - even.error).lt(even_need);
    let odd_upper = !odd_allow.lt(SignedLog::from_f64(odd.value.abs() + odd.error));
    let r_upper = SignedLog::from_f64(r_moment).lt(r_allow);
    Ok(MomentCriterion {
        even_lower,
        odd_upper,
        r_upper,
        m,
        conclusion_available: even_lower && odd_upper && r_upper,
        even_moment: even.value,
        odd_moment: odd.value,
        r_moment,
    })
}

/// Σ over ordered k-tuples (p₁…p_k), (q₁…q_k) of primes with p₁⋯p_k = q₁⋯q_k of
/// f(p₁)⋯f(p_k)·f(q₁)⋯f(q_k), by enumerating all k-tuples and grouping by product.
pub fn diagonal_sum(table: &PrimePowerTable, k: u32) -> Result<f64> {
    let primes = table.primes();
    let coeffs: Vec<f64> = table.coefficients().collect();
    let n = primes.len();
    let count = (n as f64).powi(k as i32);
    if count > 5e7 {
        return Err(LabError::Resource(format!(
            "diagonal sum over {n}^{k} tuples is too large"
        )));
    }
    let mut by_product: HashMap<u128, NeumaierSum> = HashMap::new();
    let mut idx = vec![0usize; k as usize];
    if n == 0 {
        return Ok(0.0);
    }
    loop {
        let mut prod: u128 = 1;
        let mut w = 1.0;
        for &i in &idx {
            prod *= u128::from(primes[i]);
            w *= coeffs[i];
        }
        *by_product.entry(prod).or_default() += w;
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                let mut keys: Vec<u128> = by_product.keys().copied().collect();
                keys.sort_unstable();
                let total: NeumaierSum = keys
                    .iter()
                    .map(|key| {
                        let a = by_product[key].sum();
                        a * a
                    })
                    .collect();
                return Ok(total.sum());
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// C(2k, k)·2^{−2k}·H·Σ, the mean-value prediction for ∫W^{2k}.
pub fn diagonal_prediction(table: &PrimePowerTable, k: u32, h: f64) -> Result<f64> {
    let kf = f64::from(k);
    let mut binom = 1.0;
    for i in 0..k {
        binom = binom * (2.0 * kf - f64::from(i)) / f64::from(i + 1);
    }
    Ok(binom * 0.25f64.powi(k as i32) * h * diagonal_sum(table, k)?)
}

/// Even and odd moments of a W-grid together with the reference bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub tau: f64,
    pub k: u32,
    pub m: u32,
    pub even_moment: f64,
    pub odd_moment: f64,
    pub quadrature_error: f64,
    /// None when k < 2, where the bound is undefined.
    pub even_lower_bound: Option<EvenMomentLowerBound>,
    pub odd_moment_bound: SignedLog,
    pub odd_within_bound: bool,
    pub diagonal_prediction: Option<f64>,
    /// The unquantified θ in θ·e^{3kτ} is taken as |θ| ≤ 1.
    pub theta_assumption: &'static str,
    pub criterion: Option<MomentCriterion>,
    /// Marker for r_moment = 0: no zeros off the critical line at these heights.
    pub r_regime: Option<&'static str>,
}

/// Moments of `w` over [T, T+H] with the reference bounds for kernel width τ.
pub fn moment_report(
    w: &GridFunction,
    table: &PrimePowerTable,
    k: u32,
    t: f64,
    h: f64,
    m_level: Option<f64>,
) -> Result<MomentReport> {
    let bandwidth = table.primes().last().map(|&p| (p as f64).ln());
    let (even, odd) = rayon::join(
        || even_moment(w, k, t, h, bandwidth),
        || odd_moment(w, k, t, h, bandwidth),
    );
    let (even, odd) = (even?, odd?);
    let tau = table.tau();
    let lower = if k >= 2 {
        Some(lemma4_lower_bound(k, tau, h)?)
    } else {
        None
    };
    let odd_bound = lemma4_odd_bound(k, tau)?;
    let diagonal = if (table.primes().len() as f64).powi(k as i32) <= 5e7 {
        Some(diagonal_prediction(table, k, h)?)
    } else {
        None
    };
    let criterion = match m_level {
        Some(m) => Some(lemma5_certify(w, k, m, t, h, 0.0)?),
        None => None,
    };
    Ok(MomentReport {
        t,
        h,
        tau,
        k,
        m: 2 * k + 1,
        even_moment: even.value,
        odd_moment: odd.value,
        quadrature_error: even.error.max(odd.error),
        even_lower_bound: lower,
        odd_moment_bound: odd_bound,
        odd_within_bound: SignedLog::from_f64(odd.value.abs()).lt(odd_bound),
        diagonal_prediction: diagonal,
        theta_assumption: "|theta| <= 1",
        r_regime: criterion.map(|_| "rh-verified: r_moment = 0"),
        criterion,
    })
}

/// Moments for several k at once.
pub fn moment_reports(
    w: &GridFunction,
    table: &PrimePowerTable,
    ks: &[u32],
    t: f64,
    h: f64,
) -> Result<Vec<MomentReport>> {
    ks.par_iter()
        .map(|&k| moment_report(w, table, k, t, h, None))
        .collect()
}
