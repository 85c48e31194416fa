//! Location of zeros of ζ on the critical line by sign changes of Hardy's Z.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::{em_terms, hardy_z, RS_THRESHOLD};
use crate::error::{LabError, Result};

/// Width to which every ordinate is bracketed.
pub const BRACKET_WIDTH: f64 = 1e-9;
/// Budget on (samples × terms per Z evaluation).
const WORK_BUDGET: f64 = 4e10;

/// An interval [lo, hi] of width ≤ 10⁻⁹ on which Z changes sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroBracket {
    pub lo: f64,
    pub hi: f64,
}

impl ZeroBracket {
    /// Midpoint of the bracket.
    pub fn ordinate(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Default sampling step for zero search up to height `t`: a sixth of the mean zero
/// spacing 2π/log(t/2π), capped at 0.1.
pub fn default_step(t: f64) -> f64 {
    let spacing = 2.0 * PI / (t / (2.0 * PI)).ln().max(1.0);
    (spacing / 6.0).min(0.1)
}

/// All ordinates γ with t_lo < γ ≤ t_hi, in increasing order.
///
/// Z is sampled at the default step; sign changes are refined by a safeguarded
/// Illinois iteration, and same-sign local minima of |Z| are probed by golden-section
/// search for close pairs of zeros. Completeness is not certified here; see
/// `argument::verified_zeros` for the argument-principle check.
pub fn zero_ordinates(t_lo: f64, t_hi: f64) -> Result<Vec<ZeroBracket>> {
    zero_ordinates_with_step(t_lo, t_hi, default_step(t_hi))
}

/// As [`zero_ordinates`] with an explicit maximum sampling step.
pub fn zero_ordinates_with_step(t_lo: f64, t_hi: f64, step: f64) -> Result<Vec<ZeroBracket>> {
    if !(t_lo >= 10.0 && t_lo < t_hi && t_hi <= 1e6) {
        return Err(LabError::domain(format!(
            "zero search needs 10 <= t_lo < t_hi <= 1e6, got [{t_lo}, {t_hi}]"
        )));
    }
    if !(step > 0.0) {
        return Err(LabError::domain("zero search step must be positive"));
    }
    let n = ((t_hi - t_lo) / step).ceil().max(1.0) as usize;
    let per_eval = if t_hi > RS_THRESHOLD {
        (t_hi / (2.0 * PI)).sqrt()
    } else {
        em_terms(0.5, t_hi) as f64
    };
    if n as f64 * per_eval > WORK_BUDGET {
        return Err(LabError::Resource(format!(
            "zero search on [{t_lo}, {t_hi}] needs about {:.2e} term evaluations",
            n as f64 * per_eval
        )));
    }
    let h = (t_hi - t_lo) / n as f64;
    let ts: Vec<f64> = (0..=n)
        .map(|i| if i == n { t_hi } else { t_lo + i as f64 * h })
        .collect();
    let zs: Vec<f64> = ts
        .par_iter()
        .map(|&t| hardy_z(t))
        .collect::<Result<Vec<_>>>()?;

    // Coarse brackets: consecutive samples with opposite signs, plus close pairs
    // split out of same-sign dips.
    let mut coarse: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut dips = Vec::new();
    for i in 0..n {
        if sign(zs[i]) != sign(zs[i + 1]) {
            coarse.push((ts[i], ts[i + 1], zs[i], zs[i + 1]));
        } else if i >= 1 {
            let s = sign(zs[i]);
            if sign(zs[i - 1]) == s
                && s * zs[i] < s * zs[i - 1]
                && s * zs[i] <= s * zs[i + 1]
            {
                dips.push(i);
            }
        }
    }
    let splits: Vec<Option<(f64, f64)>> = dips
        .par_iter()
        .map(|&i| probe_dip(ts[i - 1], ts[i + 1], sign(zs[i])))
        .collect::<Result<Vec<_>>>()?;
    for (&i, split) in dips.iter().zip(splits) {
        if let Some((tm, zm)) = split {
            // Z has the opposite sign at tm: one zero on each side.
            coarse.push((ts[i - 1], tm, zs[i - 1], zm));
            coarse.push((tm, ts[i + 1], zm, zs[i + 1]));
        }
    }
    coarse.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut out: Vec<ZeroBracket> = coarse
        .par_iter()
        .map(|&(a, b, fa, fb)| refine(a, b, fa, fb))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    out.retain(|z| z.ordinate() > t_lo && z.ordinate() <= t_hi);
    Ok(out)
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Golden-section search for a point in (a, b) where Z takes sign −s.
fn probe_dip(a: f64, b: f64, s: f64) -> Result<Option<(f64, f64)>> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = hardy_z(x1)?;
    let mut f2 = hardy_z(x2)?;
    for _ in 0..60 {
        if sign(f1) != s {
            return Ok(Some((x1, f1)));
        }
        if sign(f2) != s {
            return Ok(Some((x2, f2)));
        }
        if hi - lo < 1e-7 {
            break;
        }
        if s * f1 < s * f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = hardy_z(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = hardy_z(x2)?;
        }
    }
    Ok(None)
}

/// Illinois iteration with a bisection safeguard, until the bracket is ≤ 10⁻⁹ wide.
fn refine(mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<ZeroBracket> {
    let mut side = 0i8;
    for _ in 0..200 {
        if b - a <= BRACKET_WIDTH {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        let width = b - a;
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        // Keep the bracket shrinking when the secant stalls next to one end.
        let margin = 0.25 * BRACKET_WIDTH;
        c = c.clamp(a + margin.min(0.25 * width), b - margin.min(0.25 * width));
        let fc = hardy_z(c)?;
        if fc == 0.0 {
            let half = 0.5 * BRACKET_WIDTH;
            return Ok(ZeroBracket {
                lo: (c - half).max(a),
                hi: (c + half).min(b),
            });
        }
        if sign(fc) == sign(fa) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if b - a > 0.5 * width && side != 0 {
            // Poor progress: follow with a bisection step.
            let m = 0.5 * (a + b);
            let fm = hardy_z(m)?;
            if sign(fm) == sign(fa) {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
            side = 0;
        }
    }
    Ok(ZeroBracket { lo: a, hi: b })
}
