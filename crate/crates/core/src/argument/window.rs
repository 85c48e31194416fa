//! S₁ on a window of heights, from a single strip integral and the zero census.
//!
//! Between consecutive ordinates S(x) = S(a) + j − (θ(x) − θ(a))/π exactly, where a is an
//! anchor height and j the number of ordinates in (a, x]. Integrating this from the anchor
//! value S₁(a) gives S₁ anywhere in the window; the model is checked at the far end
//! against an independent strip integral and path-tracked S.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use serde::Serialize;

use super::{gl16, near_ordinate, strip_integral, verified_zeros, DEFAULT_CUTOFF};
use crate::error::{LabError, Result};
use crate::numeric::NeumaierSum;
use crate::zeta::theta_unchecked;

/// Heights below this are served by direct strip integrals.
const LOW_LIMIT: f64 = 10.0;

/// Comparison of the window model with independent evaluations at its far end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowCheck {
    pub end: f64,
    pub s_model: f64,
    pub s_path: f64,
    pub s1_model: f64,
    pub s1_strip: f64,
    pub anchor_strip_error: f64,
}

impl WindowCheck {
    pub fn s1_mismatch(&self) -> f64 {
        (self.s1_model - self.s1_strip).abs()
    }

    pub fn s_mismatch(&self) -> f64 {
        (self.s_model - self.s_path).abs()
    }
}

#[derive(Debug)]
struct Anchored {
    anchor: f64,
    end: f64,
    /// S(a) + θ(a)/π: S on piece j is `level + j − θ(x)/π`.
    level: f64,
    s1_anchor: f64,
    zeros: Vec<f64>,
    s1_at_zero: Vec<f64>,
}

impl Anchored {
    fn piece_of(&self, x: f64) -> usize {
        self.zeros.partition_point(|&g| g < x)
    }

    fn s(&self, x: f64) -> f64 {
        let j = self.zeros.partition_point(|&g| g <= x);
        self.level + j as f64 - theta_unchecked(x) / PI
    }

    /// ∫_p^q S on piece j.
    fn piece_integral(&self, j: usize, p: f64, q: f64) -> f64 {
        if q <= p {
            return 0.0;
        }
        let gl = gl16();
        let pieces = ((q - p) / 10.0).ceil().max(1.0) as usize;
        let h = (q - p) / pieces as f64;
        let mut th = NeumaierSum::new();
        for i in 0..pieces {
            let lo = p + i as f64 * h;
            let hi = if i + 1 == pieces { q } else { lo + h };
            th += gl.integrate(theta_unchecked, lo, hi);
        }
        (self.level + j as f64) * (q - p) - th.sum() / PI
    }

    fn s1(&self, x: f64) -> f64 {
        let j = self.piece_of(x);
        let (start, base) = if j == 0 {
            (self.anchor, self.s1_anchor)
        } else {
            (self.zeros[j - 1], self.s1_at_zero[j - 1])
        };
        base + self.piece_integral(j, start, x)
    }

    /// Root of S on piece j inside (p, q), if S changes sign there.
    fn s_root(&self, j: usize, p: f64, q: f64) -> Option<f64> {
        let target = PI * (self.level + j as f64);
        let f = |x: f64| theta_unchecked(x) - target;
        let (fp, fq) = (f(p), f(q));
        if !(fp < 0.0 && fq > 0.0) {
            return None;
        }
        let (mut a, mut b) = (p, q);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if f(m) < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        Some(0.5 * (a + b))
    }
}

/// Extreme values of S₁ on a sub-interval, located exactly at critical points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowExtremes {
    pub max: f64,
    pub argmax: f64,
    pub min: f64,
    pub argmin: f64,
    pub candidates: usize,
}

/// S₁ on heights |x| ∈ [lo, hi] (S₁ is even in x).
#[derive(Debug)]
pub struct S1Window {
    lo: f64,
    hi: f64,
    low_memo: Mutex<HashMap<u64, f64>>,
    low_error: Mutex<f64>,
    high: Option<Anchored>,
    check: Option<WindowCheck>,
}

impl S1Window {
    /// Builds the window model; 0 ≤ lo < hi ≤ 10⁶.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0 && lo < hi && hi <= 1e6) {
            return Err(LabError::domain(format!(
                "S1 window needs 0 <= lo < hi <= 1e6, got [{lo}, {hi}]"
            )));
        }
        let mut window = Self {
            lo,
            hi,
            low_memo: Mutex::new(HashMap::new()),
            low_error: Mutex::new(0.0),
            high: None,
            check: None,
        };
        if hi > LOW_LIMIT {
            let mut a = lo.max(LOW_LIMIT);
            if near_ordinate_wide(a)? {
                a = if a - 1e-5 >= LOW_LIMIT { a - 1e-5 } else { a + 1e-5 };
            }
            let mut end = hi;
            if near_ordinate_wide(end)? {
                end += 1e-5;
            }
            let verified = verified_zeros(a, end)?;
            let anchor_strip = strip_integral(a, DEFAULT_CUTOFF)?;
            let zeros: Vec<f64> = verified.zeros.iter().map(|z| z.ordinate()).collect();
            let mut high = Anchored {
                anchor: a,
                end,
                level: verified.s_lo + theta_unchecked(a) / PI,
                s1_anchor: anchor_strip.s1_value,
                zeros,
                s1_at_zero: Vec::new(),
            };
            let mut s1 = high.s1_anchor;
            let mut prev = a;
            let mut acc = Vec::with_capacity(high.zeros.len());
            for (j, &g) in high.zeros.iter().enumerate() {
                s1 += high.piece_integral(j, prev, g);
                acc.push(s1);
                prev = g;
            }
            high.s1_at_zero = acc;
            let end_strip = strip_integral(end, DEFAULT_CUTOFF)?;
            window.check = Some(WindowCheck {
                end,
                s_model: high.s(end),
                s_path: verified.s_hi,
                s1_model: high.s1(end),
                s1_strip: end_strip.s1_value,
                anchor_strip_error: anchor_strip.est_error,
            });
            window.high = Some(high);
        }
        Ok(window)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Start of the anchored region, if any.
    pub fn anchor(&self) -> Option<f64> {
        self.high.as_ref().map(|h| h.anchor)
    }

    /// Ordinates of the anchored region.
    pub fn zeros(&self) -> &[f64] {
        self.high.as_ref().map_or(&[], |h| &h.zeros)
    }

    pub fn check(&self) -> Option<&WindowCheck> {
        self.check.as_ref()
    }

    /// Error budget of the model: end-point disagreement plus anchor strip error,
    /// plus the largest strip error seen in the low region.
    pub fn model_error(&self) -> f64 {
        let low = *self.low_error.lock().unwrap_or_else(|e| e.into_inner());
        let high = self
            .check
            .map_or(0.0, |c| c.s1_mismatch() + c.anchor_strip_error);
        low.max(high)
    }

    fn covers(&self, ax: f64) -> bool {
        let slack = 1e-9 * self.hi.max(1.0);
        ax >= self.lo - slack && ax <= self.hi + slack
    }

    /// S₁(x); negative x uses S₁(−x) = S₁(x).
    pub fn s1(&self, x: f64) -> Result<f64> {
        let ax = x.abs();
        if !self.covers(ax) {
            return Err(LabError::domain(format!(
                "height {ax} outside the S1 window [{}, {}]",
                self.lo, self.hi
            )));
        }
        match &self.high {
            Some(h) if ax >= h.anchor => Ok(h.s1(ax.min(h.end))),
            Some(h) if ax >= LOW_LIMIT => Err(LabError::domain(format!(
                "height {ax} below the window anchor {}",
                h.anchor
            ))),
            _ => self.low_s1(ax),
        }
    }

    /// Model value of S(x) for anchor ≤ x ≤ end (right-continuous at ordinates).
    pub fn s(&self, x: f64) -> Result<f64> {
        match &self.high {
            Some(h) if x >= h.anchor && x <= h.end => Ok(h.s(x)),
            _ => Err(LabError::domain(format!(
                "S model is defined on the anchored region only, got {x}"
            ))),
        }
    }

    fn low_s1(&self, ax: f64) -> Result<f64> {
        let key = ax.to_bits();
        if let Some(v) = self
            .low_memo
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(&key)
        {
            return Ok(*v);
        }
        let v = strip_integral(ax, DEFAULT_CUTOFF)?;
        {
            let mut e = self.low_error.lock().unwrap_or_else(|e| e.into_inner());
            *e = e.max(v.est_error);
        }
        self.low_memo
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key, v.s1_value);
        Ok(v.s1_value)
    }

    /// Points in [a, b] where S₁ is not smooth: ±ordinates and 0.
    pub fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if a <= 0.0 && b >= 0.0 {
            out.push(0.0);
        }
        for &g in self.zeros() {
            if g >= a && g <= b {
                out.push(g);
            }
            if -g >= a && -g <= b {
                out.push(-g);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Exact maximum and minimum of S₁ on [a, b] within the anchored region.
    ///
    /// S decreases between ordinates (θ is increasing), so interior maxima sit at roots
    /// of S inside a piece and interior minima at ordinates where S jumps from negative
    /// to positive.
    pub fn extremes(&self, a: f64, b: f64) -> Result<WindowExtremes> {
        let h = self.high.as_ref().ok_or_else(|| {
            LabError::domain("extremes need an anchored window (heights above 10)")
        })?;
        if !(a >= h.anchor && b <= h.end && a <= b) {
            return Err(LabError::domain(format!(
                "[{a}, {b}] outside the anchored window [{}, {}]",
                h.anchor, h.end
            )));
        }
        let mut points = vec![a, b];
        let first = h.zeros.partition_point(|&g| g <= a);
        let last = h.zeros.partition_point(|&g| g < b);
        let mut p = a;
        for j in first..=last {
            let q = if j < last { h.zeros[j] } else { b };
            if let Some(r) = h.s_root(j, p, q) {
                points.push(r);
            }
            if j < last {
                let g = h.zeros[j];
                let below = h.level + j as f64 - theta_unchecked(g) / PI;
                if below < 0.0 && below + 1.0 > 0.0 {
                    points.push(g);
                }
            }
            p = q;
        }
        let mut best = WindowExtremes {
            max: f64::NEG_INFINITY,
            argmax: a,
            min: f64::INFINITY,
            argmin: a,
            candidates: points.len(),
        };
        for x in points {
            let v = h.s1(x);
            if v > best.max {
                best.max = v;
                best.argmax = x;
            }
            if v < best.min {
                best.min = v;
                best.argmin = x;
            }
        }
        Ok(best)
    }
}

fn near_ordinate_wide(t: f64) -> Result<bool> {
    if t - 1e-6 < LOW_LIMIT {
        return Ok(false);
    }
    if near_ordinate(t)? {
        return Ok(true);
    }
    let a = crate::zeta::hardy_z(t - 1e-6)?;
    let b = crate::zeta::hardy_z(t + 1e-6)?;
    Ok(a * b <= 0.0)
}
