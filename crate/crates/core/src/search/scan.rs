use std::f64::consts::PI;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::argument::{s1_strip, S1Window, WindowCheck, DEFAULT_CUTOFF};
use crate::dirichlet::{build_table_cached, w_grid, GridFunction, PrimePowerTable};
use crate::error::{LabError, Result};

/// Number of W maxima and of W minima kept as candidates.
const CANDIDATES_PER_SIGN: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRequest {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub tau: f64,
    pub dt: f64,
    pub refine: bool,
    /// Level that both sup S₁ and −inf S₁ must reach.
    pub bound_b: f64,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

impl ScanRequest {
    pub fn interval(&self) -> (f64, f64) {
        (self.t - self.h, self.t + 2.0 * self.h)
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = self.interval();
        if !(self.h > 0.0 && a >= 10.0 && b <= 1e6) {
            return Err(LabError::domain(format!(
                "scan needs 10 <= T-H and T+2H <= 1e6, got [{a}, {b}]"
            )));
        }
        if !(self.tau > 0.0) {
            return Err(LabError::domain(format!("tau must be positive, got {}", self.tau)));
        }
        let max_dt = PI / (4.0 * self.tau);
        if !(self.dt > 0.0 && self.dt <= max_dt) {
            return Err(LabError::domain(format!(
                "grid step {} must lie in (0, pi/(4 tau)] = (0, {max_dt}]",
                self.dt
            )));
        }
        if !self.bound_b.is_finite() {
            return Err(LabError::domain("bound_b must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodTrace {
    pub grid_dt: f64,
    pub grid_points: usize,
    /// Heights of the W extrema used as candidates, maxima first.
    pub candidates: Vec<f64>,
    pub probe_dt: f64,
    pub probe_radius: f64,
    pub probes: usize,
    pub sweep_dt: f64,
    pub sweep_points: usize,
    pub refined: bool,
    /// Critical points examined by the exact refinement.
    pub critical_points: usize,
    pub zeros_in_window: usize,
    pub model_error: f64,
    pub window_check: Option<WindowCheck>,
    /// Independent strip integrals next to the reported extremes.
    pub strip_at_sup: StripCheck,
    pub strip_at_inf: StripCheck,
}

/// Window model against a strip integral at `t`, which is the reported extreme or, when
/// that is an ordinate (where the integrand has a log singularity on the line), a point
/// 10⁻⁶ away from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripCheck {
    pub t: f64,
    pub model: f64,
    pub strip: f64,
    pub strip_error: f64,
}

impl StripCheck {
    pub fn mismatch(&self) -> f64 {
        (self.model - self.strip).abs()
    }
}

fn strip_check(window: &S1Window, x: f64, a: f64, b: f64) -> Result<StripCheck> {
    let mut last = None;
    for cand in [x, x + 1e-6, x - 1e-6] {
        if cand < a || cand > b {
            continue;
        }
        match s1_strip(cand, DEFAULT_CUTOFF) {
            Ok(v) => {
                return Ok(StripCheck {
                    t: cand,
                    model: window.s1(cand)?,
                    strip: v.s1_value,
                    strip_error: v.est_error,
                })
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| LabError::domain("no strip check point inside the interval")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremeValueCertificate {
    pub interval: [f64; 2],
    #[serde(rename = "sup_S1")]
    pub sup_s1: f64,
    pub t_plus: f64,
    #[serde(rename = "inf_S1")]
    pub inf_s1: f64,
    pub t_minus: f64,
    #[serde(rename = "bound_B")]
    pub bound_b: f64,
    pub passes_omega_check: bool,
    pub method_trace: MethodTrace,
}

/// Certificate together with the data behind it.
#[derive(Debug)]
pub struct ScanResult {
    pub certificate: ExtremeValueCertificate,
    pub table: PrimePowerTable,
    /// W on the stage-1 grid, starting at T − H.
    pub w: GridFunction,
    pub window: S1Window,
}

impl ScanResult {
    /// S₁ at every stage-1 grid node.
    pub fn s1_on_grid(&self) -> Result<Vec<f64>> {
        (0..self.w.len())
            .into_par_iter()
            .map(|i| self.window.s1(self.w.t_at(i)))
            .collect()
    }
}

/// Indices of strict-or-flat local maxima (by `key`) of the interior of `v`.
fn local_extrema(v: &[f64], sign: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (1..v.len().saturating_sub(1))
        .filter(|&i| {
            let (a, b, c) = (sign * v[i - 1], sign * v[i], sign * v[i + 1]);
            b >= a && b > c
        })
        .collect();
    idx.sort_by(|&i, &j| (sign * v[j]).total_cmp(&(sign * v[i])).then(i.cmp(&j)));
    idx.truncate(CANDIDATES_PER_SIGN);
    idx
}

/// Two-stage search for the extremes of S₁ on [T − H, T + 2H].
///
/// Stage 1 samples W; its largest and smallest local extrema become candidates. Stage 2
/// samples S₁ at dt/10 within ±2/τ of each candidate and on a uniform sweep at 10·dt.
/// With `refine`, the exact extremes over the whole interval are added from the critical
/// points of S₁.
pub fn scan(req: &ScanRequest) -> Result<ScanResult> {
    req.validate()?;
    let (a, b) = req.interval();
    let n = ((b - a) / req.dt - 1e-9).ceil() as usize + 1;
    let table = build_table_cached(req.tau, req.cache_dir.as_deref())?;
    let w = w_grid(a, req.dt, n, &table)?;
    let window = S1Window::new(a, w.t_end().max(b).min(1e6))?;

    let mut candidates: Vec<f64> = local_extrema(&w.values, 1.0)
        .into_iter()
        .chain(local_extrema(&w.values, -1.0))
        .map(|i| w.t_at(i))
        .collect();
    candidates.dedup();

    let probe_dt = req.dt / 10.0;
    let radius = 2.0 / req.tau;
    let steps = (radius / probe_dt).floor() as i64;
    let mut probes = Vec::new();
    for &c in &candidates {
        for j in -steps..=steps {
            let x = c + j as f64 * probe_dt;
            if x >= a && x <= b {
                probes.push(x);
            }
        }
    }
    let n_probes = probes.len();
    let sweep_dt = 10.0 * req.dt;
    let sweep_n = ((b - a) / sweep_dt).floor() as usize + 1;
    probes.extend((0..sweep_n).map(|i| a + i as f64 * sweep_dt));
    probes.push(b);

    let values: Vec<f64> = probes
        .par_iter()
        .map(|&x| window.s1(x))
        .collect::<Result<_>>()?;
    let (mut sup, mut t_plus) = (f64::NEG_INFINITY, a);
    let (mut inf, mut t_minus) = (f64::INFINITY, a);
    for (&x, &v) in probes.iter().zip(&values) {
        if v > sup {
            sup = v;
            t_plus = x;
        }
        if v < inf {
            inf = v;
            t_minus = x;
        }
    }

    let mut critical_points = 0;
    if req.refine {
        let lo = window.anchor().unwrap_or(a).max(a);
        let ext = window.extremes(lo, b)?;
        critical_points = ext.candidates;
        if ext.max > sup {
            sup = ext.max;
            t_plus = ext.argmax;
        }
        if ext.min < inf {
            inf = ext.min;
            t_minus = ext.argmin;
        }
    }

    let (at_sup, at_inf) = rayon::join(
        || strip_check(&window, t_plus, a, b),
        || strip_check(&window, t_minus, a, b),
    );
    let (at_sup, at_inf) = (at_sup?, at_inf?);

    let certificate = ExtremeValueCertificate {
        interval: [a, b],
        sup_s1: sup,
        t_plus,
        inf_s1: inf,
        t_minus,
        bound_b: req.bound_b,
        passes_omega_check: sup >= req.bound_b && -inf >= req.bound_b,
        method_trace: MethodTrace {
            grid_dt: req.dt,
            grid_points: n,
            candidates,
            probe_dt,
            probe_radius: radius,
            probes: n_probes,
            sweep_dt,
            sweep_points: sweep_n + 1,
            refined: req.refine,
            critical_points,
            zeros_in_window: window.zeros().len(),
            model_error: window.model_error(),
            window_check: window.check().copied(),
            strip_at_sup: at_sup,
            strip_at_inf: at_inf,
        },
    };
    Ok(ScanResult {
        certificate,
        table,
        w,
        window,
    })
}
