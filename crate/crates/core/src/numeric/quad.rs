//! Adaptive Gauss–Kronrod quadrature and fixed Gauss–Legendre rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{LabError, Result};
use crate::numeric::sum::NeumaierSum;

/// Kronrod nodes of the 15-point rule on [-1, 1] (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Weights of the embedded 7-point Gauss rule, at `XGK[1]`, `XGK[3]`, `XGK[5]`, `XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel with the 7-point Gauss difference as its error estimate.
pub fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Ok((kron * h, ((kron - gauss) * h).abs()))
}

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any panel.
    pub max_depth: u32,
    /// Hard cap on the number of panel evaluations.
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            max_depth: 30,
            max_panels: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    /// False when panels at maximum depth still exceed the tolerance.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
    singular: bool,
    seq: u64,
}

impl Panel {
    fn priority(&self) -> f64 {
        if self.singular {
            f64::INFINITY
        } else {
            self.error
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority()
            .total_cmp(&other.priority())
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Globally adaptive GK15 quadrature over consecutive intervals `breaks[0] .. breaks[n-1]`.
///
/// Panels whose integrand reports [`LabError::Singularity`] are bisected with top priority;
/// one that is still singular at `max_depth` is a quadrature failure. Panels at `max_depth`
/// that merely fail the tolerance are frozen and the result is marked not converged.
pub fn integrate<F>(mut f: F, breaks: &[f64], opts: &AdaptiveOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if breaks.len() < 2 {
        return Err(LabError::domain("integrate needs at least two break points"));
    }
    if breaks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(LabError::domain("integration break points must increase strictly"));
    }
    let mut seq = 0u64;
    let mut evaluate = |a: f64, b: f64, depth: u32, f: &mut F| -> Result<Panel> {
        seq += 1;
        match gk15(f, a, b) {
            Ok((value, error)) => Ok(Panel {
                a,
                b,
                value,
                error,
                depth,
                singular: false,
                seq,
            }),
            Err(LabError::Singularity { .. }) => Ok(Panel {
                a,
                b,
                value: 0.0,
                error: 0.0,
                depth,
                singular: true,
                seq,
            }),
            Err(e) => Err(e),
        }
    };

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut panels = 0usize;
    let mut running = Running::default();
    for w in breaks.windows(2) {
        let p = evaluate(w[0], w[1], 0, &mut f)?;
        running.push(&p);
        heap.push(p);
        panels += 1;
    }

    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations.is_multiple_of(64) {
            running = Running::default();
            for p in heap.iter().chain(frozen.iter()) {
                running.push(p);
            }
        }
        let tol = opts.abs_tol.max(opts.rel_tol * running.value.abs());
        if running.singular == 0 && running.error <= tol {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= opts.max_depth || panels >= opts.max_panels {
            if worst.singular {
                return Err(LabError::Quadrature(format!(
                    "singular panel [{}, {}] did not resolve after {} subdivisions",
                    worst.a, worst.b, worst.depth
                )));
            }
            frozen.push(worst);
            if panels >= opts.max_panels {
                frozen.extend(heap.drain());
            }
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            frozen.push(worst);
            continue;
        }
        let left = evaluate(worst.a, mid, worst.depth + 1, &mut f)?;
        let right = evaluate(mid, worst.b, worst.depth + 1, &mut f)?;
        running.pop(&worst);
        running.push(&left);
        running.push(&right);
        heap.push(left);
        heap.push(right);
        panels += 2;
    }

    let mut all: Vec<Panel> = heap.into_vec();
    all.extend(frozen);
    if let Some(p) = all.iter().find(|p| p.singular) {
        return Err(LabError::Quadrature(format!(
            "singular panel [{}, {}] left unresolved",
            p.a, p.b
        )));
    }
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = NeumaierSum::new();
    let mut error = 0.0;
    for p in &all {
        value += p.value;
        error += p.error;
    }
    let value = value.sum();
    let converged = error <= opts.abs_tol.max(opts.rel_tol * value.abs());
    Ok(QuadResult {
        value,
        error,
        panels,
        converged,
    })
}

#[derive(Default)]
struct Running {
    value: f64,
    error: f64,
    singular: usize,
}

impl Running {
    fn push(&mut self, p: &Panel) {
        self.value += p.value;
        self.error += p.error;
        self.singular += p.singular as usize;
    }

    fn pop(&mut self, p: &Panel) {
        self.value -= p.value;
        self.error = (self.error - p.error).max(0.0);
        self.singular -= p.singular as usize;
    }
}

/// Fixed n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes from Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule to `f` on [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = NeumaierSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + h * x);
        }
        acc.sum() * h
    }

    /// Fallible variant of [`GaussLegendre::integrate`].
    pub fn try_integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = NeumaierSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + h * x)?;
        }
        Ok(acc.sum() * h)
    }
}

/// Legendre polynomial P_n(x) and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Simpson rule on equally spaced samples, with a 3/8 panel when the
/// number of intervals is odd.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let (simpson_end, tail) = if intervals % 2 == 1 {
                (n - 4, true)
            } else {
                (n - 1, false)
            };
            let mut acc = NeumaierSum::new();
            acc += values[0];
            acc += values[simpson_end];
            for (i, v) in values.iter().enumerate().take(simpson_end).skip(1) {
                acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            let mut total = acc.sum() * h / 3.0;
            if tail {
                let j = simpson_end;
                total += 3.0 * h / 8.0
                    * (values[j] + 3.0 * values[j + 1] + 3.0 * values[j + 2] + values[j + 3]);
            }
            total
        }
    }
}
