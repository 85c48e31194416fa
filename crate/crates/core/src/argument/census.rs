//! Zero enumeration certified by the argument principle.

use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::path_s;
use crate::error::{LabError, Result};
use crate::zeta::{rs_theta, zero_ordinates_with_step, zeros::default_step, ZeroBracket};

const ORIGIN: f64 = 10.0;
const BLOCK: f64 = 50.0;
const CENSUS_CEILING: f64 = 1e5;
const MAX_RETRIES: u32 = 3;

/// Ordinates in (lo, hi] whose number matches the argument principle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifiedZeros {
    pub lo: f64,
    pub hi: f64,
    pub zeros: Vec<ZeroBracket>,
    /// Path-tracked S at the two ends.
    pub s_lo: f64,
    pub s_hi: f64,
    /// Sampling step of the successful search.
    pub step: f64,
}

/// Finds all ordinates in (lo, hi] and checks their number against
/// (θ(hi) − θ(lo))/π + S(hi) − S(lo), halving the sampling step up to three times.
pub fn verified_zeros(lo: f64, hi: f64) -> Result<VerifiedZeros> {
    let (s_lo, _) = path_s(lo)?;
    let (s_hi, _) = path_s(hi)?;
    let expected_real = (rs_theta(hi)? - rs_theta(lo)?) / PI + s_hi - s_lo;
    let expected = expected_real.round();
    let mut step = default_step(hi);
    let mut found = 0;
    for _ in 0..=MAX_RETRIES {
        let zeros = zero_ordinates_with_step(lo, hi, step)?;
        found = zeros.len();
        if (expected_real - expected).abs() < 0.25 && found as f64 == expected {
            return Ok(VerifiedZeros {
                lo,
                hi,
                zeros,
                s_lo,
                s_hi,
                step,
            });
        }
        step *= 0.5;
    }
    Err(LabError::ZeroCount {
        lo,
        hi,
        found,
        expected: expected as i64,
    })
}

#[derive(Default)]
struct Census {
    blocks: Vec<Vec<ZeroBracket>>,
}

fn census() -> &'static Mutex<Census> {
    static CENSUS: OnceLock<Mutex<Census>> = OnceLock::new();
    CENSUS.get_or_init(|| Mutex::new(Census::default()))
}

fn block_index(t: f64) -> usize {
    (((t - ORIGIN) / BLOCK).floor().max(0.0)) as usize
}

fn with_blocks<R>(upto: f64, f: impl FnOnce(&[Vec<ZeroBracket>]) -> R) -> Result<R> {
    if !(ORIGIN..=CENSUS_CEILING).contains(&upto) {
        return Err(LabError::domain(format!(
            "zero census covers [10, 1e5], got {upto}"
        )));
    }
    let need = block_index(upto) + 1;
    let mut guard = census().lock().unwrap_or_else(|e| e.into_inner());
    while guard.blocks.len() < need {
        let k = guard.blocks.len();
        let lo = ORIGIN + k as f64 * BLOCK;
        let v = verified_zeros(lo, lo + BLOCK)?;
        guard.blocks.push(v.zeros);
    }
    Ok(f(&guard.blocks[..need]))
}

/// N(t) − N(10): number of ordinates in (10, t], an ordinate whose bracket contains t
/// counting one half. N(10) = 0.
pub fn count_zeros_upto(t: f64) -> Result<f64> {
    with_blocks(t, |blocks| {
        let detailed = blocks.len().saturating_sub(2);
        let mut n: f64 = blocks[..detailed].iter().map(|b| b.len() as f64).sum();
        for b in &blocks[detailed..] {
            for z in b {
                if z.hi <= t {
                    n += 1.0;
                } else if z.lo <= t {
                    n += 0.5;
                }
            }
        }
        n
    })
}

/// Ordinates γ with a < γ ≤ b.
pub(crate) fn zeros_in(a: f64, b: f64) -> Result<Vec<f64>> {
    with_blocks(b, |blocks| {
        blocks[block_index(a).min(blocks.len() - 1)..]
            .iter()
            .flatten()
            .map(ZeroBracket::ordinate)
            .filter(|&g| g > a && g <= b)
            .collect()
    })
}
