//! Prime and prime-power tables up to e^τ and the prime Dirichlet polynomial
//! W(t) = Σ_{p ≤ e^τ} cos(t log p)/(√p log p)·(1 − log p/τ).

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::numeric::NeumaierSum;

/// Largest τ whose table is built (e^23 ≈ 10¹⁰, about 4.5·10⁸ primes).
const TAU_MEMORY_LIMIT: f64 = 23.0;
/// Budget on grid points × primes for [`w_grid`].
const GRID_BUDGET: f64 = 1e11;
/// Grid points per chunk; phases are recomputed from scratch at every chunk start.
pub const CHUNK: usize = 1 << 14;
const SEGMENT: u64 = 1 << 18;

/// A prime power n = p^j together with Λ(n) = log p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimePower {
    pub n: u64,
    pub p: u64,
    pub lambda: f64,
}

/// All prime powers n ≤ e^τ, read-only after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimePowerTable {
    tau: f64,
    limit: u64,
    primes: Vec<u64>,
    prime_powers: Vec<PrimePower>,
    /// (log p, (1 − log p/τ)/(√p log p)) for each prime, ascending.
    w_terms: Vec<(f64, f64)>,
}

impl PrimePowerTable {
    fn from_parts(tau: f64, limit: u64, mut prime_powers: Vec<PrimePower>) -> Self {
        prime_powers.sort_by_key(|pp| pp.n);
        let primes: Vec<u64> = prime_powers
            .iter()
            .filter(|pp| pp.n == pp.p)
            .map(|pp| pp.p)
            .collect();
        let w_terms = primes
            .iter()
            .map(|&p| {
                let l = (p as f64).ln();
                (l, (1.0 - l / tau) / ((p as f64).sqrt() * l))
            })
            .collect();
        Self {
            tau,
            limit,
            primes,
            prime_powers,
            w_terms,
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// ⌊e^τ⌋, the largest admissible n.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn prime_powers(&self) -> &[PrimePower] {
        &self.prime_powers
    }

    /// f(p) = (1 − log p/τ)/(√p log p) for each prime, ascending.
    pub fn coefficients(&self) -> impl Iterator<Item = f64> + '_ {
        self.w_terms.iter().map(|&(_, w)| w)
    }

    /// Σ_p f(p), the triangle-inequality bound on |W|.
    pub fn abs_bound(&self) -> f64 {
        self.coefficients().collect::<NeumaierSum>().sum()
    }

    /// Σ_p f(p)².
    pub fn sum_sq(&self) -> f64 {
        self.coefficients().map(|w| w * w).collect::<NeumaierSum>().sum()
    }
}

/// Largest integer n with log n ≤ τ.
fn limit_for(tau: f64) -> u64 {
    let mut n = tau.exp().floor() as u64;
    while n > 1 && (n as f64).ln() > tau {
        n -= 1;
    }
    while ((n + 1) as f64).ln() <= tau {
        n += 1;
    }
    n
}

/// Builds the table of prime powers n ≤ e^τ by a segmented sieve of Eratosthenes.
pub fn build_table(tau: f64) -> Result<PrimePowerTable> {
    if !(tau > 0.0 && tau <= 30.0) {
        return Err(LabError::domain(format!("tau = {tau} outside (0, 30]")));
    }
    if tau > TAU_MEMORY_LIMIT {
        return Err(LabError::Resource(format!(
            "a prime table up to e^{tau} does not fit in memory (limit tau <= {TAU_MEMORY_LIMIT})"
        )));
    }
    let limit = limit_for(tau);
    let primes = sieve(limit);
    let mut powers = Vec::with_capacity(primes.len() + primes.len() / 4);
    for &p in &primes {
        let lambda = (p as f64).ln();
        let mut n = p;
        loop {
            powers.push(PrimePower { n, p, lambda });
            match n.checked_mul(p) {
                Some(m) if m <= limit => n = m,
                _ => break,
            }
        }
    }
    Ok(PrimePowerTable::from_parts(tau, limit, powers))
}

fn simple_sieve(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root as usize);
    let mut primes = Vec::new();
    let mut lo = 2u64;
    let mut marks = vec![false; SEGMENT as usize];
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        marks[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = (lo.div_ceil(p) * p).max(p * p);
            while start <= hi {
                marks[(start - lo) as usize] = true;
                start += p;
            }
        }
        primes.extend(
            (0..len)
                .filter(|&i| !marks[i])
                .map(|i| lo + i as u64),
        );
        lo = hi + 1;
    }
    primes
}

const CACHE_MAGIC: &str = "# s1lab prime-power table";

/// Path of the cached table for τ inside `dir`.
pub fn cache_path(dir: &Path, tau: f64) -> PathBuf {
    dir.join(format!("prime_powers_{:016x}.tsv", tau.to_bits()))
}

/// [`build_table`] backed by an optional on-disk cache.
///
/// The cache file is text: a header line `# s1lab prime-power table tau_bits=<hex>
/// limit=<n> count=<m>` followed by one `n<TAB>p<TAB>lambda` line per prime power in
/// ascending n, with λ written in shortest round-trip form. A missing or mismatched
/// file is rebuilt; results are identical with and without the cache.
pub fn build_table_cached(tau: f64, cache_dir: Option<&Path>) -> Result<PrimePowerTable> {
    let Some(dir) = cache_dir else {
        return build_table(tau);
    };
    let path = cache_path(dir, tau);
    if let Ok(table) = read_cache(&path, tau) {
        return Ok(table);
    }
    let table = build_table(tau)?;
    write_cache(&path, &table)?;
    Ok(table)
}

fn header(table: &PrimePowerTable) -> String {
    format!(
        "{CACHE_MAGIC} tau_bits={:016x} limit={} count={}",
        table.tau.to_bits(),
        table.limit,
        table.prime_powers.len()
    )
}

fn write_cache(path: &Path, table: &PrimePowerTable) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| LabError::io(parent, e))?;
    }
    let tmp = path.with_extension("tsv.tmp");
    let file = fs::File::create(&tmp).map_err(|e| LabError::io(&tmp, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| LabError::io(&tmp, e);
    writeln!(w, "{}", header(table)).map_err(io)?;
    for pp in &table.prime_powers {
        writeln!(w, "{}\t{}\t{}", pp.n, pp.p, pp.lambda).map_err(io)?;
    }
    w.flush().map_err(io)?;
    drop(w);
    fs::rename(&tmp, path).map_err(|e| LabError::io(path, e))
}

fn read_cache(path: &Path, tau: f64) -> Result<PrimePowerTable> {
    let file = fs::File::open(path).map_err(|e| LabError::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let bad = |msg: &str| LabError::io(path, msg);
    let head = lines
        .next()
        .ok_or_else(|| bad("empty cache file"))?
        .map_err(|e| LabError::io(path, e))?;
    let limit = limit_for(tau);
    let mut powers = Vec::new();
    for line in lines {
        let line = line.map_err(|e| LabError::io(path, e))?;
        let mut f = line.split('\t');
        let (Some(n), Some(p), Some(l), None) = (f.next(), f.next(), f.next(), f.next()) else {
            return Err(bad("malformed cache line"));
        };
        let parse = |s: &str| s.parse::<u64>().map_err(|_| bad("malformed integer"));
        powers.push(PrimePower {
            n: parse(n)?,
            p: parse(p)?,
            lambda: l.parse().map_err(|_| bad("malformed lambda"))?,
        });
    }
    let table = PrimePowerTable::from_parts(tau, limit, powers);
    if head != header(&table) {
        return Err(bad("cache header does not match"));
    }
    Ok(table)
}

/// A uniformly sampled real function: values[i] = g(t0 + i·dt).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !t0.is_finite() {
            return Err(LabError::domain("grid needs finite t0 and dt > 0"));
        }
        if values.is_empty() {
            return Err(LabError::domain("grid needs at least one sample"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LabError::domain("grid values must be finite"));
        }
        Ok(Self { t0, dt, values })
    }

    /// Samples `f` at t0 + i·dt, i < n.
    pub fn sample(t0: f64, dt: f64, n: usize, f: impl Fn(f64) -> f64 + Sync) -> Result<Self> {
        let values = (0..n).into_par_iter().map(|i| f(t0 + i as f64 * dt)).collect();
        Self::new(t0, dt, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t_at(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t_at(self.values.len() - 1)
    }

    /// The same grid with every value multiplied by c.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            t0: self.t0,
            dt: self.dt,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

/// W(t), summed over ascending primes with compensation.
pub fn w_point(t: f64, table: &PrimePowerTable) -> f64 {
    let mut acc = NeumaierSum::new();
    for &(l, w) in &table.w_terms {
        acc += w * (t * l).cos();
    }
    acc.sum()
}

/// W on the grid t0 + i·dt, i < n.
///
/// Each chunk of 2¹⁴ points starts from directly computed phases and advances them by
/// rotation through e^{i·dt·log p}, with the rotation angle carried in double-double.
/// Every grid value is reduced over ascending primes, so the output does not depend on
/// the number of worker threads.
pub fn w_grid(t0: f64, dt: f64, n: usize, table: &PrimePowerTable) -> Result<GridFunction> {
    if n == 0 || !(dt > 0.0) {
        return Err(LabError::domain("w_grid needs n >= 1 and dt > 0"));
    }
    let work = n as f64 * table.w_terms.len() as f64;
    if work > GRID_BUDGET {
        return Err(LabError::Resource(format!(
            "w_grid of {n} points over {} primes exceeds the 1e11 budget",
            table.w_terms.len()
        )));
    }
    let steps: Vec<(f64, f64)> = table
        .w_terms
        .iter()
        .map(|&(l, _)| {
            let (hi, lo) = two_prod(dt, l);
            let (s, c) = hi.sin_cos();
            (c - s * lo, s + c * lo)
        })
        .collect();
    let mut values = vec![0.0; n];
    values
        .par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(ci, out)| {
            let start = ci * CHUNK;
            let mut acc = vec![NeumaierSum::new(); out.len()];
            for (&(l, w), &(rc, rs)) in table.w_terms.iter().zip(&steps) {
                let t = t0 + start as f64 * dt;
                let (mut s, mut c) = (t * l).sin_cos();
                for a in acc.iter_mut() {
                    *a += w * c;
                    let nc = c * rc - s * rs;
                    s = s * rc + c * rs;
                    c = nc;
                }
            }
            for (o, a) in out.iter_mut().zip(&acc) {
                *o = a.sum();
            }
        });
    GridFunction::new(t0, dt, values)
}

/// Exact product a·b = hi + lo.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let hi = a * b;
    (hi, a.mul_add(b, -hi))
}

/// (2/τ)·Σ_{n ≤ e^τ} Λ(n)/(√n (log n)²)·(1 − log n/τ)·cos(t log n) over all prime powers.
pub fn full_lambda_sum(t: f64, table: &PrimePowerTable) -> f64 {
    let tau = table.tau;
    let mut acc = NeumaierSum::new();
    for pp in &table.prime_powers {
        let l = (pp.n as f64).ln();
        acc += pp.lambda / ((pp.n as f64).sqrt() * l * l) * (1.0 - l / tau) * (t * l).cos();
    }
    2.0 / tau * acc.sum()
}
