//! `s1lab`: parameter audits, S₁ extreme-value scans and numerical checks.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use s1lab::argument::{near_ordinate, s_via_counting, s_via_path, verified_zeros};
use s1lab::dirichlet::{build_table_cached, w_grid};
use s1lab::moments::moment_report;
use s1lab::report::{run_report, MomentStage, ReportConfig};
use s1lab::search::derive_params;
use s1lab::smoothing::{lemma1_identity_check_with, FejerParams};

#[derive(Parser, Debug)]
#[command(name = "s1lab", version, about = "Large values of S1(t) for the Riemann zeta function")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Directory for cached prime-power tables.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Pass/fail tolerance for checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Large-value parameters for (T, eps), their side conditions and the feasibility threshold.
    Params {
        #[arg(long = "T")]
        t: f64,
        #[arg(long)]
        eps: f64,
    },
    /// Scan [T-H, T+2H] for extremes of S1; writes report.json and grid.csv.
    Scan {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "H")]
        h: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        dt: f64,
        /// Add the exact extremes from the critical points of S1.
        #[arg(long)]
        refine: bool,
        #[arg(long)]
        out: PathBuf,
        /// eps for the omega level B(T, eps).
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        /// Moment order k for an optional moment stage over [T, T+H].
        #[arg(long)]
        k: Option<u32>,
        /// Level M for the moment criterion (with --k).
        #[arg(long = "M", requires = "k")]
        m: Option<f64>,
    },
    /// Both sides of the smoothed-S1 identity at (t, tau, H).
    SmoothCheck {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long = "H")]
        h: f64,
    },
    /// Moments of W over [T, T+H] with the closed-form bounds.
    Moments {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "H")]
        h: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        k: u32,
        /// Level M for the moment criterion.
        #[arg(long = "M")]
        m: Option<f64>,
        /// Largest grid step; the default is min(0.05, pi/(4 tau)).
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Zero ordinates in (lo, hi] as CSV, checked against the argument principle.
    Zeros {
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
    },
    /// S(T) by path tracking against zero counting at random heights.
    CrossCheck {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 50.0)]
        lo: f64,
        #[arg(long, default_value_t = 5000.0)]
        hi: f64,
    },
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    rayon::ThreadPoolBuilder::new()
        .num_threads(g.threads)
        .build_global()
        .context("configuring the thread pool")?;
    match cli.command {
        Command::Params { t, eps } => print_json(&derive_params(t, eps)?),
        Command::Scan {
            t,
            h,
            tau,
            dt,
            refine,
            out,
            eps,
            k,
            m,
        } => {
            let mut cfg = ReportConfig::new(t, h, tau, dt, refine, eps)?;
            cfg.scan.cache_dir = g.cache_dir.clone();
            if let Some(k) = k {
                let m_level = match m {
                    Some(m) => m,
                    None => derive_params(t, eps)?.m_level.unwrap_or(0.1),
                };
                cfg.moments = Some(MomentStage { k, m_level });
            }
            let files = run_report(&cfg, &out)?;
            println!("{}", files.json.display());
            println!("{}", files.csv.display());
            Ok(())
        }
        Command::SmoothCheck { t, tau, h } => {
            let p = FejerParams::new(tau, h, t)?;
            let table = build_table_cached(tau, g.cache_dir.as_deref())?;
            print_json(&lemma1_identity_check_with(&p, &table)?)
        }
        Command::Moments {
            t,
            h,
            tau,
            k,
            m,
            dt,
        } => {
            let max_dt = dt.unwrap_or_else(|| (PI / (4.0 * tau)).min(0.05));
            if !(max_dt > 0.0 && h > 0.0) {
                bail!("grid step and H must be positive");
            }
            let n = (h / max_dt).ceil() as usize;
            let table = build_table_cached(tau, g.cache_dir.as_deref())?;
            let w = w_grid(t, h / n as f64, n + 1, &table)?;
            print_json(&moment_report(&w, &table, k, t, h, m)?)
        }
        Command::Zeros { lo, hi } => {
            // No ordinate lies below 14.
            let v = verified_zeros(lo.max(10.0), hi)?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "n,ordinate,bracket_lo,bracket_hi")?;
            for (i, z) in v.zeros.iter().enumerate() {
                writeln!(out, "{},{},{},{}", i + 1, z.ordinate(), z.lo, z.hi)?;
            }
            Ok(())
        }
        Command::CrossCheck { count, lo, hi } => {
            let tol = g.tolerance.unwrap_or(1e-6);
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let mut rows = Vec::with_capacity(count);
            let mut worst = 0.0f64;
            while rows.len() < count {
                let t: f64 = rng.gen_range(lo..hi);
                if near_ordinate(t)? {
                    continue;
                }
                let a = s_via_path(t)?.s_value;
                let b = s_via_counting(t)?.s_value;
                worst = worst.max((a - b).abs());
                rows.push(json!({ "t": t, "path": a, "counting": b }));
            }
            print_json(&json!({
                "seed": g.seed,
                "tolerance": tol,
                "max_difference": worst,
                "passes": worst < tol,
                "samples": rows,
            }))?;
            if worst >= tol {
                bail!("path and counting differ by {worst:e} (tolerance {tol:e})");
            }
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
