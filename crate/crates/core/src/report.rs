//! Scan reports: a JSON manifest with the certificate and a CSV of (t, W, S₁).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::argument::constant_c;
use crate::error::{LabError, Result};
use crate::moments::{moment_report, MomentReport};
use crate::search::{derive_params, scan, ExtremeValueCertificate, ScanRequest, SearchParams};

pub const SCHEMA_VERSION: u32 = 1;
pub const REPORT_FILE: &str = "report.json";
pub const GRID_FILE: &str = "grid.csv";

/// Optional moment stage over [T, T + H] on the scan grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentStage {
    pub k: u32,
    #[serde(rename = "M")]
    pub m_level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportConfig {
    pub scan: ScanRequest,
    /// ε for the theorem parameters reported alongside the scan.
    pub eps: f64,
    pub moments: Option<MomentStage>,
}

impl ReportConfig {
    /// Scan configuration whose omega level is B(T, ε).
    pub fn new(t: f64, h: f64, tau: f64, dt: f64, refine: bool, eps: f64) -> Result<Self> {
        let bound_b = derive_params(t, eps)?.bound_b;
        Ok(Self {
            scan: ScanRequest {
                t,
                h,
                tau,
                dt,
                refine,
                bound_b,
                cache_dir: None,
            },
            eps,
            moments: None,
        })
    }
}

#[derive(Debug, Serialize)]
struct PrimeTableInfo {
    tau: f64,
    limit: u64,
    primes: usize,
    prime_powers: usize,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    package: &'static str,
    version: &'static str,
    config: &'a ReportConfig,
    prime_table: PrimeTableInfo,
    #[serde(rename = "constant_C")]
    constant_c: f64,
}

#[derive(Debug, Serialize)]
struct ErrorBudget {
    /// Disagreement of the S₁ window model with independent evaluations.
    s1_model: f64,
    /// Strip-integral error next to the reported extremes.
    s1_strip: f64,
    #[serde(rename = "constant_C")]
    constant_c: f64,
    moment_quadrature: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    schema_version: u32,
    timestamp: String,
    manifest: Manifest<'a>,
    params: SearchParams,
    certificate: &'a ExtremeValueCertificate,
    error_budget: ErrorBudget,
    moments: Option<MomentReport>,
}

/// Paths of the files written by [`run_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFiles {
    pub json: PathBuf,
    pub csv: PathBuf,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| LabError::io(path, e))
}

/// Runs the scan (and the moment stage, if configured) and writes `report.json` and
/// `grid.csv` into `out_dir`. Output depends only on the configuration; the timestamp
/// sits alone on one line of the JSON.
pub fn run_report(config: &ReportConfig, out_dir: &Path) -> Result<ReportFiles> {
    fs::create_dir_all(out_dir).map_err(|e| LabError::io(out_dir, e))?;
    let result = scan(&config.scan)?;
    let s1 = result.s1_on_grid()?;
    let req = &config.scan;

    let moments = match config.moments {
        Some(stage) => {
            let offset = req.h / req.dt;
            if (offset - offset.round()).abs() > 1e-6 {
                return Err(LabError::domain(
                    "moment stage needs H to be a multiple of the grid step",
                ));
            }
            Some(moment_report(
                &result.w,
                &result.table,
                stage.k,
                req.t,
                req.h,
                Some(stage.m_level),
            )?)
        }
        None => None,
    };

    let c = constant_c();
    let cert = &result.certificate;
    let report = Report {
        schema_version: SCHEMA_VERSION,
        timestamp: format!(
            "unix:{}",
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        ),
        manifest: Manifest {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config,
            prime_table: PrimeTableInfo {
                tau: result.table.tau(),
                limit: result.table.limit(),
                primes: result.table.primes().len(),
                prime_powers: result.table.prime_powers().len(),
            },
            constant_c: c.c,
        },
        params: derive_params(req.t, config.eps)?,
        certificate: cert,
        error_budget: ErrorBudget {
            s1_model: cert.method_trace.model_error,
            s1_strip: cert
                .method_trace
                .strip_at_sup
                .strip_error
                .max(cert.method_trace.strip_at_inf.strip_error),
            constant_c: c.est_error,
            moment_quadrature: moments.as_ref().map(|m| m.quadrature_error),
        },
        moments,
    };

    let mut json = serde_json::to_string_pretty(&report)
        .map_err(|e| LabError::io(out_dir.join(REPORT_FILE), e))?;
    json.push('\n');
    let json_path = out_dir.join(REPORT_FILE);
    write_file(&json_path, json.as_bytes())?;

    let csv_path = out_dir.join(GRID_FILE);
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io_err = |e: csv::Error| LabError::io(&csv_path, e);
    writer.write_record(["t", "W", "S1"]).map_err(io_err)?;
    for (i, (&w, &s)) in result.w.values.iter().zip(&s1).enumerate() {
        writer
            .serialize((result.w.t_at(i), w, s))
            .map_err(io_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| LabError::io(&csv_path, e.error()))?;
    write_file(&csv_path, &bytes)?;

    Ok(ReportFiles {
        json: json_path,
        csv: csv_path,
    })
}
