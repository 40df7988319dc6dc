//! Parameter sweeps, volume evidence, the pole-domain diagnostic and report export.

pub mod acceptance;

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{growth_rate, rhs_theorem_main, PhaseCalibration};
use crate::error::{Error, Result};
use crate::invariant::{homfly_exact, homfly_qdilog_form, qdilog_config, residue_reconstruction};
use crate::logc::LogComplex;
use crate::numerics::QuadratureConfig;
use crate::params::{ModelParams, U_MAX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Exact,
    Asymptotic,
    Both,
    ResidueCheck,
    QdilogCheck,
    PoleDomain,
}

impl SweepMode {
    pub const ALL: [SweepMode; 6] = [
        SweepMode::Exact,
        SweepMode::Asymptotic,
        SweepMode::Both,
        SweepMode::ResidueCheck,
        SweepMode::QdilogCheck,
        SweepMode::PoleDomain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepMode::Exact => "exact",
            SweepMode::Asymptotic => "asymptotic",
            SweepMode::Both => "both",
            SweepMode::ResidueCheck => "residue-check",
            SweepMode::QdilogCheck => "qdilog-check",
            SweepMode::PoleDomain => "pole-domain",
        }
    }

    fn needs_calibration(self) -> bool {
        matches!(self, SweepMode::Asymptotic | SweepMode::Both)
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown mode '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(rename = "N_list")]
    pub big_n_list: Vec<u32>,
    pub n_list: Vec<u32>,
    pub u_list: Vec<f64>,
    pub mode: SweepMode,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.big_n_list.is_empty() || self.n_list.is_empty() || self.u_list.is_empty() {
            return Err(Error::InvalidParams("N, n and u lists must be nonempty".into()));
        }
        if let Some(big_n) = self.big_n_list.iter().find(|&&v| v == 0) {
            return Err(Error::InvalidParams(format!("N = {big_n} must be positive")));
        }
        if let Some(n) = self.n_list.iter().find(|&&n| n < 2 || n % 2 != 0) {
            return Err(Error::InvalidParams(format!("n = {n} must be even and at least 2")));
        }
        if let Some(u) = self.u_list.iter().find(|u| !(u.is_finite() && (0.0..U_MAX).contains(*u))) {
            return Err(Error::InvalidParams(format!("u = {u} must lie in [0, {U_MAX})")));
        }
        Ok(())
    }

    /// Points in `(n, u, N)` lexicographic order, duplicates removed.
    pub fn points(&self) -> Vec<(u32, f64, u32)> {
        let mut ns = self.n_list.clone();
        ns.sort_unstable();
        ns.dedup();
        let mut us = self.u_list.clone();
        us.sort_by(f64::total_cmp);
        us.dedup();
        let mut bigs = self.big_n_list.clone();
        bigs.sort_unstable();
        bigs.dedup();
        let mut out = Vec::with_capacity(ns.len() * us.len() * bigs.len());
        for &n in &ns {
            for &u in &us {
                out.extend(bigs.iter().map(|&big_n| (n, u, big_n)));
            }
        }
        out
    }
}

/// Poles of `tan((N+a) pi z)` inside the domain of the shifted integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleCount {
    pub a: u32,
    pub total: u32,
    pub inside: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: u32,
    pub u: f64,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub exact_logmag: Option<f64>,
    pub exact_phase: Option<f64>,
    pub rhs_logmag: Option<f64>,
    pub rhs_phase: Option<f64>,
    pub ratio_mag: Option<f64>,
    pub ratio_phase: Option<f64>,
    pub growth_exact: Option<f64>,
    pub growth_predicted: Option<f64>,
    pub walltime_s: f64,
    #[serde(default)]
    pub poles: Option<Vec<PoleCount>>,
    #[serde(default)]
    pub error: Option<String>,
}

impl ReportRow {
    fn empty(n: u32, u: f64, big_n: u32) -> Self {
        Self {
            n,
            u,
            big_n,
            exact_logmag: None,
            exact_phase: None,
            rhs_logmag: None,
            rhs_phase: None,
            ratio_mag: None,
            ratio_phase: None,
            growth_exact: None,
            growth_predicted: None,
            walltime_s: 0.0,
            poles: None,
            error: None,
        }
    }

    fn set_exact(&mut self, v: &LogComplex) {
        self.exact_logmag = Some(v.log_abs);
        self.exact_phase = Some(v.arg);
        self.growth_exact = Some(v.log_abs / self.big_n as f64);
    }

    fn set_rhs(&mut self, v: &LogComplex) {
        self.rhs_logmag = Some(v.log_abs);
        self.rhs_phase = Some(v.arg);
    }

    fn set_ratio(&mut self) {
        if let (Some(el), Some(ep), Some(rl), Some(rp)) = (self.exact_logmag, self.exact_phase, self.rhs_logmag, self.rhs_phase) {
            let r = LogComplex::new(el, ep).div(&LogComplex::new(rl, rp));
            self.ratio_mag = Some(r.abs());
            self.ratio_phase = Some(r.arg);
        }
    }

    /// Copy with the wall time zeroed, for byte-reproducible output.
    pub fn without_timing(&self) -> Self {
        Self { walltime_s: 0.0, ..self.clone() }
    }
}

/// Replacement `(abs_tol, rel_tol)` for the quantum dilogarithm quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl FromStr for Tolerances {
    type Err = Error;

    /// `abs,rel` or a single value used for both.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("tolerances '{s}' must be 'abs,rel' or one positive number"));
        let vals = s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        let t = match vals[..] {
            [v] => Tolerances { abs: v, rel: v },
            [abs, rel] => Tolerances { abs, rel },
            _ => return Err(bad()),
        };
        if t.abs > 0.0 && t.rel > 0.0 && t.abs.is_finite() && t.rel.is_finite() {
            Ok(t)
        } else {
            Err(bad())
        }
    }
}

fn quadrature_for(params: &ModelParams, tolerances: Option<Tolerances>) -> QuadratureConfig {
    let cfg = qdilog_config(params);
    match tolerances {
        Some(t) => cfg.with_tolerances(t.abs, t.rel),
        None => cfg,
    }
}

fn evaluate_row(row: &mut ReportRow, mode: SweepMode, calibration: &Result<PhaseCalibration>, tolerances: Option<Tolerances>) -> Result<()> {
    let params = ModelParams::new(row.big_n, row.n, row.u)?;
    match mode {
        SweepMode::Exact => row.set_exact(&homfly_exact(&params)?.value),
        SweepMode::Asymptotic | SweepMode::Both => {
            if mode == SweepMode::Both {
                row.set_exact(&homfly_exact(&params)?.value);
            }
            let calibration = calibration.as_ref().map_err(Clone::clone)?;
            row.growth_predicted = Some(growth_rate(params.u)? * params.level_f64() / params.big_n as f64);
            row.set_rhs(&calibration.apply(&rhs_theorem_main(&params)?));
            row.set_ratio();
        }
        SweepMode::ResidueCheck => {
            let check = residue_reconstruction(&params, &quadrature_for(&params, tolerances))?;
            row.set_exact(&LogComplex::from_complex(check.exact));
            row.set_rhs(&LogComplex::from_complex(check.reconstructed));
            row.set_ratio();
        }
        SweepMode::QdilogCheck => {
            row.set_exact(&homfly_exact(&params)?.value);
            row.set_rhs(&LogComplex::from_complex(homfly_qdilog_form(&params, &quadrature_for(&params, tolerances))?));
            row.set_ratio();
        }
        SweepMode::PoleDomain => {
            let counts = (0..=row.n - 2).map(|a| pole_domain_check(row.big_n, row.n, a, row.u)).collect::<Result<Vec<_>>>()?;
            row.poles = Some(counts);
        }
    }
    Ok(())
}

/// Evaluates every point of `spec` on at most `jobs` threads.
///
/// A failing point is reported in its row's `error` field; only an invalid
/// spec aborts the sweep.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<Vec<ReportRow>> {
    run_sweep_with(spec, jobs, None)
}

/// `run_sweep` with the quadrature tolerances of the check modes replaced.
pub fn run_sweep_with(spec: &SweepSpec, jobs: usize, tolerances: Option<Tolerances>) -> Result<Vec<ReportRow>> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let calibration = if spec.mode.needs_calibration() {
        log::info!("calibrating the asymptotic phase");
        PhaseCalibration::calibrate()
    } else {
        Ok(PhaseCalibration::identity())
    };
    let points = spec.points();
    let rows = pool.install(|| {
        points
            .par_iter()
            .map(|&(n, u, big_n)| {
                let start = Instant::now();
                let mut row = ReportRow::empty(n, u, big_n);
                if let Err(e) = evaluate_row(&mut row, spec.mode, &calibration, tolerances) {
                    log::warn!("N={big_n} n={n} u={u}: {e}");
                    row.error = Some(e.to_string());
                }
                row.walltime_s = start.elapsed().as_secs_f64();
                log::debug!("N={big_n} n={n} u={u} done in {:.3}s", row.walltime_s);
                row
            })
            .collect()
    });
    Ok(rows)
}

/// `2 pi log|J_N(e^{2 pi i/(N+n-2)})| / N` at `N = n_max`.
pub fn volume_evidence(n: u32, n_max: u32) -> Result<f64> {
    if n_max < 50 {
        return Err(Error::InvalidArgument(format!("N_max = {n_max} must be at least 50")));
    }
    let p = ModelParams::new(n_max, n, 0.0)?;
    Ok(2.0 * std::f64::consts::PI * homfly_exact(&p)?.value.log_abs / n_max as f64)
}

/// Counts the poles `(2k+1)/(2(N+a))`, `k < N`, lying in all four strips of the
/// domain at level `N+a`, margins `Re(gamma)/u` included.
///
/// On the real axis, multiplying the strip with offset `c/(N+a)` by
/// `u(N+a)/pi` leaves `-(2k+1) - 2c - 1 < 0 < 2(N+a) - (2k+1) - 2c + 1`,
/// which is evaluated in integers.
pub fn pole_domain_check(big_n: u32, n: u32, a: u32, u: f64) -> Result<PoleCount> {
    if u == 0.0 {
        return Err(Error::UndefinedDomain);
    }
    if !(u > 0.0 && u < U_MAX) {
        return Err(Error::OutsideRange(u));
    }
    if big_n == 0 || n < 2 || n % 2 != 0 {
        return Err(Error::InvalidParams(format!("N = {big_n}, n = {n}")));
    }
    if a > n - 2 {
        return Err(Error::InvalidArgument(format!("a = {a} exceeds n - 2 = {}", n - 2)));
    }
    let level = i64::from(big_n) + i64::from(a);
    let offsets = [i64::from(a), 0, i64::from(n - 2 - a), i64::from(n - 2)];
    let inside = (0..i64::from(big_n))
        .filter(|&k| {
            offsets.iter().all(|&c| {
                let lower = -(2 * k + 1) - 2 * c - 1;
                let upper = 2 * level - (2 * k + 1) - 2 * c + 1;
                lower < 0 && 0 < upper
            })
        })
        .count() as u32;
    Ok(PoleCount { a, total: big_n, inside })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format '{s}'"))),
        }
    }
}

pub const CSV_COLUMNS: [&str; 12] = [
    "n",
    "u",
    "N",
    "exact_logmag",
    "exact_phase",
    "rhs_logmag",
    "rhs_phase",
    "ratio_mag",
    "ratio_phase",
    "growth_exact",
    "growth_predicted",
    "walltime_s",
];

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            fmt_float(r.u),
            r.big_n.to_string(),
            fmt_opt(r.exact_logmag),
            fmt_opt(r.exact_phase),
            fmt_opt(r.rhs_logmag),
            fmt_opt(r.rhs_phase),
            fmt_opt(r.ratio_mag),
            fmt_opt(r.ratio_phase),
            fmt_opt(r.growth_exact),
            fmt_opt(r.growth_predicted),
            fmt_float(r.walltime_s),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[ReportRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

pub fn write_rows<W: Write>(rows: &[ReportRow], format: ExportFormat, out: W) -> Result<()> {
    match format {
        ExportFormat::Csv => write_csv(rows, out),
        ExportFormat::Json => write_json(rows, out),
    }
}

/// Writes `rows` to `path`; I/O failures name the path.
pub fn export(rows: &[ReportRow], format: ExportFormat, path: &Path) -> Result<()> {
    let with_path = |e: Error| Error::Io(format!("{}: {e}", path.display()));
    let file = File::create(path).map_err(|e| with_path(e.into()))?;
    let mut out = BufWriter::new(file);
    write_rows(rows, format, &mut out).map_err(with_path)?;
    out.flush().map_err(|e| with_path(e.into()))
}

pub fn read_json(path: &Path) -> Result<Vec<ReportRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
