//! `fig8`: sweeps, volume evidence, pole counts and the acceptance checks.

mod lists;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fig8_core::harness::acceptance::{self, FIGURE_EIGHT_VOLUME};
use fig8_core::harness::{pole_domain_check, run_sweep_with, volume_evidence, write_rows, ExportFormat, ReportRow, SweepMode, SweepSpec, Tolerances};
use fig8_core::ModelParams;

use crate::lists::{parse_f64_list, parse_u32_list};

const EXIT_ROW_ERROR: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "fig8", version, about = "Colored SU(n) invariant of the figure-eight knot")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every (N, n, u) point and write one row per point.
    Sweep {
        /// Levels N: comma list and/or start:stop:step.
        #[arg(long = "N")]
        big_n: String,
        /// Ranks n (even).
        #[arg(long = "n", default_value = "2")]
        n: String,
        /// Deformations u in [0, 0.9624...).
        #[arg(long = "u", default_value = "0.5")]
        u: String,
        /// exact, asymptotic, both, residue-check, qdilog-check or pole-domain.
        #[arg(long, default_value = "both")]
        mode: String,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Quadrature tolerances "abs,rel" (or one value) for the check modes.
        #[arg(long)]
        tol_override: Option<String>,
        /// Worker threads.
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Write zero wall times so repeated runs are byte-identical.
        #[arg(long)]
        deterministic: bool,
    },
    /// 2 pi log|J_N| / N at the Kashaev-type point against the hyperbolic volume.
    Volume {
        /// Levels N (each at least 50).
        #[arg(long = "N", default_value = "100,200,500,1000,2000")]
        big_n: String,
        #[arg(long = "n", default_value = "2")]
        n: String,
    },
    /// Count the tan poles inside the integrand domain for every shift a = 0..n-2.
    Poles {
        #[arg(long = "N", default_value = "20,50")]
        big_n: String,
        #[arg(long = "n", default_value = "2,4,6")]
        n: String,
        #[arg(long = "u", default_value = "0.5")]
        u: String,
    },
    /// Run the acceptance criteria and print one PASS/FAIL line each.
    Verify,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Failure of the command line itself, as opposed to a failed computation.
#[derive(Debug)]
struct InvalidInput(anyhow::Error);

fn invalid<T>(r: Result<T>) -> std::result::Result<T, InvalidInput> {
    r.map_err(InvalidInput)
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    big_n: &str,
    n: &str,
    u: &str,
    mode: &str,
    out: &Option<PathBuf>,
    format: &str,
    tol_override: &Option<String>,
    jobs: usize,
    deterministic: bool,
) -> std::result::Result<Result<u8>, InvalidInput> {
    let spec = SweepSpec {
        big_n_list: invalid(parse_u32_list(big_n).context("--N"))?,
        n_list: invalid(parse_u32_list(n).context("--n"))?,
        u_list: invalid(parse_f64_list(u).context("--u"))?,
        mode: invalid(mode.parse::<SweepMode>().map_err(Into::into))?,
    };
    let format = invalid(format.parse::<ExportFormat>().map_err(Into::into))?;
    let tolerances = match tol_override {
        Some(t) => Some(invalid(t.parse::<Tolerances>().map_err(Into::into))?),
        None => None,
    };
    invalid(spec.validate().map_err(Into::into))?;
    Ok((|| {
        log::info!("sweeping {} points in mode {}", spec.points().len(), spec.mode);
        let mut rows = run_sweep_with(&spec, jobs, tolerances)?;
        if deterministic {
            rows = rows.iter().map(ReportRow::without_timing).collect();
        }
        let mut w = open_output(out)?;
        write_rows(&rows, format, &mut w)?;
        w.flush()?;
        let failed = rows.iter().filter(|r| r.error.is_some()).count();
        if failed > 0 {
            log::warn!("{failed} of {} rows failed", rows.len());
            return Ok(EXIT_ROW_ERROR);
        }
        Ok(0)
    })())
}

fn volume(big_n: &str, n: &str) -> std::result::Result<Result<u8>, InvalidInput> {
    let levels = invalid(parse_u32_list(big_n).context("--N"))?;
    let ranks = invalid(parse_u32_list(n).context("--n"))?;
    Ok((|| {
        let mut out = io::stdout().lock();
        writeln!(out, "n,N,value,relative_error")?;
        let mut status = 0;
        for &rank in &ranks {
            for &level in &levels {
                match volume_evidence(rank, level) {
                    Ok(v) => writeln!(out, "{rank},{level},{v:.16e},{:.16e}", v / FIGURE_EIGHT_VOLUME - 1.0)?,
                    Err(e) => {
                        log::error!("n={rank} N={level}: {e}");
                        writeln!(out, "{rank},{level},,")?;
                        status = EXIT_ROW_ERROR;
                    }
                }
            }
        }
        Ok(status)
    })())
}

fn poles(big_n: &str, n: &str, u: &str) -> std::result::Result<Result<u8>, InvalidInput> {
    let levels = invalid(parse_u32_list(big_n).context("--N"))?;
    let ranks = invalid(parse_u32_list(n).context("--n"))?;
    let us = invalid(parse_f64_list(u).context("--u"))?;
    for &level in &levels {
        for &rank in &ranks {
            for &u in &us {
                invalid(ModelParams::new(level, rank, u).map(drop).map_err(Into::into))?;
            }
        }
    }
    Ok((|| {
        let mut out = io::stdout().lock();
        writeln!(out, "n,u,N,a,total,inside")?;
        let mut status = 0;
        for &rank in &ranks {
            for &u in &us {
                for &level in &levels {
                    for a in 0..=rank - 2 {
                        match pole_domain_check(level, rank, a, u) {
                            Ok(c) => writeln!(out, "{rank},{u},{level},{a},{},{}", c.total, c.inside)?,
                            Err(e) => {
                                log::error!("n={rank} u={u} N={level} a={a}: {e}");
                                status = EXIT_ROW_ERROR;
                            }
                        }
                    }
                }
            }
        }
        Ok(status)
    })())
}

fn verify() -> Result<u8> {
    let mut failed = 0;
    for outcome in acceptance::run_all() {
        println!("{outcome}");
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    Ok(if failed == 0 { 0 } else { EXIT_ROW_ERROR })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep { big_n, n, u, mode, out, format, tol_override, jobs, deterministic } => {
            sweep(big_n, n, u, mode, out, format, tol_override, *jobs, *deterministic)
        }
        Command::Volume { big_n, n } => volume(big_n, n),
        Command::Poles { big_n, n, u } => poles(big_n, n, u),
        Command::Verify => Ok(verify()),
    };
    match result {
        Err(InvalidInput(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ROW_ERROR)
        }
        Ok(Ok(code)) => ExitCode::from(code),
    }
}
