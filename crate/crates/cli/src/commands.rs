//! Subcommand implementations and output plumbing.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use nomaq_core::channel::{apply_channel, survival_p_tau, ChannelParams};
use nomaq_core::coherence::{coherence, trace_coherence};
use nomaq_core::nonmarkov::{
    count_revivals, decay_window_tau, nc_analytic, nc_maximize, nc_numeric, nc_partial,
    positive_increment_sum, recommended_steps, sweep_point, window_for_revivals, write_sweep_csv,
    NonMarkovianity, REVIVAL_PROMINENCE,
};
use nomaq_core::optics::{measure_tomography, run_bench, theta_from_p, BenchConfig};
use nomaq_core::qubit::{from_bloch, BlochVector, DensityMatrix};
use nomaq_core::tomography::{reconstruct, TomographyRecord};

use crate::OutputFormat;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or input data: exit code 2.
    Usage(String),
    /// Bug or I/O failure: exit code 1.
    Internal(String),
}

impl From<nomaq_core::Error> for CliError {
    fn from(e: nomaq_core::Error) -> Self {
        if e.is_validation() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

/// Honor `NOMAQ_THREADS` (0 or unset = automatic) before any parallel work.
pub fn init_threads() -> CliResult {
    if let Ok(raw) = std::env::var("NOMAQ_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("NOMAQ_THREADS must be a non-negative integer, got {raw:?}")))?;
        if n > 0 {
            // a second initialization (tests) keeps the existing pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    Ok(())
}

fn write_output(out: &Option<PathBuf>, content: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print_stdout(content)?,
    }
    Ok(())
}

/// Write to stdout, treating a closed pipe (e.g. `| head`) as success.
fn print_stdout(content: &str) -> CliResult {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match lock.write_all(content.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn parse_state(state: Option<Vec<f64>>) -> Result<DensityMatrix, CliError> {
    match state {
        None => Ok(DensityMatrix::plus()),
        Some(v) => {
            if v.len() != 3 {
                return Err(CliError::Usage(format!(
                    "--state needs exactly 3 components, got {}",
                    v.len()
                )));
            }
            let b = BlochVector::new(v[0], v[1], v[2])?;
            Ok(from_bloch(&b)?)
        }
    }
}

/// Default per-regime window: k complete revivals for α > 1 (k = 5, or 3
/// deep in the strong-coupling regime), the decay window for α <= 1.
fn default_window(alpha: f64, revivals: Option<u32>) -> Result<(f64, u32), CliError> {
    if alpha > 1.0 {
        let k = revivals.unwrap_or(if alpha > 100.0 { 3 } else { 5 });
        if k == 0 {
            return Err(CliError::Usage("--revivals must be at least 1".into()));
        }
        Ok((window_for_revivals(alpha, k)?, k))
    } else {
        Ok((decay_window_tau(alpha)?, 0))
    }
}

pub fn cmd_pt(
    alpha: f64,
    gamma_rate: f64,
    tau_max: Option<f64>,
    steps: usize,
    out: Option<PathBuf>,
    format: OutputFormat,
) -> CliResult {
    let params = ChannelParams::new(alpha, gamma_rate)?;
    let window = match tau_max {
        Some(t) => t,
        None => default_window(alpha, None)?.0,
    };
    if !window.is_finite() || window <= 0.0 {
        return Err(CliError::Usage(format!("--tau-max must be positive, got {window}")));
    }
    if !(2..=20_000_000).contains(&steps) {
        return Err(CliError::Usage(format!("--steps must be in [2, 2e7], got {steps}")));
    }

    #[derive(Serialize)]
    struct Row {
        gamma_t: f64,
        #[serde(rename = "Gamma_t")]
        big_gamma_t: f64,
        p: f64,
    }
    let mut rows = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let tau = window * k as f64 / steps as f64;
        let p = survival_p_tau(alpha, tau)?.value();
        rows.push(Row { gamma_t: params.gamma_t(tau), big_gamma_t: tau, p });
    }

    let content = match format {
        OutputFormat::Csv => {
            let mut s = String::from("gamma_t,Gamma_t,p\n");
            for r in &rows {
                let _ = writeln!(s, "{:.16e},{:.16e},{:.16e}", r.gamma_t, r.big_gamma_t, r.p);
            }
            s
        }
        OutputFormat::Json => serde_json::to_string_pretty(&rows)? + "\n",
    };
    write_output(&out, &content)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_coherence(
    alpha: f64,
    gamma_rate: f64,
    state: Option<Vec<f64>>,
    tau_max: Option<f64>,
    steps: usize,
    revivals: Option<u32>,
    out: Option<PathBuf>,
    format: OutputFormat,
) -> CliResult {
    let params = ChannelParams::new(alpha, gamma_rate)?;
    let rho0 = parse_state(state)?;
    let window = match tau_max {
        Some(t) => t,
        None => default_window(alpha, revivals)?.0,
    };
    let trace = trace_coherence(&params, &rho0, window, steps)?;

    let content = match format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            trace.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("CSV output is UTF-8")
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                gamma_t: f64,
                #[serde(rename = "Gamma_t")]
                big_gamma_t: f64,
                coherence: f64,
            }
            let rows: Vec<Row> = trace
                .points()
                .iter()
                .map(|p| Row {
                    gamma_t: params.gamma_t(p.tau),
                    big_gamma_t: p.tau,
                    coherence: p.coherence,
                })
                .collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
    };
    write_output(&out, &content)
}

#[derive(Serialize)]
struct NcReport {
    #[serde(flatten)]
    nc: NonMarkovianity,
    #[serde(skip_serializing_if = "Option::is_none")]
    argmax: Option<BlochVector>,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_nc(
    alpha: f64,
    gamma_rate: f64,
    mode: &str,
    revivals: Option<u32>,
    tau_max: Option<f64>,
    steps: Option<usize>,
    state: Option<Vec<f64>>,
    maximize: bool,
    out: Option<PathBuf>,
    format: OutputFormat,
) -> CliResult {
    let params = ChannelParams::new(alpha, gamma_rate)?;

    // `partial:3` is shorthand for `--mode partial --revivals 3`
    let (mode_name, mode_k) = match mode.split_once(':') {
        Some((name, k)) => {
            let k: u32 = k
                .parse()
                .map_err(|_| CliError::Usage(format!("bad revival count in --mode {mode:?}")))?;
            (name, Some(k))
        }
        None => (mode, None),
    };

    if mode_name != "analytic" && alpha <= 1.0 {
        return Err(CliError::Usage("no revivals in Markovian regime".into()));
    }

    let report = match mode_name {
        "analytic" => NcReport { nc: nc_analytic(alpha)?, argmax: None },
        "partial" => {
            let k = mode_k.or(revivals).unwrap_or(5);
            NcReport { nc: nc_partial(alpha, k)?, argmax: None }
        }
        "numeric" => {
            let window = match tau_max {
                Some(t) => t,
                None => default_window(alpha, mode_k.or(revivals))?.0,
            };
            let n_steps = match steps {
                Some(n) => n,
                None => recommended_steps(alpha, window)?,
            };
            if maximize {
                let max = nc_maximize(&params, window, n_steps, 16)?;
                NcReport { nc: max.nc, argmax: Some(max.argmax) }
            } else {
                let rho0 = parse_state(state)?;
                NcReport { nc: nc_numeric(&params, &rho0, window, n_steps)?, argmax: None }
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown mode {other:?}; expected analytic, partial[:k], or numeric"
            )))
        }
    };

    let content = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
        OutputFormat::Csv => format!(
            "alpha,value,method\n{:.16e},{:.16e},{}\n",
            report.nc.alpha, report.nc.value, report.nc.method
        ),
    };
    write_output(&out, &content)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_sweep(
    alpha_min: f64,
    alpha_max: f64,
    points: usize,
    scale: &str,
    revivals: u32,
    gamma_rate: f64,
    out: Option<PathBuf>,
    format: OutputFormat,
) -> CliResult {
    if !alpha_min.is_finite() || alpha_min < 0.0 {
        return Err(CliError::Usage(format!("--alpha-min must be >= 0, got {alpha_min}")));
    }
    if !alpha_max.is_finite() || alpha_max < alpha_min {
        return Err(CliError::Usage(format!(
            "--alpha-max must be >= --alpha-min, got {alpha_max} < {alpha_min}"
        )));
    }
    if points == 0 || points > 100_000 {
        return Err(CliError::Usage(format!("--points must be in [1, 1e5], got {points}")));
    }
    if revivals == 0 {
        return Err(CliError::Usage("--revivals must be at least 1".into()));
    }

    let alphas: Vec<f64> = if points == 1 {
        vec![alpha_min]
    } else {
        match scale {
            "linear" => (0..points)
                .map(|i| alpha_min + (alpha_max - alpha_min) * i as f64 / (points - 1) as f64)
                .collect(),
            "log" => {
                if alpha_min <= 0.0 {
                    return Err(CliError::Usage(
                        "log scale requires --alpha-min > 0".into(),
                    ));
                }
                let (lo, hi) = (alpha_min.ln(), alpha_max.ln());
                (0..points)
                    .map(|i| (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp())
                    .collect()
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown scale {other:?}; expected linear or log"
                )))
            }
        }
    };

    let rows = alphas
        .par_iter()
        .map(|&alpha| {
            let params = ChannelParams::new(alpha, gamma_rate)?;
            sweep_point(&params, revivals)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let content = match format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&rows, &mut buf)?;
            String::from_utf8(buf).expect("CSV output is UTF-8")
        }
        OutputFormat::Json => serde_json::to_string_pretty(&rows)? + "\n",
    };
    write_output(&out, &content)
}

#[derive(Serialize)]
struct ExperimentRow {
    gamma_t: f64,
    theta_deg: f64,
    #[serde(rename = "C_reconstructed")]
    c_reconstructed: f64,
    #[serde(rename = "C_exact")]
    c_exact: f64,
}

#[derive(Serialize)]
struct ExperimentReport {
    alpha: f64,
    gamma_rate: f64,
    n_times: usize,
    window_gamma_t: f64,
    #[serde(rename = "window_Gamma_t")]
    window_tau: f64,
    visibility: f64,
    sigma: f64,
    seed: u64,
    revivals_detected: usize,
    nc_exact_trace: f64,
    nc_reconstructed_trace: f64,
    c0_reconstructed: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_experiment(
    alpha: f64,
    gamma_rate: f64,
    n_times: usize,
    revivals: Option<u32>,
    tau_max: Option<f64>,
    visibility: f64,
    sigma: f64,
    seed: u64,
    out: Option<PathBuf>,
    format: OutputFormat,
) -> CliResult {
    let params = ChannelParams::new(alpha, gamma_rate)?;
    // validate the noise settings once up front
    BenchConfig::new(0.0, 0.0, visibility, sigma, seed)?;
    if !(2..=1_000_000).contains(&n_times) {
        return Err(CliError::Usage(format!("--n-times must be in [2, 1e6], got {n_times}")));
    }
    let window = match tau_max {
        Some(t) => t,
        None => default_window(alpha, revivals)?.0,
    };
    if !window.is_finite() || window <= 0.0 {
        return Err(CliError::Usage(format!("--tau-max must be positive, got {window}")));
    }

    let rows = (0..n_times)
        .into_par_iter()
        .map(|i| -> Result<ExperimentRow, CliError> {
            let tau = window * i as f64 / (n_times - 1) as f64;
            let p = survival_p_tau(alpha, tau)?;
            let theta = theta_from_p(p);
            let config =
                BenchConfig::new(theta, 0.0, visibility, sigma, seed.wrapping_add(i as u64))?;
            let record = measure_tomography(&run_bench(&config), &config);
            let c_rec = reconstruct(&record)?.coherence;
            let c_exact = coherence(&apply_channel(&DensityMatrix::plus(), p)).value();
            Ok(ExperimentRow {
                gamma_t: params.gamma_t(tau),
                theta_deg: theta.to_degrees(),
                c_reconstructed: c_rec,
                c_exact,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let reconstructed: Vec<f64> = rows.iter().map(|r| r.c_reconstructed).collect();
    let exact: Vec<f64> = rows.iter().map(|r| r.c_exact).collect();
    let report = ExperimentReport {
        alpha,
        gamma_rate,
        n_times,
        window_gamma_t: params.gamma_t(window),
        window_tau: window,
        visibility,
        sigma,
        seed,
        revivals_detected: count_revivals(&reconstructed, REVIVAL_PROMINENCE),
        nc_exact_trace: positive_increment_sum(&exact),
        nc_reconstructed_trace: positive_increment_sum(&reconstructed),
        c0_reconstructed: reconstructed[0],
    };

    match format {
        OutputFormat::Csv => {
            let mut s = String::from("gamma_t,theta_deg,C_reconstructed,C_exact\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:.16e},{:.16e},{:.16e},{:.16e}",
                    r.gamma_t, r.theta_deg, r.c_reconstructed, r.c_exact
                );
            }
            let report_json = serde_json::to_string_pretty(&report)? + "\n";
            match &out {
                Some(path) => {
                    fs::write(path, s)?;
                    print_stdout(&report_json)?;
                }
                None => {
                    // rows on stdout, report on stderr to keep the CSV clean
                    print_stdout(&s)?;
                    eprint!("{report_json}");
                }
            }
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Full {
                report: ExperimentReport,
                rows: Vec<ExperimentRow>,
            }
            let content = serde_json::to_string_pretty(&Full { report, rows })? + "\n";
            write_output(&out, &content)?;
        }
    }
    Ok(())
}

pub fn cmd_tomo(input: &Path, out: Option<PathBuf>) -> CliResult {
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", input.display())))?;
    let record = parse_record(&text)?;
    let result = reconstruct(&record)?;
    let content = serde_json::to_string_pretty(&result)? + "\n";
    write_output(&out, &content)
}

/// Accept either a JSON record object or CSV (header optional, first data
/// row taken).
fn parse_record(text: &str) -> Result<TomographyRecord, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return Ok(TomographyRecord::from_json(text)?);
    }
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("theta_deg") {
            continue;
        }
        return Ok(TomographyRecord::from_csv_row(line)?);
    }
    Err(CliError::Usage("no tomography record found in input".into()))
}
