//! `nomaq` — command-line pipeline for amplitude-damping coherence dynamics:
//! survival-probability curves, coherence traces, the non-Markovianity
//! quantifier N_C, α sweeps, a virtual optical experiment, and tomography
//! reconstruction. Outputs are plot-ready CSV/JSON files.
//!
//! Exit codes: 0 success, 2 usage or validation error, 1 internal error.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "nomaq",
    version,
    about = "Amplitude-damping coherence dynamics and non-Markovianity toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Survival probability p over a time window
    Pt {
        /// Coupling ratio α = 2γ/Γ
        #[arg(long)]
        alpha: f64,
        /// Qubit decay rate Γ (pure time scale)
        #[arg(long, default_value_t = 1.0)]
        gamma_rate: f64,
        /// Window end in units of Γt (default: regime window)
        #[arg(long)]
        tau_max: Option<f64>,
        /// Number of grid steps
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Coherence trace C(t) for an initial state
    Coherence {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma_rate: f64,
        /// Initial state as a Bloch vector x,y,z
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        state: Option<Vec<f64>>,
        #[arg(long)]
        tau_max: Option<f64>,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        /// Revivals covered by the default window (α > 1)
        #[arg(long)]
        revivals: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Non-Markovianity N_C for one α
    Nc {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma_rate: f64,
        /// analytic | partial[:k] | numeric
        #[arg(long, default_value = "analytic")]
        mode: String,
        /// Revival count for partial sums and numeric windows
        #[arg(long)]
        revivals: Option<u32>,
        /// Numeric window end in units of Γt
        #[arg(long)]
        tau_max: Option<f64>,
        /// Numeric grid steps (default: accuracy-targeted)
        #[arg(long)]
        steps: Option<usize>,
        /// Initial state for numeric mode, Bloch vector x,y,z
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        state: Option<Vec<f64>>,
        /// Maximize numeric N_C over initial states
        #[arg(long)]
        maximize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// N_C table over a range of α
    Sweep {
        #[arg(long)]
        alpha_min: f64,
        #[arg(long)]
        alpha_max: f64,
        #[arg(long)]
        points: usize,
        /// linear | log
        #[arg(long, default_value = "linear")]
        scale: String,
        /// Revivals per numeric window (α > 1)
        #[arg(long, default_value_t = 5)]
        revivals: u32,
        #[arg(long, default_value_t = 1.0)]
        gamma_rate: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Virtual bench run: sample times, tomography, reconstruction
    Experiment {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma_rate: f64,
        /// Number of sample times across the window
        #[arg(long, default_value_t = 2000)]
        n_times: usize,
        #[arg(long)]
        revivals: Option<u32>,
        #[arg(long)]
        tau_max: Option<f64>,
        /// Interferometer visibility in [0, 1]
        #[arg(long, default_value_t = 0.98)]
        visibility: f64,
        /// Per-port intensity noise (relative to total intensity)
        #[arg(long, default_value_t = 0.015)]
        sigma: f64,
        /// Base RNG seed; row i uses seed + i
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Row output path (report goes to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Reconstruct a density matrix from a tomography record file
    Tomo {
        /// Record file, JSON object or CSV row
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = commands::init_threads().and_then(|_| match cli.command {
        Command::Pt { alpha, gamma_rate, tau_max, steps, out, format } => {
            commands::cmd_pt(alpha, gamma_rate, tau_max, steps, out, format)
        }
        Command::Coherence {
            alpha,
            gamma_rate,
            state,
            tau_max,
            steps,
            revivals,
            out,
            format,
        } => commands::cmd_coherence(
            alpha, gamma_rate, state, tau_max, steps, revivals, out, format,
        ),
        Command::Nc {
            alpha,
            gamma_rate,
            mode,
            revivals,
            tau_max,
            steps,
            state,
            maximize,
            out,
            format,
        } => commands::cmd_nc(
            alpha, gamma_rate, &mode, revivals, tau_max, steps, state, maximize, out, format,
        ),
        Command::Sweep {
            alpha_min,
            alpha_max,
            points,
            scale,
            revivals,
            gamma_rate,
            out,
            format,
        } => commands::cmd_sweep(
            alpha_min, alpha_max, points, &scale, revivals, gamma_rate, out, format,
        ),
        Command::Experiment {
            alpha,
            gamma_rate,
            n_times,
            revivals,
            tau_max,
            visibility,
            sigma,
            seed,
            out,
            format,
        } => commands::cmd_experiment(
            alpha, gamma_rate, n_times, revivals, tau_max, visibility, sigma, seed, out, format,
        ),
        Command::Tomo { input, out } => commands::cmd_tomo(&input, out),
    });

    if let Err(e) = result {
        match e {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                std::process::exit(2);
            }
            CliError::Internal(msg) => {
                eprintln!("internal error: {msg}");
                std::process::exit(1);
            }
        }
    }
}
