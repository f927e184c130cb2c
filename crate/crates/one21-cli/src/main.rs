//! Command-line front end: single-network analysis, Monte-Carlo sweeps,
//! and schedule audits.

mod analyze;
mod audit;
mod mc;
mod theta;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Exit codes: 0 success, 1 usage, 2 parse/validation, 3 solver
/// failure, 4 audit violation.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Solver(String),
    AuditViolations,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Input(_) => 2,
            Self::Solver(_) => 3,
            Self::AuditViolations => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Input(m) => write!(f, "input error: {m}"),
            Self::Solver(m) => write!(f, "solver error: {m}"),
            Self::AuditViolations => write!(f, "audit found violations"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "one21",
    version,
    about = "Rate and schedule analysis for full-duplex 1-2-1 mmWave relay networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one network: capacities, bounds, disjoint paths,
    /// schedules, and secure-rate reductions.
    Analyze {
        /// Network JSON file.
        network: PathBuf,
        /// Global activation threshold (a number), or a JSON threshold
        /// file with {"default": f, "overrides": [{"tx", "rx", "theta"}]}.
        #[arg(long, default_value = "1.0")]
        theta: String,
        /// Target fraction of the capacity for the path-count check.
        #[arg(long = "theta-c", default_value_t = 1.0)]
        theta_c: f64,
        /// Override the network file's beam count.
        #[arg(long)]
        m: Option<usize>,
        /// Number of wiretapped links in the secure-rate reduction.
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format (json).
        #[arg(long, default_value = "json")]
        format: String,
        /// Dump the thresholded capacity LP in text form.
        #[arg(long = "dump-lp")]
        dump_lp: Option<PathBuf>,
    },
    /// Monte-Carlo sweep: one random topology, capacities redrawn per
    /// trial; emits per-trial records plus a summary.
    Montecarlo {
        #[arg(long = "n-relays", default_value_t = 10)]
        n_relays: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Uniform activation threshold.
        #[arg(long, default_value_t = 0.2)]
        theta: f64,
        #[arg(long = "cap-mean", default_value_t = 1.0)]
        cap_mean: f64,
        #[arg(long = "cap-var", default_value_t = 0.1)]
        cap_var: f64,
        /// Topology spec: layered[:layers[:edge_prob]], complete-dag,
        /// or parallel-paths:k.
        #[arg(long, default_value = "layered:2:0.5")]
        topology: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write trial records here (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record format (csv or json).
        #[arg(long, default_value = "csv")]
        format: String,
        /// Add per-trial wall time; timings vary, so the output is no
        /// longer byte-stable across runs.
        #[arg(long)]
        timing: bool,
        /// Write the JSON summary here (default: stderr, keeping the
        /// record stream clean).
        #[arg(long = "summary-out")]
        summary_out: Option<PathBuf>,
    },
    /// Replay a schedule dump against a network: beam limits, threshold
    /// compliance, and the supported rate.
    Audit {
        /// Schedule JSON file.
        schedule: PathBuf,
        /// Network JSON file.
        network: PathBuf,
        /// Global activation threshold or threshold file (as in analyze).
        #[arg(long, default_value = "1.0")]
        theta: String,
        /// Override the network file's beam count.
        #[arg(long)]
        m: Option<usize>,
        /// Write the audit report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_file(path: &PathBuf) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&PathBuf>, content: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(content)
                .map_err(|e| CliError::Input(format!("stdout: {e}")))
        }
    }
}

/// Rounds to nine significant digits so reports are stable and compact.
fn round9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("scientific form parses")
}

fn run() -> Result<(), CliError> {
    let cli = Cli::try_parse().map_err(|e| {
        // clap prints its own help/version output on these.
        if e.use_stderr() {
            CliError::Usage(e.to_string())
        } else {
            let _ = e.print();
            std::process::exit(0);
        }
    })?;
    match cli.command {
        Command::Analyze {
            network,
            theta,
            theta_c,
            m,
            k,
            out,
            format,
            dump_lp,
        } => analyze::run(
            &network, &theta, theta_c, m, k, out.as_ref(), &format, dump_lp.as_ref(),
        ),
        Command::Montecarlo {
            n_relays,
            trials,
            theta,
            cap_mean,
            cap_var,
            topology,
            seed,
            out,
            format,
            timing,
            summary_out,
        } => mc::run(
            n_relays,
            trials,
            theta,
            cap_mean,
            cap_var,
            &topology,
            seed,
            out.as_ref(),
            &format,
            timing,
            summary_out.as_ref(),
        ),
        Command::Audit {
            schedule,
            network,
            theta,
            m,
            out,
        } => audit::run(&schedule, &network, &theta, m, out.as_ref()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("one21: {e}");
            ExitCode::from(e.code())
        }
    }
}
