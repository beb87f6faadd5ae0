//! Thin command-line front end over the `faberlab` library: argument
//! parsing, output routing, and the exit-code contract. All computation
//! lives in [`faberlab::report`].

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use faberlab::report::{self, ConjectureKind, RunOutcome, DEFAULT_KS_THRESHOLD, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "faberlab",
    version,
    about = "Faber polynomials of Miller-basis modular forms: exact constants, root location, zero distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for scans (default: FABERLAB_JOBS or all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one Faber polynomial and validate its Miller prefix.
    Faber {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        m: i64,
    },
    /// Tabulate the exact constants A_n, B_n, C_n with oracle checks.
    Constants {
        #[arg(long, name = "n-max")]
        n_max: u32,
        /// Also run the quadrature cross-checks.
        #[arg(long)]
        quad: bool,
    },
    /// Verify the linear power-sum law exactly over a weight range.
    VerifyLinearity {
        #[arg(long, name = "l-min", default_value_t = 0)]
        l_min: u64,
        #[arg(long, name = "l-max")]
        l_max: u64,
        /// Restrict to one k' (default: all six).
        #[arg(long)]
        kprime: Option<u32>,
        /// Cap the exponent n (default: the full range per form).
        #[arg(long, name = "n-max")]
        n_max: Option<u32>,
        /// Corrupt one constant first (self-test of the harness).
        #[arg(long, hide = true)]
        corrupt_constants: bool,
    },
    /// Root-location reports over a weight range.
    ScanArc {
        #[arg(long, name = "l-min", default_value_t = 0)]
        l_min: u64,
        #[arg(long, name = "l-max")]
        l_max: u64,
        #[arg(long)]
        kprime: Option<u32>,
    },
    /// Scan the two conjectured root laws.
    Conjectures {
        /// Which scan to run.
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, name = "l-min", default_value_t = 1)]
        l_min: u64,
        #[arg(long, name = "l-max")]
        l_max: u64,
    },
    /// Zero-angle sample, KS distance against the limit law, and count
    /// brackets.
    Dist {
        #[arg(long)]
        k: i64,
        /// Basis index; exactly one of --m and --c is required.
        #[arg(long)]
        m: Option<i64>,
        /// Index ratio; picks m = round(c * ell).
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 8)]
        bins: usize,
        #[arg(long, name = "ks-threshold", default_value_t = DEFAULT_KS_THRESHOLD)]
        ks_threshold: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    MinM,
    NoLargeRoots,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Faber { k, m } => report::run_faber(k, m),
        Command::Constants { n_max, quad } => report::run_constants(n_max, quad),
        Command::VerifyLinearity { l_min, l_max, kprime, n_max, corrupt_constants } => {
            report::run_verify_linearity(l_min, l_max, kprime, n_max, cli.jobs, corrupt_constants)
        }
        Command::ScanArc { l_min, l_max, kprime } => {
            report::run_scan_arc(l_min, l_max, kprime, cli.jobs)
        }
        Command::Conjectures { which, l_min, l_max } => {
            let kind = match which {
                Which::MinM => ConjectureKind::MinM,
                Which::NoLargeRoots => ConjectureKind::NoLargeRoots,
            };
            report::run_conjectures(kind, l_min, l_max, cli.jobs)
        }
        Command::Dist { k, m, c, bins, ks_threshold } => {
            report::run_dist(k, m, c, bins, ks_threshold)
        }
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let rendered = render(&outcome, cli.format);
    match cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(rendered.as_bytes()).is_err() {
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
    }
    ExitCode::from(outcome.exit as u8)
}

fn render(outcome: &RunOutcome, format: Format) -> String {
    match format {
        Format::Json => outcome.envelope.to_json(),
        Format::Csv => outcome
            .csv
            .clone()
            .unwrap_or_else(|| report::render_text(&outcome.envelope)),
        Format::Text => report::render_text(&outcome.envelope),
    }
}
