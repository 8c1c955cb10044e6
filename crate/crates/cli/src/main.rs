mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thue_core::solver::Mode;
use thue_core::{Config, Error};

/// Binary forms, Thue inequalities and their solution-count bounds.
#[derive(Parser, Debug)]
#[command(name = "thue", version)]
struct Cli {
    /// Emit JSON (sorted keys) instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Starting working precision in bits.
    #[arg(long, global = true, value_name = "BITS")]
    precision: Option<usize>,

    /// Treat unmet theorem preconditions as errors (exit 3) and refuse to shift forms with a₀ = 0.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree, discriminant, Mahler measure, height, irreducibility and root signature.
    Info {
        /// `x^3 - 2*y^3` or the coefficient list `1,0,0,-2`.
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Enumerate primitive solutions of |F(x,y)| ≤ m or |F(x,y)| = m with 0 ≤ y ≤ ymax.
    Solve {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value = "1")]
        m: String,
        #[arg(long, default_value = "ineq", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value_t = 100)]
        ymax: u64,
        /// Drop solutions with F(x, y) = 0.
        #[arg(long)]
        exclude_zero: bool,
        /// Emit CSV rows instead of text.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Evaluate every count bound and its preconditions.
    Bounds {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value = "1")]
        m: String,
        #[arg(long, default_value = "1/100")]
        epsilon: String,
        /// Which count theorem `--strict` requires and which ε range is enforced.
        #[arg(long, default_value = "ineq", value_parser = parse_mode)]
        mode: Mode,
        /// Parameter 0 < a < 1 of the Győry comparison row.
        #[arg(long, default_value = "1/2")]
        gyory_a: String,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Logarithmic-curve coordinates, decompositions, distances and triangle diagnostics.
    Logcurve {
        #[arg(allow_hyphen_values = true)]
        form: String,
        /// Points `x,y`; repeat the flag or separate with `;`.
        #[arg(long = "points", required = true, allow_hyphen_values = true, value_delimiter = ';')]
        points: Vec<String>,
        /// Right-hand side; defaults to the largest |F| over the points.
        #[arg(long)]
        m: Option<String>,
        /// Real root used for the triangle diagnostics; defaults to the first point's related root.
        #[arg(long)]
        root: Option<usize>,
        /// Scale constant C ≥ 1 of the gap diagnostics.
        #[arg(long, default_value = "1")]
        c: String,
    },
    /// The p + 1 forms F∘A_j covering all primitive pairs.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(short = 'p', long = "prime")]
        p: String,
    },
    /// Audit a corpus of forms against every invariant and applicable bound.
    Verify {
        /// JSON array of corpus entries; the shipped corpus when omitted.
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure classes mapped to process exit codes.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Precondition(String),
    Audit(usize),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(e) => match e {
                Error::NonConvergence { .. } | Error::UnresolvableBoundary { .. } => 4,
                Error::ThresholdNotMet(_) | Error::NotIrreducible => 3,
                _ => 2,
            },
            Failure::Precondition(_) => 3,
            Failure::Audit(_) | Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Precondition(s) => format!("precondition not met: {s}"),
            Failure::Audit(n) => format!("{n} check(s) failed"),
            Failure::Io(s) => s.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = Config::default();
    if let Some(bits) = cli.precision {
        cfg.precision = bits.max(32);
        cfg.max_precision = cfg.max_precision.max(cfg.precision);
    }
    let out = commands::Output { json: cli.json, strict: cli.strict };
    let result = match cli.command {
        Command::Info { form } => commands::info(&out, &cfg, &form),
        Command::Solve { form, m, mode, ymax, exclude_zero, csv } => {
            commands::solve(&out, &cfg, &form, &m, mode, ymax, exclude_zero, csv)
        }
        Command::Bounds { form, m, epsilon, mode, gyory_a, csv } => {
            commands::bounds(&out, &cfg, &form, &m, &epsilon, mode, &gyory_a, csv)
        }
        Command::Logcurve { form, points, m, root, c } => {
            commands::logcurve(&out, &cfg, &form, &points, m.as_deref(), root, &c)
        }
        Command::Reduce { form, p } => commands::reduce(&out, &cfg, &form, &p),
        Command::Verify { corpus, tolerance } => commands::verify(&out, &cfg, corpus.as_deref(), tolerance),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
