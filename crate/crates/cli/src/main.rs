use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qflag::commands::MkOptions;
use qflag::{cmd_approx, cmd_mk, cmd_reduce, cmd_verify, CliError, Mode, RunConfig};

#[derive(Parser)]
#[command(name = "qflag", version, about = "Symbolic and metric computations on quantum flag manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Rank of SU_q(N).
    #[arg(short = 'N', default_value_t = 2)]
    n: usize,
    /// Deformation parameter, as a decimal or a fraction.
    #[arg(long, default_value = "0.5")]
    q: String,
    /// Truncation level of the quantized interval.
    #[arg(short = 'T', default_value_t = 60)]
    t: usize,
    /// Completion degree bound (default 8).
    #[arg(long)]
    bound: Option<usize>,
    /// Arithmetic: exact or float. QFLAG_MODE takes precedence.
    #[arg(long, default_value = "float")]
    mode: String,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random corpora.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of an expression.
    Reduce {
        #[command(flatten)]
        common: Common,
        expr: String,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: String,
    },
    /// Distances from h_k and the counit to the counit, as CSV.
    Mk {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "h0,h1,h2,h3,h4,h5,h6,eps")]
        states: String,
        #[arg(long)]
        assert_monotone: bool,
        #[arg(long)]
        assert_envelope: bool,
        /// Rank of the base measure on the interval.
        #[arg(long, default_value_t = 1)]
        ell: usize,
        /// JSON array of moments for the base measure, as strings or numbers.
        #[arg(long)]
        moments: Option<PathBuf>,
    },
    /// Approximation errors of the map Psi, as CSV.
    Approx {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        level: usize,
        /// Number of random functions besides the constant and the identity.
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn config(c: &Common) -> Result<RunConfig, CliError> {
    let mode = std::env::var("QFLAG_MODE").unwrap_or_else(|_| c.mode.clone());
    Ok(RunConfig { n: c.n, q: c.q.clone(), t: c.t, bound: c.bound, mode: mode.parse::<Mode>()?, seed: c.seed })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{}", text),
    }
    Ok(())
}

fn read_moments(path: &PathBuf) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("moments file: {}", e)))?;
    let items = value.as_array().ok_or_else(|| CliError::Usage("moments file must hold a JSON array".into()))?;
    items
        .iter()
        .map(|v| match v {
            serde_json::Value::String(s) => Ok(s.clone()),
            serde_json::Value::Number(n) => Ok(n.to_string()),
            other => Err(CliError::Usage(format!("bad moment {}", other))),
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Reduce { common, expr } => {
            let cfg = config(&common)?;
            emit(&common.out, &format!("{}\n", cmd_reduce(&cfg, &expr)?))
        }
        Command::Verify { common, suite } => {
            let cfg = config(&common)?;
            let (json, report) = cmd_verify(&cfg, &suite)?;
            emit(&common.out, &format!("{}\n", serde_json::to_string_pretty(&json).expect("json prints")))?;
            let failed = report.failures().count();
            if failed > 0 {
                return Err(CliError::Verify(failed));
            }
            Ok(())
        }
        Command::Mk { common, states, assert_monotone, assert_envelope, ell, moments } => {
            let cfg = config(&common)?;
            let moments = moments.as_ref().map(read_moments).transpose()?;
            let opts = MkOptions { assert_monotone, assert_envelope, ell, moments };
            let out = cmd_mk(&cfg, &states, &opts)?;
            emit(&common.out, &out.csv)?;
            if !out.failures.is_empty() {
                return Err(CliError::Assertion(out.failures.join("; ")));
            }
            Ok(())
        }
        Command::Approx { common, level, count } => {
            let cfg = config(&common)?;
            let out = cmd_approx(&cfg, level, count)?;
            emit(&common.out, &out.csv)?;
            if out.violations > 0 {
                return Err(CliError::Assertion(format!("{} approximation bound(s) violated", out.violations)));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
