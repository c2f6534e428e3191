use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pl2::toeplitz::{toeplitz_elementary, toeplitz_zeta};
use pl2::verify::{run_suite, Suite, VerifyConfig};
use pl2::{EvalParams, Execution};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Polylogarithm-weighted Hardy space toolkit.
#[derive(Parser)]
#[command(name = "pl2", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Li_s(z) with a certified truncation bound.
    Polylog(PolylogArgs),
    /// Print the matrix of a Toeplitz compression.
    Matrix(MatrixArgs),
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PolylogArgs {
    /// Order s, as "a", "a+bi" or "bi".
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Argument z with |z| < 1, same syntax as s.
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_terms: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    Zeta,
    Elementary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long, value_enum)]
    kind: MatrixKind,
    /// Power of z.
    #[arg(long)]
    k: usize,
    /// Dirichlet index, required for elementary symbols.
    #[arg(long)]
    m: Option<usize>,
    /// Number of domain columns.
    #[arg(long = "N", visible_alias = "n")]
    n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExecutionArg {
    Parallel,
    Sequential,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = ["isometry", "decomposition", "ranks", "dirichlet", "bounds"])]
    suite: String,
    /// Flat key = value file; PL2_* environment variables override it, flags override both.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    max_k: Option<usize>,
    #[arg(long)]
    max_nm: Option<usize>,
    #[arg(long)]
    product_max_nm: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum)]
    execution: Option<ExecutionArg>,
    /// Write the report to this file as well as stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_complex(name: &str, text: &str) -> Result<Complex64, String> {
    text.trim()
        .parse::<Complex64>()
        .map_err(|_| format!("cannot parse --{name} '{text}' as a complex number"))
}

fn format_complex(v: Complex64) -> String {
    if v.im < 0.0 {
        format!("{}-{}i", v.re, -v.im)
    } else {
        format!("{}+{}i", v.re, v.im)
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn polylog(args: &PolylogArgs) -> Result<ExitCode, String> {
    let s = parse_complex("s", &args.s)?;
    let z = parse_complex("z", &args.z)?;
    let params = EvalParams::new(args.tol, args.max_terms, EvalParams::default().quad_nodes)
        .map_err(|e| e.to_string())?;
    let out = pl2::specfun::polylog_certified(s, z, &params).map_err(|e| e.to_string())?;
    println!("value = {}", format_complex(out.value));
    println!("error_bound = {:e}", out.error_bound);
    println!("terms = {}", out.terms);
    Ok(ExitCode::SUCCESS)
}

fn matrix(args: &MatrixArgs) -> Result<ExitCode, String> {
    let op = match args.kind {
        MatrixKind::Zeta => {
            if args.m.is_some() {
                return Err("--m applies only to --kind elementary".into());
            }
            toeplitz_zeta(args.k, args.n)
        }
        MatrixKind::Elementary => {
            let m = args.m.ok_or("--kind elementary needs --m")?;
            toeplitz_elementary(args.k, m, args.n)
        }
    }
    .map_err(|e| e.to_string())?;
    let text = match args.format {
        Format::Csv => op.to_csv(),
        Format::Json => op.to_json().map(|j| j + "\n"),
    }
    .map_err(|e| e.to_string())?;
    emit(&text, args.output.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn verify_config(args: &VerifyArgs) -> Result<VerifyConfig, String> {
    let mut cfg = VerifyConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.apply_text(&text)
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    cfg.apply_env(|var| std::env::var(var).ok())
        .map_err(|e| e.to_string())?;
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if args.tol.is_some() {
        cfg.tol = args.tol;
    }
    if args.samples.is_some() {
        cfg.samples = args.samples;
    }
    if args.truncation.is_some() {
        cfg.truncation = args.truncation;
    }
    if let Some(v) = args.max_k {
        cfg.max_k = v;
    }
    if let Some(v) = args.max_nm {
        cfg.max_nm = v;
    }
    if let Some(v) = args.product_max_nm {
        cfg.product_max_nm = v;
    }
    if let Some(v) = args.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = args.execution {
        cfg.execution = match v {
            ExecutionArg::Parallel => Execution::Parallel,
            ExecutionArg::Sequential => Execution::Sequential,
        };
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn verify(args: &VerifyArgs) -> Result<ExitCode, String> {
    let suite: Suite = args.suite.parse().map_err(|e: pl2::Error| e.to_string())?;
    let cfg = verify_config(args)?;
    let report = run_suite(suite, &cfg).map_err(|e| e.to_string())?;
    let text = report.render();
    print!("{text}");
    if let Some(path) = &args.output {
        std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Polylog(args) => polylog(args),
        Command::Matrix(args) => matrix(args),
        Command::Verify(args) => verify(args),
    };
    result.unwrap_or_else(|msg| {
        eprintln!("error: {msg}");
        ExitCode::from(EXIT_USAGE)
    })
}
