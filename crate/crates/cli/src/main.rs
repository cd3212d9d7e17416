//! `gbflab`: identity suites, inequality sweeps, approximation studies,
//! g_λ tables, complete monotonicity probes and asymptotic expansions.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbf_core::Axis;

use crate::commands::Outcome;
use crate::error::CliError;
use crate::output::{write_atomic, Format};

#[derive(Debug, Parser)]
#[command(name = "gbflab", version, about = "Numerics for generalized Bernstein functions")]
struct Cli {
    /// Absolute/relative tolerance for quadrature and series.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Write the report here (atomically) instead of to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Residuals of the incomplete gamma/beta identities.
    Identities(IdentitiesArgs),
    /// Margin sweeps of the smoothing inequalities.
    Inequalities(InequalitiesArgs),
    /// Convergence of the approximants f_n of a representation.
    Approximate(ApproximateArgs),
    /// Table of g_λ and its derived quantities.
    Glambda(GlambdaArgs),
    /// Finite-difference complete monotonicity probes.
    Probe(ProbeArgs),
    /// Asymptotic expansion of a bounded complete function.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bg1,
    Bg2,
    Gg1,
    All,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// `default`, or an axis `spacing:min:max:count` used for both x and y.
    #[arg(long, default_value = "default")]
    pub grid: String,
    /// λ values for a non-default grid.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    #[value(name = "IV")]
    IV,
    #[value(name = "cor_cm")]
    CorCm,
    #[value(name = "cor_bdd_cm")]
    CorBddCm,
}

#[derive(Debug, Args)]
pub struct InequalitiesArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    /// λ values (I, II and cor_cm with a measure fixture).
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    /// Axis used for both x and y.
    #[arg(long, default_value = "log:0.01:100:20")]
    pub xy_grid: Axis,
    /// Fixture: a GBFRep (III, IV, cor_cm) or a MeasureSpec (cor_cm, cor_bdd_cm).
    #[arg(long)]
    pub rep: Option<PathBuf>,
    /// Evaluate even where the hypotheses fail (expert use).
    #[arg(long)]
    pub no_hypothesis_check: bool,
}

#[derive(Debug, Args)]
pub struct ApproximateArgs {
    #[arg(long)]
    pub rep: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32")]
    pub n: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct GlambdaArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.75,1.5,4")]
    pub lambda: Vec<f64>,
    #[arg(long, default_value = "log:0.01:1000:50")]
    pub grid: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeKind {
    /// (−1)^k f^{(k)} ≥ 0
    Cm,
    /// x^α f(x) completely monotonic
    Order,
    /// f′/f completely monotonic up to sign
    Log,
    /// x^{1−order} f′(x) completely monotonic
    Bernstein,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// exp-neg, inv-1p, inv-sqrt, identity, sin-plus-2, exp, g-lambda,
    /// inv-g-lambda, weighted-derivative, lower-gamma, laplace, gbf.
    #[arg(long)]
    pub function: String,
    #[arg(long, value_enum, default_value_t = ProbeKind::Cm)]
    pub kind: ProbeKind,
    /// α for `order`, the order for `bernstein`.
    #[arg(long)]
    pub order: Option<f64>,
    /// Parameter of the λ-dependent functions.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// MeasureSpec for `laplace`, GBFRep for `gbf`.
    #[arg(long)]
    pub rep: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub max_order: usize,
    /// Log-spaced probe grid.
    #[arg(long, default_value = "log:0.1:50:40")]
    pub grid: Axis,
}

#[derive(Debug, Args)]
pub struct AsymptoticsArgs {
    /// ExpansionSpec fixture; without it the Lomax case at --lambda is used.
    #[arg(long)]
    pub rep: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    /// Largest truncation order.
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "5,10,50")]
    pub x: Vec<f64>,
    /// Also probe x^{n−λ} Q_n(x) up to this order on [0.1, 50].
    #[arg(long)]
    pub max_order: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Ok(Outcome::Numerical) => {
            eprintln!("gbflab: some grid points failed numerically; see the status column");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("gbflab: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Config(format!("--tol must be positive, got {}", cli.tol)));
    }
    let ctx = commands::Context {
        tol: cli.tol,
        format: cli.format,
    };
    let report = match &cli.command {
        Command::Identities(a) => commands::identities(&ctx, a)?,
        Command::Inequalities(a) => commands::inequalities(&ctx, a)?,
        Command::Approximate(a) => commands::approximate(&ctx, a)?,
        Command::Glambda(a) => commands::glambda(&ctx, a)?,
        Command::Probe(a) => commands::probe(&ctx, a)?,
        Command::Asymptotics(a) => commands::asymptotics(&ctx, a)?,
    };
    match &cli.out {
        Some(path) => {
            write_atomic(path, &report.body)?;
            println!("{}", report.summary);
        }
        None => {
            print!("{}", report.body);
            eprintln!("{}", report.summary);
        }
    }
    Ok(report.outcome)
}
