//! `linform`: batch front-end over the library. Every subcommand writes one
//! JSON report (sorted keys, no timestamps) to stdout or `--out`, and a short
//! summary line to stderr.
//!
//! Exit codes: 0 when every audit passes, 1 on an audit failure, 2 on a usage
//! or input error, 3 when the working precision cannot decide a result.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use linform::Error;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "linform", version, about = "Exact audits for linear forms in p-adic logarithms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// p-adic working precision in digits; overrides the instance file.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

/// A number field: a preset name or a defining polynomial.
#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// `Q`, `Q(i)`, `Q(zeta3)`, `Q(zeta5)` or `Q(sqrtD)`.
    #[arg(long, default_value = "Q")]
    field: String,
    /// Integer coefficients of a monic irreducible polynomial, constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "field")]
    min_poly: Option<Vec<i64>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Heights of a vector of field elements and of each entry.
    Heights {
        #[command(flatten)]
        field: FieldArgs,
        /// An element: `num/den`, or power-basis coordinates `c0,c1,...`.
        #[arg(long = "x", allow_hyphen_values = true)]
        xs: Vec<String>,
        /// Draw this many random entries from the seed instead.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Product formula over all places, per element.
    ProductFormula {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "x", allow_hyphen_values = true)]
        xs: Vec<String>,
        #[arg(long)]
        random: Option<usize>,
    },
    /// Exponent of the p-adic Schwarz-lemma bound. Radii and norms are
    /// valuation exponents given as exact rationals (`inf` for zero norms).
    Schwarz {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        normt: String,
        #[arg(long)]
        p: u64,
    },
    /// Small solution of a homogeneous linear system. Reads a TOML file with
    /// `forms` (rows of elements) and `field` or `min_poly`; without a file a
    /// random system over Q is drawn from the seed.
    Siegel {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Normalized exponential series of a group model, with its consistency audits.
    ExpSeries {
        #[command(flatten)]
        field: FieldArgs,
        /// `gm`, `gm^2` or `gm^n:k`, optionally followed by `/delta`.
        #[arg(long, default_value = "gm")]
        model: String,
        #[arg(long, default_value_t = 8)]
        order: u32,
    },
    /// Semistability of the hyperplane `sum beta_i z_i = 0` in a torus.
    Semistable {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "beta", allow_hyphen_values = true, required = true)]
        beta: Vec<String>,
    },
    /// Parameter choice `S0, D0, S, D, T`. Reals accept `num/den`, `exp(q)`,
    /// `log(q)` or a decimal read as rounded to its last digit.
    Params {
        #[arg(long, default_value = "3")]
        c: String,
        #[arg(long)]
        omega: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: String,
        #[arg(long)]
        h: String,
        #[arg(long, default_value = "1")]
        c2: String,
    },
    /// The final lower bound for `log |l(u)|_p`.
    Bound {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "1")]
        c0: String,
        #[arg(long)]
        nu: Option<u32>,
    },
    /// Certified comparison of `v(l(u))` with the bound on a torus instance.
    VerifyGm { instance: PathBuf },
    /// The desk-scale proof pipeline on an instance.
    Pipeline { instance: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Heights { .. } => "heights",
            Command::ProductFormula { .. } => "product-formula",
            Command::Schwarz { .. } => "schwarz",
            Command::Siegel { .. } => "siegel",
            Command::ExpSeries { .. } => "exp-series",
            Command::Semistable { .. } => "semistable",
            Command::Params { .. } => "params",
            Command::Bound { .. } => "bound",
            Command::VerifyGm { .. } => "verify-gm",
            Command::Pipeline { .. } => "pipeline",
        }
    }
}

/// Result of a subcommand that ran to completion.
pub struct Outcome {
    pub report: Value,
    pub pass: bool,
    pub summary: String,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                Error::InsufficientPrecision(_) | Error::UncertifiedTail(_) => 3,
                Error::Parse(_)
                | Error::BadParameters(_)
                | Error::Precondition(_)
                | Error::Domain(_)
                | Error::UnsupportedField(_)
                | Error::ZeroElement => 2,
                _ => 1,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Core(e) => match e {
                Error::Domain(_) => "domain",
                Error::InsufficientPrecision(_) => "insufficient-precision",
                Error::NotSimpleRoot => "not-simple-root",
                Error::UncertifiedTail(_) => "uncertified-tail",
                Error::ZeroSeries => "zero-series",
                Error::BadParameters(_) => "bad-parameters",
                Error::ZeroElement => "zero-element",
                Error::NoSolutionFound(_) => "no-solution-found",
                Error::Precondition(_) => "precondition",
                Error::InconsistentSystem(_) => "inconsistent-system",
                Error::InfeasibleParameters(_) => "infeasible-parameters",
                Error::AdditionFormulaUndefined => "addition-formula-undefined",
                Error::ZeroValue => "zero-value",
                Error::LinearFormZero => "linear-form-zero",
                Error::UnsupportedField(_) => "unsupported-field",
                Error::Parse(_) => "parse",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Input(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    use commands::*;
    match &cli.command {
        Command::Heights { field, xs, random } => heights(field, xs, *random, cli.seed),
        Command::ProductFormula { field, xs, random } => product_formula(field, xs, *random, cli.seed),
        Command::Schwarz { s, t, k, l, delta, mu, normt, p } => schwarz(s, t, *k, *l, delta, mu, normt, *p),
        Command::Siegel { file, m, n, budget } => siegel(file.as_deref(), *m, *n, *budget, cli.seed),
        Command::ExpSeries { field, model, order } => exp_series(field, model, *order),
        Command::Semistable { field, beta } => semistable(field, beta),
        Command::Params { c, omega, n, b, h, c2 } => params(c, omega, *n, b, h, c2),
        Command::Bound { omega, n, b, h, p, c0, nu } => bound(omega, *n, b, h, *p, c0, *nu),
        Command::VerifyGm { instance } => verify_gm(instance, cli.precision),
        Command::Pipeline { instance } => pipeline(instance, cli.precision),
    }
}

fn emit(cli: &Cli, doc: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("reports serialize");
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let (doc, code) = match dispatch(&cli) {
        Ok(o) => {
            let status = if o.pass { "pass" } else { "fail" };
            eprintln!("{name}: {status}: {}", o.summary);
            (json!({ "command": name, "status": status, "report": o.report }), u8::from(!o.pass))
        }
        Err(e) => {
            eprintln!("{name}: error: {}", e.message());
            let doc = json!({
                "command": name,
                "status": "error",
                "error": { "kind": e.kind(), "message": e.message() },
            });
            (doc, e.exit_code())
        }
    };
    if let Err(e) = emit(&cli, &doc) {
        eprintln!("{name}: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
