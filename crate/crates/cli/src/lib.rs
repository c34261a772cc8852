//! Command-line front end: parses generators and a target polynomial,
//! rewrites the target in the generators and prints the result.

pub mod parse;
pub mod problem;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use hensel_rewrite::convert::{DEFAULT_MAX_RETRIES, DEFAULT_SAMPLE_BOUND};
use hensel_rewrite::{
    convert_polynomial, interpolate_fnew, var_names, verify_rewrite, ConvertRequest, Error, Field, Fp,
    GeneratorFamily, Polynomial, PrimeModulus, Rational, RationalField,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub use parse::{parse_expression, parse_scalar, ParseError};
pub use problem::ProblemFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_SAMPLING: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Newton-Hensel lifting
    Lift,
    /// Evaluation and interpolation
    Interpolate,
}

#[derive(Debug, Parser)]
#[command(
    name = "hensel-rewrite",
    version,
    about = "Rewrite a polynomial f as f_new(u_1, ..., u_n) for given generators u"
)]
struct Cli {
    /// Generator family (elem:N, psum:N, hyper:N, prodsym:A,B,..., d3) or a
    /// file with one expression per line
    #[arg(long, value_name = "FAMILY|FILE")]
    gens: Option<String>,
    /// Target polynomial, inline or in a file
    #[arg(long, value_name = "EXPR|FILE")]
    target: Option<String>,
    /// Variable names, comma separated [default: x1,...,xn]
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Coefficient field [default: rational]
    #[arg(long, value_name = "rational|fp:P")]
    field: Option<String>,
    /// Seed for point sampling [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// First point to try, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Method::Lift)]
    method: Method,
    /// Check f_new(u) = f (default)
    #[arg(long, overrides_with = "no_verify")]
    verify: bool,
    #[arg(long = "no-verify", overrides_with = "verify")]
    no_verify: bool,
    /// Print a JSON record instead of the bare polynomial
    #[arg(long)]
    json: bool,
    /// Problem file with vars, gen, target and optional field and seed lines
    #[arg(long, conflicts_with_all = ["gens", "target"])]
    problem: Option<PathBuf>,
    /// Sampling range [-B, B] for point coordinates
    #[arg(long, default_value_t = DEFAULT_SAMPLE_BOUND)]
    sample_bound: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
    max_retries: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(ParseError),
    Core(Error),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Parse(_) => EXIT_USAGE,
            Failure::Core(Error::VerificationFailed { .. }) => EXIT_VERIFY,
            Failure::Core(Error::RegularPointNotFound { .. } | Error::InterpolationSingular { .. }) => EXIT_SAMPLING,
            Failure::Core(
                Error::VarCountMismatch { .. } | Error::LengthMismatch { .. } | Error::InvalidModulus(_),
            ) => EXIT_USAGE,
            Failure::Core(_) => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Parse(e) => e.fmt(f),
            Failure::Core(e) => e.fmt(f),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

enum Gens {
    Family(GeneratorFamily),
    Exprs(Vec<String>),
}

struct Job {
    vars: Vec<String>,
    gens: Gens,
    target: String,
    seed: u64,
    alpha: Option<Vec<String>>,
    method: Method,
    verify: bool,
    sample_bound: u64,
    max_retries: usize,
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            EXIT_OK
        }
        Err(fail) => {
            let _ = writeln!(err, "error: {fail}");
            fail.exit_code()
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn is_file(s: &str) -> bool {
    Path::new(s).is_file()
}

fn execute(cli: Cli) -> Result<String, Failure> {
    let mut field = cli.field.clone();
    let mut seed = cli.seed;
    let (vars, gens, target) = if let Some(path) = &cli.problem {
        let pf = ProblemFile::parse(&read_file(path)?)?;
        field = field.or(pf.field);
        seed = seed.or(pf.seed);
        if cli.vars.is_some() {
            return Err(Failure::Usage("--vars cannot be combined with --problem".into()));
        }
        (pf.vars, Gens::Exprs(pf.gens), pf.target)
    } else {
        let gens_arg = cli
            .gens
            .as_deref()
            .ok_or_else(|| Failure::Usage("--gens is required (or --problem)".into()))?;
        let target_arg = cli
            .target
            .as_deref()
            .ok_or_else(|| Failure::Usage("--target is required (or --problem)".into()))?;
        let gens = match gens_arg.parse::<GeneratorFamily>() {
            Ok(fam) => Gens::Family(fam),
            Err(_) if is_file(gens_arg) => Gens::Exprs(
                read_file(Path::new(gens_arg))?
                    .lines()
                    .map(|l| l.split('#').next().unwrap_or("").trim())
                    .filter(|l| !l.is_empty())
                    .map(str::to_string)
                    .collect(),
            ),
            Err(e) => return Err(Failure::Usage(format!("{e}, and no such file"))),
        };
        let n = match &gens {
            Gens::Family(fam) => fam.num_vars(),
            Gens::Exprs(v) => v.len(),
        };
        let vars = cli.vars.clone().unwrap_or_else(|| var_names("x", n));
        let target = if is_file(target_arg) {
            read_file(Path::new(target_arg))?.trim().to_string()
        } else {
            target_arg.to_string()
        };
        (vars, gens, target)
    };
    let n = match &gens {
        Gens::Family(fam) => fam.num_vars(),
        Gens::Exprs(v) => v.len(),
    };
    if vars.len() != n {
        return Err(Failure::Usage(format!("{n} generators for {} variables", vars.len())));
    }
    let job = Job {
        vars,
        gens,
        target,
        seed: seed.unwrap_or(0),
        alpha: cli.alpha.clone(),
        method: cli.method,
        verify: !cli.no_verify,
        sample_bound: cli.sample_bound,
        max_retries: cli.max_retries,
    };
    let text = match field.as_deref().unwrap_or("rational") {
        "rational" => solve::<Rational>(&RationalField, &job)?,
        other => {
            let p = other
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| Failure::Usage(format!("unknown field `{other}`; use rational or fp:P")))?;
            let modulus = PrimeModulus::new(p)?;
            solve::<Fp>(&modulus, &job)?
        }
    };
    Ok(if cli.json { text.1 } else { text.0 })
}

/// Returns the plain rendering and the JSON record.
fn solve<F: Field>(ctx: &F::Ctx, job: &Job) -> Result<(String, String), Failure> {
    let u: Vec<Polynomial<F>> = match &job.gens {
        Gens::Family(fam) => fam.generators(ctx),
        Gens::Exprs(srcs) => srcs
            .iter()
            .map(|s| parse_expression(s, &job.vars, ctx))
            .collect::<Result<_, _>>()?,
    };
    let f: Polynomial<F> = parse_expression(&job.target, &job.vars, ctx)?;
    let alpha = job
        .alpha
        .as_ref()
        .map(|a| a.iter().map(|s| parse_scalar::<F>(s, ctx)).collect::<Result<Vec<F>, _>>())
        .transpose()?;
    let e_names = var_names("e", u.len());
    let strings = |v: &[F]| v.iter().map(F::to_string).collect::<Vec<_>>();
    let (f_new, alpha, c) = match job.method {
        Method::Lift => {
            let mut req = ConvertRequest::new(u, f.clone()).seed(job.seed).verify(job.verify);
            req.sample_bound = job.sample_bound;
            req.max_retries = job.max_retries;
            req.forced_point = alpha;
            let res = convert_polynomial(&req)?;
            (res.f_new, Some(strings(&res.alpha)), Some(strings(&res.c)))
        }
        Method::Interpolate => {
            let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
            let g = interpolate_fnew(&u, &f, &mut rng, job.max_retries)?;
            if job.verify && !verify_rewrite(&u, &f, &g)? {
                let residual = g.compose(&u)?.try_sub(&f)?;
                return Err(Error::VerificationFailed {
                    residual: residual.render(&job.vars),
                }
                .into());
            }
            (g, None, None)
        }
    };
    let rendered = f_new.render(&e_names);
    let method = match job.method {
        Method::Lift => "lift",
        Method::Interpolate => "interpolate",
    };
    let record = json!({
        "f_new": rendered,
        "alpha": alpha,
        "c": c,
        "degree": f.total_degree(),
        "method": method,
        "verified": job.verify,
    });
    Ok((rendered, record.to_string()))
}
