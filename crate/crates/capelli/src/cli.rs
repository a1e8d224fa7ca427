//! Command-line entry point. Reports go to standard output as JSON,
//! diagnostics to standard error.

use std::path::PathBuf;

use capelli_core::algebra::closure;
use capelli_core::detect::{self, cross_validate, DetectMode, DetectionConfig, Target};
use capelli_core::lab::{
    capelli_staircase, double_staircase, find_witness, is_identity_exhaustive,
    is_identity_randomized, verify_decomposition, witness_at, WitnessStrategy,
    DEFAULT_EXHAUSTIVE_CAP,
};
use capelli_core::{EvalImpl, PolynomialSpec, PrimeField, Rationals, DEFAULT_PRIME};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra_spec::AlgebraSpec;
use crate::bench::{bench_eval, parse_t_range, Family};
use crate::clock::WallClock;
use crate::error::CliError;
use crate::exec::RayonExecutor;
use crate::json::{decode_matrices, read_file, FieldDesc, JsonField};
use crate::report;

#[derive(Debug, Parser)]
#[command(
    name = "capelli",
    version,
    about = "Polynomial identities and generation tests for matrix algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: machine parallelism).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a polynomial is an identity of an algebra.
    VerifyIdentity(VerifyArgs),
    /// Decide whether matrices generate the full (or block upper) algebra.
    Detect(DetectArgs),
    /// Search for a nonvanishing substitution.
    Witness(WitnessArgs),
    /// Basis of the algebra generated by matrices.
    Closure(ClosureArgs),
    /// Check the h_{q+r} = sum h_q h_r reconstruction.
    Decompose(DecomposeArgs),
    /// Time the evaluators against each other.
    Bench(BenchArgs),
    /// Compare the detector modes on random subalgebras.
    CrossValidate(CrossArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IdentityMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    poly: String,
    #[arg(long)]
    algebra: String,
    #[arg(long, value_enum, default_value_t = IdentityMode::Exhaustive)]
    mode: IdentityMode,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// A prime modulus, or Q for the rationals.
    #[arg(long, default_value_t = DEFAULT_PRIME.to_string())]
    field: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(name = "poly_test")]
    PolyTest,
    Oracle,
    Both,
}

impl From<ModeArg> for DetectMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PolyTest => DetectMode::PolyTest,
            ModeArg::Oracle => DetectMode::Oracle,
            ModeArg::Both => DetectMode::Both,
        }
    }
}

#[derive(Debug, Args)]
struct DetectArgs {
    /// Generators in the matrix JSON encoding.
    #[arg(long, conflicts_with = "algebra", required_unless_present = "algebra")]
    file: Option<PathBuf>,
    /// Use the basis of a named algebra as generators.
    #[arg(long)]
    algebra: Option<String>,
    /// Test against E(l, m) instead of M_n.
    #[arg(long = "in-E", value_name = "L,M", conflicts_with = "blocks")]
    in_e: Option<String>,
    /// Test against the block upper triangular algebra with these blocks.
    #[arg(long, value_name = "L1,L2,...")]
    blocks: Option<String>,
    /// Matrix size; checked against the generators.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    #[arg(long, default_value_t = detect::DEFAULT_TRIALS)]
    trials: usize,
    /// Close without adjoining the identity.
    #[arg(long)]
    non_unital: bool,
    /// Field for --algebra; a --file declares its own.
    #[arg(long)]
    field: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Staircase,
    CapelliStaircase,
    Exhaustive,
    Random,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long)]
    poly: String,
    #[arg(long)]
    algebra: String,
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    /// Trials for the random strategy.
    #[arg(long, default_value_t = 50)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME.to_string())]
    field: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ClosureArgs {
    #[arg(long)]
    file: PathBuf,
    /// Adjoin the identity.
    #[arg(long)]
    unital: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Size of the random matrices.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME.to_string())]
    field: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    family: String,
    /// Block sizes `a..b` or a single `t`: s_t, c_{2t}, h_{2t}.
    #[arg(long)]
    t: String,
    #[arg(long = "impl", default_value = "naive,subset_dp")]
    impls: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME.to_string())]
    field: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct CrossArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    /// Generator counts, cycled through the cases.
    #[arg(long, default_value = "1,2,3")]
    counts: String,
    #[arg(long, default_value_t = detect::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME.to_string())]
    field: String,
    #[command(flatten)]
    common: Common,
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub code: i32,
    pub report: Option<Value>,
    pub stdout: Option<String>,
    pub stderr: Option<String>,
}

macro_rules! on_field {
    ($desc:expr, $f:ident => $body:expr) => {
        match $desc {
            FieldDesc::Prime { p } => {
                let $f = PrimeField::new(p)?;
                $body
            }
            FieldDesc::Rational => {
                let $f = Rationals;
                $body
            }
        }
    };
}

pub fn run<I, S>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => RunOutput {
                    code: 0,
                    report: None,
                    stdout: Some(text),
                    stderr: None,
                },
                _ => RunOutput {
                    code: 2,
                    report: None,
                    stdout: None,
                    stderr: Some(text),
                },
            };
        }
    };
    match execute(cli.command) {
        Ok(report) => RunOutput {
            code: report::exit_code(&report),
            stdout: Some(serde_json::to_string_pretty(&report).expect("reports serialize")),
            report: Some(report),
            stderr: None,
        },
        Err(e) => RunOutput {
            code: e.exit_code(),
            report: None,
            stdout: None,
            stderr: Some(format!("error: {e}\n")),
        },
    }
}

fn executor(common: &Common) -> Result<RayonExecutor, CliError> {
    RayonExecutor::new(common.threads).map_err(|e| CliError::Usage(format!("--threads: {e}")))
}

fn poly(s: &str) -> Result<PolynomialSpec, CliError> {
    s.parse::<PolynomialSpec>()
        .map_err(|e| CliError::Usage(format!("--poly {s:?}: {e}")))
}

fn tagged(command: &str, mut report: Value, extra: Value) -> Value {
    report["command"] = command.into();
    if let (Value::Object(obj), Value::Object(more)) = (&mut report, extra) {
        obj.extend(more);
    }
    report
}

fn execute(command: Command) -> Result<Value, CliError> {
    match command {
        Command::VerifyIdentity(a) => {
            let desc = FieldDesc::parse_flag(&a.field)?;
            let spec = poly(&a.poly)?;
            let algebra: AlgebraSpec = a.algebra.parse()?;
            let exec = executor(&a.common)?;
            on_field!(desc, f => verify_identity(&f, &spec, &algebra, &a, &exec))
        }
        Command::Detect(a) => {
            let (desc, file) = match (&a.file, &a.field) {
                (Some(path), flag) => {
                    let file = read_file(path)?;
                    if let Some(flag) = flag {
                        if FieldDesc::parse_flag(flag)? != file.field {
                            return Err(CliError::Usage(
                                "--field disagrees with the generator file".into(),
                            ));
                        }
                    }
                    (file.field.clone(), Some(file))
                }
                (None, flag) => (
                    FieldDesc::parse_flag(flag.as_deref().unwrap_or(&DEFAULT_PRIME.to_string()))?,
                    None,
                ),
            };
            let exec = executor(&a.common)?;
            on_field!(desc, f => run_detect(&f, file.as_ref(), &a, &exec))
        }
        Command::Witness(a) => {
            let desc = FieldDesc::parse_flag(&a.field)?;
            let spec = poly(&a.poly)?;
            let algebra: AlgebraSpec = a.algebra.parse()?;
            let exec = executor(&a.common)?;
            on_field!(desc, f => run_witness(&f, &spec, &algebra, &a, &exec))
        }
        Command::Closure(a) => {
            let file = read_file(&a.file)?;
            on_field!(file.field.clone(), f => {
                let gens = decode_matrices(&f, &file)?;
                let alg = closure(&f, file.n, &gens, a.unital)?;
                Ok(tagged("closure", report::closure(&alg), json!({ "generators": gens.len() })))
            })
        }
        Command::Decompose(a) => {
            let desc = FieldDesc::parse_flag(&a.field)?;
            on_field!(desc, f => {
                let r = verify_decomposition(&f, a.q, a.r, a.n, a.trials, a.common.seed)?;
                Ok(tagged("decompose", report::decomposition(&r), json!({ "field": f.desc() })))
            })
        }
        Command::Bench(a) => {
            let desc = FieldDesc::parse_flag(&a.field)?;
            let family: Family = a.family.parse()?;
            let ts = parse_t_range(&a.t)?;
            let impls = a
                .impls
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<EvalImpl>()
                        .map_err(|e| CliError::Usage(format!("--impl: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            on_field!(desc, f => {
                let rows = bench_eval(&f, family, ts.clone(), &impls, a.n, a.reps, a.common.seed)?;
                Ok(tagged("bench", report::bench(&rows), json!({ "n": a.n, "reps": a.reps, "field": f.desc() })))
            })
        }
        Command::CrossValidate(a) => {
            let desc = FieldDesc::parse_flag(&a.field)?;
            let counts = a
                .counts
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("--counts: bad entry {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let exec = executor(&a.common)?;
            let config = DetectionConfig {
                trials: a.trials,
                seed: a.common.seed,
                ..DetectionConfig::default()
            };
            on_field!(desc, f => {
                let r = cross_validate(&f, a.n, a.cases, &counts, a.common.seed, &config, &exec)?;
                Ok(tagged("cross-validate", report::cross_validation(&r), json!({})))
            })
        }
    }
}

fn verify_identity<F: JsonField>(
    field: &F,
    spec: &PolynomialSpec,
    algebra: &AlgebraSpec,
    a: &VerifyArgs,
    exec: &RayonExecutor,
) -> Result<Value, CliError> {
    let alg = algebra.build(field)?;
    let verdict = match a.mode {
        IdentityMode::Exhaustive => {
            is_identity_exhaustive(spec, &alg, DEFAULT_EXHAUSTIVE_CAP, exec)?
        }
        IdentityMode::Random => is_identity_randomized(spec, &alg, a.trials, a.common.seed, exec)?,
    };
    Ok(tagged(
        "verify-identity",
        report::identity(&verdict),
        json!({
            "poly": spec.to_string(),
            "algebra": algebra.to_string(),
            "dim": alg.dim(),
            "field": field.desc(),
        }),
    ))
}

fn parse_sizes(flag: &str, s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .ok()
                .filter(|&k| k > 0)
                .ok_or_else(|| {
                    CliError::Usage(format!("{flag}: expected positive sizes, got {s:?}"))
                })
        })
        .collect()
}

fn run_detect<F: JsonField>(
    field: &F,
    file: Option<&crate::json::MatrixFile>,
    a: &DetectArgs,
    exec: &RayonExecutor,
) -> Result<Value, CliError> {
    let (n, generators) = match (file, &a.algebra) {
        (Some(file), _) => (file.n, decode_matrices(field, file)?),
        (None, Some(spec)) => {
            let alg = spec.parse::<AlgebraSpec>()?.build(field)?;
            (alg.n(), alg.basis().to_vec())
        }
        (None, None) => return Err(CliError::Usage("detect needs --file or --algebra".into())),
    };
    if let Some(expected) = a.n {
        if expected != n {
            return Err(CliError::Usage(format!(
                "--n {expected} but the generators are {n} x {n}"
            )));
        }
    }
    let target = match (&a.in_e, &a.blocks) {
        (Some(lm), _) => {
            let v = parse_sizes("--in-E", lm)?;
            let [l, m] = v[..] else {
                return Err(CliError::Usage(format!("--in-E expects l,m, got {lm:?}")));
            };
            Target::e(l, m)
        }
        (None, Some(b)) => match parse_sizes("--blocks", b)?.as_slice() {
            [single] => Target::Full(*single),
            many => Target::Blocks(many.to_vec()),
        },
        (None, None) => Target::Full(n),
    };
    if target.n() != n {
        return Err(CliError::Usage(format!(
            "target blocks {:?} do not sum to n = {n}",
            target.blocks()
        )));
    }
    let config = DetectionConfig {
        trials: a.trials,
        seed: a.common.seed,
        mode: a.mode.into(),
        unital: !a.non_unital,
    };
    let verdict = detect::detect(
        field,
        &target,
        &generators,
        &config,
        exec,
        &WallClock::new(),
    )?;
    Ok(tagged(
        "detect",
        report::detection(&verdict),
        json!({
            "mode": config.mode.name(),
            "n": n,
            "blocks": target.blocks(),
            "field": field.desc(),
        }),
    ))
}

fn run_witness<F: JsonField>(
    field: &F,
    spec: &PolynomialSpec,
    algebra: &AlgebraSpec,
    a: &WitnessArgs,
    exec: &RayonExecutor,
) -> Result<Value, CliError> {
    let alg = algebra.build(field)?;
    let witness = match a.strategy {
        StrategyArg::Staircase | StrategyArg::CapelliStaircase => {
            let subst = match a.strategy {
                StrategyArg::Staircase => double_staircase(field, alg.n())?,
                _ => capelli_staircase(field, alg.n())?,
            };
            if let Some(k) = subst
                .xs
                .iter()
                .chain(&subst.ys)
                .position(|m| !alg.contains(m))
            {
                return Err(CliError::Usage(format!(
                    "staircase argument {} lies outside {}",
                    k + 1,
                    algebra
                )));
            }
            witness_at(spec, subst)?
        }
        StrategyArg::Exhaustive => {
            find_witness(spec, &alg, WitnessStrategy::BasisExhaustive, exec)?
        }
        StrategyArg::Random => find_witness(
            spec,
            &alg,
            WitnessStrategy::Random {
                seed: a.common.seed,
                budget: a.budget,
            },
            exec,
        )?,
    };
    let strategy = a
        .strategy
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let mut report = json!({
        "status": if witness.is_some() { "witness" } else { "no_witness" },
        "poly": spec.to_string(),
        "algebra": algebra.to_string(),
        "strategy": strategy,
        "field": field.desc(),
    });
    if let Some(w) = &witness {
        report["witness"] = crate::json::encode_substitution(&w.subst);
        report["value"] = crate::json::matrix_rows(&w.value);
    }
    Ok(tagged("witness", report, json!({})))
}
