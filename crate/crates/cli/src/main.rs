use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gmk_core::config::{RunConfig, PREC_ENV};
use gmk_core::gm::{nabla_univ_terms, ExponentSpec, GradedNearly, UnivExponent};
use gmk_core::iwasawa::{eval_full_char, UnivChar};
use gmk_core::triple::{euler_e, euler_e1, m0, m_vector, triple_t, verify_theta_m_identity, PrimeSlot, TripleEigenData, TripleWeights};
use gmk_core::verify::run_suite;
use gmk_core::{DirichletChar, NearlyForm, Padic, WeightChar};

#[derive(Parser)]
#[command(name = "gmk", version, about = "Exact p-adic arithmetic and Gauss-Manin calculus on q-expansions")]
struct Cli {
    /// Residue characteristic (an odd prime).
    #[arg(long, global = true, default_value_t = 3)]
    p: u32,
    /// Level n of the weight disk.
    #[arg(long, global = true, default_value_t = 1)]
    n: u32,
    /// Target p-adic digits [default: $GMK_DEFAULT_PREC or 8].
    #[arg(long, global = true)]
    prec: Option<u32>,
    #[arg(long, global = true, default_value_t = 20240601)]
    seed: u64,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weight characters.
    Weights {
        #[command(subcommand)]
        cmd: WeightsCmd,
    },
    /// Operators on nearly overconvergent q-expansions.
    Qexp {
        #[command(subcommand)]
        cmd: QexpCmd,
    },
    /// The universal iterate of the Gauss-Manin connection.
    Gm {
        #[command(subcommand)]
        cmd: GmCmd,
    },
    /// Triple-product operator.
    Triple {
        #[command(subcommand)]
        cmd: TripleCmd,
    },
    /// Euler factors from Hecke eigenvalue data.
    Euler {
        /// TripleEigenData JSON file.
        #[arg(long)]
        data: PathBuf,
        /// Weight triples for a prime other than the distinguished one,
        /// one per embedding: "k1,k2,k3;k1,k2,k3".
        #[arg(long)]
        other: Option<String>,
    },
    /// Run a seeded verification suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// Evaluate a weight character at a unit.
    Eval {
        /// WeightChar JSON (inline or file), or an integer k for β ↦ β^k.
        #[arg(long = "char")]
        chi: String,
        /// An integer or a p-adic JSON value.
        #[arg(long)]
        beta: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Derive,
    #[value(name = "U")]
    U,
    #[value(name = "V")]
    V,
    Deplete,
    Theta,
    Nabla,
    NablaPow,
}

#[derive(Subcommand)]
enum QexpCmd {
    /// Apply one operator to a NearlyForm.
    Apply {
        #[arg(long, value_enum)]
        op: Op,
        /// Input NearlyForm JSON; standard input when omitted.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Dirichlet character for `theta`: "a,b" at level n, or JSON.
        #[arg(long)]
        chi: Option<String>,
        /// Exponent for `nabla-pow`.
        #[arg(long)]
        s: Option<u32>,
    },
}

#[derive(Subcommand)]
enum GmCmd {
    /// `∇^s` of a NearlyForm, truncated with a certified tail.
    Iterate {
        /// Exponent JSON {"class": a} or {"m": m}, or an integer m.
        #[arg(long)]
        s: String,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        opts: PlanOpts,
    },
    /// Run one of the iterate suites.
    Verify(GmVerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GmSuite {
    Pdiviter,
    BinomLemma,
    Gmesp,
}

#[derive(Args)]
struct GmVerifyArgs {
    #[arg(value_enum)]
    suite: GmSuite,
    #[command(flatten)]
    opts: SuiteOpts,
}

#[derive(Subcommand)]
enum TripleCmd {
    /// `t_{k1,k2,k3}(s1, s2)`.
    T {
        #[arg(long)]
        weights: String,
        #[arg(long = "in", num_args = 2, required = true)]
        input: Vec<PathBuf>,
    },
    /// Check the corrected representative identity on given inputs, or run
    /// the seeded suite when no inputs are given.
    VerifyTheta {
        #[arg(long, requires = "input")]
        weights: Option<String>,
        #[arg(long = "in", num_args = 2)]
        input: Vec<PathBuf>,
        #[command(flatten)]
        opts: SuiteOpts,
    },
}

#[derive(Args, Clone, Default)]
struct PlanOpts {
    /// T-degree truncation override.
    #[arg(long)]
    trunc: Option<usize>,
    /// Series cutoff override.
    #[arg(long)]
    terms: Option<u32>,
}

#[derive(Args, Clone, Default)]
struct SuiteOpts {
    /// Random cases per suite.
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    i_max: Option<u32>,
    /// Restrict to one integer exponent.
    #[arg(long)]
    m: Option<i64>,
    /// Exponent window for random inputs.
    #[arg(long)]
    window: Option<u64>,
    /// Random substitutions per index.
    #[arg(long)]
    subs: Option<usize>,
    #[command(flatten)]
    plan: PlanOpts,
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    #[command(flatten)]
    opts: SuiteOpts,
}

/// Input problems exit with 2, failed checks with 1.
enum Failure {
    Invalid(anyhow::Error),
    Checks,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

impl From<gmk_core::Error> for Failure {
    fn from(e: gmk_core::Error) -> Self {
        Failure::Invalid(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn config(cli: &Cli, plan: &PlanOpts) -> anyhow::Result<RunConfig> {
    suite_config(cli, &SuiteOpts { plan: plan.clone(), ..Default::default() })
}

fn suite_config(cli: &Cli, opts: &SuiteOpts) -> anyhow::Result<RunConfig> {
    let prec = match cli.prec {
        Some(d) => d,
        None => RunConfig::default_prec().with_context(|| format!("reading {PREC_ENV}"))?,
    };
    let d = RunConfig::default();
    let cfg = RunConfig {
        p: cli.p,
        n: cli.n,
        prec,
        seed: cli.seed,
        trunc: opts.plan.trunc,
        terms: opts.plan.terms,
        window: opts.window.unwrap_or(d.window),
        cases: opts.cases.unwrap_or(d.cases),
        i_max: opts.i_max,
        m: opts.m,
        subs: opts.subs.unwrap_or(d.subs),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cli: &Cli, v: &impl Serialize) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, s).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(s.as_bytes())?,
    }
    Ok(())
}

fn read_input(path: Option<&PathBuf>) -> anyhow::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Inline JSON, or the contents of a file.
fn inline_or_file(arg: &str) -> anyhow::Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> anyhow::Result<T> {
    serde_json::from_str(text).map_err(|e| anyhow!("parsing {what} at line {} column {}: {e}", e.line(), e.column()))
}

fn parse_form(path: Option<&PathBuf>) -> anyhow::Result<NearlyForm<Padic>> {
    let what = path.map(|p| p.display().to_string()).unwrap_or_else(|| "standard input".into());
    parse(&read_input(path)?, &what)
}

fn parse_weights(s: &str) -> anyhow::Result<TripleWeights> {
    let ks: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| anyhow!("weights must be k1,k2,k3, got {s}")))
        .collect::<anyhow::Result<_>>()?;
    let [k1, k2, k3] = ks[..] else { bail!("weights must be k1,k2,k3, got {s}") };
    Ok(TripleWeights::new(k1, k2, k3)?)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let prec = match cli.prec {
        Some(d) => d,
        None => RunConfig::default_prec()?,
    };
    match &cli.cmd {
        Cmd::Weights { cmd: WeightsCmd::Eval { chi, beta } } => {
            let chi: WeightChar = match chi.trim().parse::<i64>() {
                Ok(k) => WeightChar::power(cli.p, k),
                Err(_) => parse(&inline_or_file(chi)?, "weight character")?,
            };
            let beta = match beta.trim().parse::<i64>() {
                Ok(b) => Padic::from_int(chi.p, b, prec),
                Err(_) => parse(&inline_or_file(beta)?, "beta")?,
            };
            emit(cli, &eval_full_char(&chi, &beta, prec)?)?;
        }
        Cmd::Qexp { cmd: QexpCmd::Apply { op, input, chi, s } } => {
            let f = parse_form(input.as_ref())?;
            match op {
                Op::Derive => emit(cli, &f.derive())?,
                Op::U => emit(cli, &f.u_op())?,
                Op::V => emit(cli, &f.v_op()?)?,
                Op::Deplete => emit(cli, &f.deplete())?,
                Op::Nabla => emit(cli, &f.nabla()?)?,
                Op::NablaPow => {
                    let s = s.ok_or_else(|| anyhow!("nabla-pow needs --s"))?;
                    emit(cli, &f.nabla_pow(s)?)?
                }
                Op::Theta => {
                    let chi = chi.as_deref().ok_or_else(|| anyhow!("theta needs --chi"))?;
                    let chi = parse_chi(chi, f.prime(), f.level(), prec)?;
                    emit(cli, &f.theta_direct(&chi))?
                }
            }
        }
        Cmd::Gm { cmd: GmCmd::Iterate { s, input, opts } } => {
            let f = parse_form(input.as_ref())?;
            let spec = parse_exponent(s, f.prime(), f.level())?;
            let cfg = config(cli, opts)?;
            let univ = UnivChar::configured(spec.p, spec.n, cfg.prec, cfg.trunc, cfg.terms)?;
            let exp = UnivExponent::from_spec_with(&spec, univ)?;
            let it = nabla_univ_terms(&f, &exp, cfg.iterate_terms())?;
            let pieces = match exp.classical_value() {
                Some(m) => graded_json(&it.value.specialize(&exp.classical_point(m)?)?)?,
                None => graded_json(&it.value)?,
            };
            emit(
                cli,
                &json!({
                    "s": exp.spec(),
                    "terms": it.terms,
                    "tail_floor": floor_json(it.tail_floor),
                    "pieces": pieces,
                }),
            )?;
        }
        Cmd::Gm { cmd: GmCmd::Verify(args) } => {
            let name = match args.suite {
                GmSuite::Pdiviter => "pdiviter",
                GmSuite::BinomLemma => "binom-lemma",
                GmSuite::Gmesp => "gmesp",
            };
            return suite(cli, name, &args.opts);
        }
        Cmd::Triple { cmd: TripleCmd::T { weights, input } } => {
            let w = parse_weights(weights)?;
            let s1 = parse_form(Some(&input[0]))?;
            let s2 = parse_form(Some(&input[1]))?;
            emit(cli, &triple_t(&w, &s1, &s2)?)?;
        }
        Cmd::Triple { cmd: TripleCmd::VerifyTheta { weights, input, opts } } => match weights {
            Some(w) => {
                let w = parse_weights(w)?;
                let s1 = parse_form(Some(&input[0]))?;
                let s2 = parse_form(Some(&input[1]))?;
                let r = verify_theta_m_identity(&w, &s1, &s2)?;
                emit(cli, &r)?;
                if !r.pass {
                    return Err(Failure::Checks);
                }
            }
            None => return suite(cli, "theta-m", opts),
        },
        Cmd::Euler { data, other } => {
            let d: TripleEigenData = parse(&read_input(Some(data))?, &data.display().to_string())?;
            let (slot, m_p) = match other {
                Some(spec) => {
                    let weights = spec
                        .split(';')
                        .map(|t| parse_weights(t).map(|w| [w.k1, w.k2, w.k3]))
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    let m = m_vector(&weights)?;
                    (PrimeSlot::Other { weights }, m)
                }
                None => (PrimeSlot::Distinguished, vec![m0(&d.weights)?]),
            };
            let e = euler_e(&slot, &d)?;
            let e1 = euler_e1(&slot, &d)?;
            emit(
                cli,
                &json!({
                    "E_p": e.value,
                    "E_p1": e1.value,
                    "m0": m0(&d.weights)?,
                    "m_p": m_p,
                    "exceptional": e.exceptional || e1.exceptional,
                }),
            )?;
        }
        Cmd::Verify(args) => return suite(cli, &args.suite, &args.opts),
    }
    Ok(())
}

fn suite(cli: &Cli, name: &str, opts: &SuiteOpts) -> Result<(), Failure> {
    let cfg = suite_config(cli, opts)?;
    let report = run_suite(name, &cfg)?;
    emit(cli, &report)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn parse_chi(s: &str, p: u32, level: u32, prec: u32) -> anyhow::Result<DirichletChar> {
    if s.trim_start().starts_with('{') {
        return parse(s, "character");
    }
    let parts: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| anyhow!("character must be a,b or JSON, got {s}")))
        .collect::<anyhow::Result<_>>()?;
    let [a, b] = parts[..] else { bail!("character must be a,b or JSON, got {s}") };
    Ok(DirichletChar::new(p, level, a, b, prec + 4)?)
}

fn parse_exponent(s: &str, p: u32, n: u32) -> anyhow::Result<ExponentSpec> {
    if let Ok(m) = s.trim().parse::<i64>() {
        return Ok(ExponentSpec { p, n, class: None, m: Some(m) });
    }
    let mut v: Value = parse(&inline_or_file(s)?, "exponent")?;
    let obj = v.as_object_mut().ok_or_else(|| anyhow!("exponent must be a JSON object"))?;
    obj.entry("p").or_insert(json!(p));
    obj.entry("n").or_insert(json!(n));
    let spec: ExponentSpec = serde_json::from_value(v)?;
    if spec.p != p || spec.n != n {
        bail!("exponent is for (p, n) = ({}, {}) but the form is for ({p}, {n})", spec.p, spec.n);
    }
    Ok(spec)
}

fn floor_json(f: i64) -> Value {
    if f == i64::MAX {
        Value::Null
    } else {
        json!(f)
    }
}

fn graded_json<C: gmk_core::Coeff + Serialize>(g: &GradedNearly<C>) -> anyhow::Result<Value> {
    let pieces = g
        .pieces()
        .iter()
        .filter(|(_, f)| !f.is_zero())
        .map(|(j, f)| Ok(json!({ "offset": j, "form": serde_json::to_value(f)? })))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Value::Array(pieces))
}
