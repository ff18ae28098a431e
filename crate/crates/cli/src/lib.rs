//! The `cdist` command line: typecheck, sample, measure and condition λCD programs.
//!
//! Output is one JSON object per line unless `--pretty` is given. Exit codes:
//! 0 on success, 1 for static errors (bad flags, parse and type errors), 2 when
//! a runtime certification fails.

use std::io::Write;
use std::path::PathBuf;

use cdist::condition::{obs_dens, parse_density, posterior_bounds, BndDens};
use cdist::exactreal::{format_rational, parse_rational, rational::to_f64};
use cdist::lang::{
    compile, default_global_env_with, parse_decimal, LazyValue, Program, Type, Value,
};
use cdist::measure::{measure_bounds, measure_mc, parse_open_set, MeasureBounds, OpenSet};
use cdist::sampler::{render_on, BitTape, Fuel, Sampler};
use cdist::{CReal, Error, Rational};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};

#[derive(Debug, Parser)]
#[command(
    name = "cdist",
    version,
    about = "Exact computable distributions: sample, measure and condition λCD programs"
)]
pub struct Cli {
    /// Print a human-readable table instead of JSON lines.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Recursion and comparison fuel.
    #[arg(long, global = true, env = "CDIST_DEFAULT_FUEL", default_value_t = 64)]
    pub fuel: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the type of a program.
    Typecheck {
        #[command(flatten)]
        source: Source,
    },
    /// Draw samples, one record per seed.
    Sample {
        #[command(flatten)]
        source: Source,
        /// Number of consecutive seeds to run.
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, default_value_t = 10)]
        precision: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bound the probability of an open set.
    Measure {
        #[command(flatten)]
        source: Source,
        /// Open set such as `(0,1/2)`, `{1,2}` or `(0,1)*(0,1)`.
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 12)]
        prefix_bits: u32,
        #[arg(long, default_value_t = 10)]
        precision: u32,
        /// Use this many Monte Carlo samples instead of prefix enumeration.
        #[arg(long)]
        mc: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Failure probability of the Monte Carlo interval.
        #[arg(long, default_value = "1/100")]
        delta: String,
    },
    /// Condition a prior on an observation through a bounded density.
    Condition {
        /// Prior program of type `dist real` or `dist (real * τ)`.
        #[arg(long)]
        prior: PathBuf,
        /// `gaussian-noise(σ)`, `laplace-noise(b)` or `constant(c)`.
        #[arg(long)]
        density: String,
        /// Observed value, as a decimal or `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        observe: String,
        /// Report certified posterior bounds for this open set.
        #[arg(
            long,
            conflicts_with = "posterior_samples",
            required_unless_present = "posterior_samples"
        )]
        query_set: Option<String>,
        /// Draw this many posterior samples instead.
        #[arg(long)]
        posterior_samples: Option<u64>,
        #[arg(long, default_value_t = 12)]
        prefix_bits: u32,
        #[arg(long, default_value_t = 10)]
        precision: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Program file (`.lcd`).
    pub path: Option<PathBuf>,
    /// A registered primitive distribution, e.g. `stdUniform`.
    #[arg(long)]
    pub dist: Option<String>,
    /// Program text given inline.
    #[arg(long)]
    pub program: Option<String>,
}

/// A failure together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub body: Json,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Diverged(_) => "Diverged",
        Error::OutOfBits { .. } => "OutOfBits",
        Error::FastCauchyViolation { .. } => "FastCauchyViolation",
        Error::Domain(_) => "DomainError",
        Error::Mass(_) => "MassError",
        Error::DenominatorIndistinguishableFromZero { .. } => {
            "DenominatorIndistinguishableFromZero"
        }
        Error::Parse { .. } => "ParseError",
        Error::Type { .. } => "TypeError",
        Error::UnboundVariable(_) => "UnboundVariable",
        Error::IllFormedDistType(_) => "IllFormedDistType",
        Error::StuckTerm(_) => "StuckTerm",
        Error::Registration(_) => "RegistrationError",
        Error::InvalidArgument(_) => "InvalidArgument",
    }
}

fn is_static(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::Type { .. }
            | Error::UnboundVariable(_)
            | Error::IllFormedDistType(_)
            | Error::Registration(_)
            | Error::InvalidArgument(_)
    )
}

fn error_json(e: &Error) -> Json {
    let mut body = json!({ "error": error_kind(e), "message": e.to_string() });
    if let Error::Parse { line, col, .. } = e {
        body["line"] = json!(line);
        body["col"] = json!(col);
    }
    body
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if is_static(&e) { 1 } else { 2 },
            body: error_json(&e),
        }
    }
}

fn usage(msg: String) -> Failure {
    Failure {
        code: 1,
        body: json!({ "error": "Usage", "message": msg }),
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs a parsed command line, writing records to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> u8 {
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(f) => {
            if cli.pretty {
                let _ = writeln!(
                    out,
                    "error: {}",
                    f.body["message"].as_str().unwrap_or_default()
                );
            } else {
                let _ = writeln!(out, "{}", f.body);
            }
            if let Some(msg) = f.body["message"].as_str() {
                eprintln!("cdist: {msg}");
            }
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let fuel = Fuel::uniform(cli.fuel);
    match &cli.command {
        Command::Typecheck { source } => {
            let prog = load_any(source, fuel)?;
            let ty = prog.to_string();
            if cli.pretty {
                emit_line(out, &ty)
            } else {
                emit(out, &json!({ "type": ty }))
            }
        }
        Command::Sample {
            source,
            n,
            precision,
            seed,
        } => {
            let prog = load(source, fuel)?;
            let records: Vec<SampleLine> = (*seed..seed.saturating_add(*n))
                .map(|s| sample_line(&prog.sampler, s, *precision))
                .collect();
            write_samples(cli.pretty, out, &records)
        }
        Command::Measure {
            source,
            set,
            prefix_bits,
            precision,
            mc,
            seed,
            delta,
        } => {
            let prog = load(source, fuel)?;
            let set = parse_open_set(set).map_err(Failure::from)?;
            let b = match mc {
                Some(samples) => {
                    let delta = parse_rational(delta).map_err(Failure::from)?;
                    measure_mc(&prog.sampler, &set, *samples, *seed, *precision, &delta)?
                }
                None => measure_bounds(&prog.sampler, &set, *prefix_bits, *precision)?,
            };
            write_bounds(cli.pretty, out, &set, &b)
        }
        Command::Condition {
            prior,
            density,
            observe,
            query_set,
            posterior_samples,
            prefix_bits,
            precision,
            seed,
        } => {
            let prog = load(
                &Source {
                    path: Some(prior.clone()),
                    dist: None,
                    program: None,
                },
                fuel,
            )?;
            let d = first_coordinate(&parse_density(density)?, &prog.payload)?;
            let y = parse_observation(observe)?;
            match (query_set, posterior_samples) {
                (Some(set), _) => {
                    let set = parse_open_set(set)?;
                    let b =
                        posterior_bounds(&prog.sampler, &d, &y, &set, *prefix_bits, *precision)?;
                    write_bounds(cli.pretty, out, &set, &b)
                }
                (None, Some(n)) => {
                    let post = obs_dens(&prog.sampler, &d, &y, fuel);
                    let records: Vec<SampleLine> = (*seed..seed.saturating_add(*n))
                        .map(|s| sample_line(&post, s, *precision))
                        .collect();
                    write_samples(cli.pretty, out, &records)
                }
                (None, None) => Err(usage(
                    "one of --query-set or --posterior-samples is required".into(),
                )),
            }
        }
    }
}

fn read_source(source: &Source) -> std::result::Result<String, Failure> {
    match (&source.path, &source.dist, &source.program) {
        (Some(p), _, _) => std::fs::read_to_string(p).map_err(|e| Failure {
            code: 1,
            body: json!({ "error": "Io", "message": format!("{}: {e}", p.display()) }),
        }),
        (_, Some(name), _) => Ok(name.clone()),
        (_, _, Some(text)) => Ok(text.clone()),
        _ => Err(usage("give a program path, --dist or --program".into())),
    }
}

/// Parses and checks any program, returning its type.
fn load_any(source: &Source, fuel: Fuel) -> std::result::Result<Type, Failure> {
    let genv = default_global_env_with(fuel);
    let term = cdist::lang::parse_with(&read_source(source)?, &genv)?;
    Ok(cdist::lang::typecheck(&genv, &term)?)
}

fn load(source: &Source, fuel: Fuel) -> std::result::Result<Program, Failure> {
    let genv = default_global_env_with(fuel);
    Ok(compile(&read_source(source)?, &genv, fuel)?)
}

fn parse_observation(s: &str) -> std::result::Result<CReal, Failure> {
    let q = parse_decimal(s.trim()).map_or_else(|| parse_rational(s.trim()), Ok)?;
    Ok(CReal::from_rational(q))
}

/// Lifts a density on reals to samples whose first coordinate is real.
fn first_coordinate(
    d: &BndDens<CReal>,
    payload: &Type,
) -> std::result::Result<BndDens<LazyValue>, Failure> {
    let project: fn(Value) -> cdist::Result<CReal> = match payload {
        Type::Real => |v| v.into_real(),
        Type::Prod(a, _) if **a == Type::Real => |v| v.into_pair()?.0.force()?.into_real(),
        other => {
            return Err(usage(format!(
                "the prior must be dist real or dist (real * _), not dist {other}"
            )));
        }
    };
    let inner = d.clone();
    Ok(BndDens::new(
        d.name.clone(),
        move |v: &LazyValue, y: &CReal| inner.eval(&CReal::deferred(v.map(project)), y),
        d.bound.clone(),
        d.lipschitz.clone(),
    )?)
}

#[derive(Debug, Serialize)]
struct SampleLine {
    seed: u64,
    precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<String>,
    bits_read: usize,
    diverged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn sample_line(s: &Sampler<LazyValue>, seed: u64, precision: u32) -> SampleLine {
    let tape = BitTape::prng(seed);
    match render_on(s, &tape, precision) {
        Ok(r) => SampleLine {
            seed,
            precision,
            value: Some(r.value),
            radius: r.radius,
            bits_read: r.bits_read,
            diverged: false,
            error: None,
        },
        Err(e) => SampleLine {
            seed,
            precision,
            value: None,
            radius: None,
            bits_read: tape.bits_read(),
            diverged: e.is_partial(),
            error: Some(e.to_string()),
        },
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        body: json!({ "error": "Io", "message": e.to_string() }),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, v: &T) -> Outcome {
    let line = serde_json::to_string(v).map_err(|e| usage(e.to_string()))?;
    writeln!(out, "{line}").map_err(io)
}

fn emit_line(out: &mut dyn Write, s: &str) -> Outcome {
    writeln!(out, "{s}").map_err(io)
}

fn write_samples(pretty: bool, out: &mut dyn Write, records: &[SampleLine]) -> Outcome {
    if !pretty {
        return records.iter().try_for_each(|r| emit(out, r));
    }
    emit_line(
        out,
        &format!(
            "{:>6}  {:<28}  {:<12}  {:>5}",
            "seed", "value", "radius", "bits"
        ),
    )?;
    for r in records {
        let value = match (&r.value, &r.error) {
            (Some(v), _) => v.clone(),
            (None, Some(e)) => format!("<{e}>"),
            (None, None) => "<none>".into(),
        };
        let radius = r.radius.clone().unwrap_or_else(|| "-".into());
        emit_line(
            out,
            &format!(
                "{:>6}  {:<28}  {:<12}  {:>5}",
                r.seed, value, radius, r.bits_read
            ),
        )?;
    }
    Ok(())
}

fn approx(q: &Rational) -> String {
    format!("{} (~{:.6})", format_rational(q), to_f64(q))
}

fn write_bounds(pretty: bool, out: &mut dyn Write, set: &OpenSet, b: &MeasureBounds) -> Outcome {
    if !pretty {
        let mut body = serde_json::to_value(b).map_err(|e| usage(e.to_string()))?;
        body["set"] = json!(set.to_string());
        return emit(out, &body);
    }
    emit_line(out, &format!("set        {set}"))?;
    emit_line(out, &format!("lower      {}", approx(&b.lower)))?;
    emit_line(out, &format!("upper      {}", approx(&b.upper)))?;
    emit_line(out, &format!("width      {}", approx(&b.width())))?;
    match b.samples {
        Some(n) => emit_line(out, &format!("samples    {n}"))?,
        None => emit_line(out, &format!("prefixes   2^{}", b.prefix_bits))?,
    }
    let t = &b.tally;
    emit_line(
        out,
        &format!(
            "tally      inside {} outside {} straddle {} failed {}",
            t.inside, t.outside, t.straddle, t.failed
        ),
    )
}
