use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use weyl_ct::arith::{qt, CommPoly, Field, PrimeField, RatFunField, Rationals, QT};
use weyl_ct::extension::{build_extension, ParametricPresentation, DEFAULT_ELL_CEILING};
use weyl_ct::format::{parse_operator, print_operator, FieldSpec, OperatorDocument};
use weyl_ct::groebner::buchberger;
use weyl_ct::kregular::{
    count_regular_graphs, scalar_product_series, verify_ode_on_series, ScalarProductInput,
};
use weyl_ct::reduction::ReductionContext;
use weyl_ct::telescoping::{
    confine, telescope_modular, telescope_relation, ConfineOptions, DerivedPresentation, ModularConfig,
    Telescoper, DEFAULT_DEGREE_CEILING,
};
use weyl_ct::weyl::{Monomial, Op, WeylAlgebra};
use weyl_ct::Error;

#[derive(Parser)]
#[command(name = "weyl-ct", version, about = "Creative telescoping by reduction in Weyl algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduced left Gröbner basis of the [generators] section.
    Gb { input: PathBuf },
    /// [a] for each line of [input], or [a]_η with --eta.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        eta: Option<String>,
    },
    /// Echelon basis of E_≤η.
    EtaBasis {
        input: PathBuf,
        #[arg(long)]
        eta: String,
    },
    /// Confinement (η, B) of the integrand.
    Confine {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        rho: u32,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CEILING)]
        degree_ceiling: u32,
    },
    /// Telescoper of a presentation.
    Telescope {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Telescoper for k-regular graphs.
    Kregular(KregularArgs),
    /// Checks that a telescoper annihilates a truncated series.
    VerifySeries {
        #[arg(long)]
        operator: PathBuf,
        /// One rational coefficient per line, starting at t^0.
        #[arg(long, conflicts_with = "k")]
        series: Option<PathBuf>,
        /// Use the k-regular scalar-product series instead of a file.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 12)]
        terms: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, env = "WEYLCT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    rho: u32,
    /// Exact computation over Q(t).
    #[arg(long, conflicts_with = "modular")]
    direct: bool,
    /// Evaluation and interpolation modulo primes (the default).
    #[arg(long)]
    modular: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 64)]
    max_primes: usize,
    /// Evaluation points allowed per prime.
    #[arg(long, default_value_t = 4096)]
    point_budget: usize,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CEILING)]
    degree_ceiling: u32,
    /// Where to write the JSON metrics record (stderr otherwise).
    #[arg(long)]
    metrics: Option<PathBuf>,
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Where to write the telescoper (stdout otherwise).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct KregularArgs {
    #[arg(long)]
    k: Option<usize>,
    /// Only "ll,se" is built in; other models go through --fg.
    #[arg(long, default_value = "ll,se")]
    model: String,
    /// Document with vars p1..pk, field Q and one-line sections [f] and [g].
    #[arg(long)]
    fg: Option<PathBuf>,
    /// Verify the output against the scalar-product series to this order.
    #[arg(long)]
    series_check: Option<usize>,
    /// Compare the series with brute-force counts up to this many vertices.
    #[arg(long)]
    count_check: Option<usize>,
    #[command(flatten)]
    run: RunArgs,
}

enum Failure {
    Core(Error),
    Io(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::BudgetExhausted(_) | Error::DegreeCeiling(_) | Error::NotEnoughPoints { .. } => 3,
        Error::Inconsistent(_) | Error::UnluckyTracer | Error::Unlucky => 4,
        _ => 1,
    }
}

macro_rules! with_field {
    ($spec:expr, $f:ident ( $($arg:expr),* )) => {
        match $spec {
            FieldSpec::Q => $f(Rationals, $($arg),*),
            FieldSpec::QT => $f(qt(), $($arg),*),
            FieldSpec::Fp(p) => $f(PrimeField::new(p), $($arg),*),
            FieldSpec::FpT(p) => $f(RatFunField::new(PrimeField::new(p)), $($arg),*),
        }
    };
}

fn parse_monomial<K: Field>(alg: &WeylAlgebra<K>, names: &[String], text: &str) -> CliResult<Monomial> {
    let op = parse_operator(alg, names, text)?;
    match op.terms() {
        [(m, c)] if alg.field().is_one(c) => Ok(m.clone()),
        _ => Err(Error::Parse {
            pos: 0,
            msg: format!("'{text}' is not a monomial"),
        }
        .into()),
    }
}

fn cmd_gb<K: Field>(k: K, doc: &OperatorDocument) -> CliResult<String> {
    let alg = doc.spec.algebra(k)?;
    let gens = doc.operators(&alg, "generators")?;
    let gb = buchberger(&alg, &gens);
    let mut out = OperatorDocument::new(doc.spec.clone());
    out.push_operators(&alg, "basis", gb.generators());
    Ok(out.to_text())
}

fn context<K: Field>(alg: &WeylAlgebra<K>, doc: &OperatorDocument) -> CliResult<ReductionContext<K>> {
    let gens = doc.operators(alg, "generators")?;
    Ok(ReductionContext::new(buchberger(alg, &gens))?)
}

fn cmd_reduce<K: Field>(k: K, doc: &OperatorDocument, eta: Option<&str>) -> CliResult<String> {
    let alg = doc.spec.algebra(k)?;
    let ctx = context(&alg, doc)?;
    let inputs = doc.operators(&alg, "input")?;
    let reduced: Vec<Op<K>> = match eta {
        None => inputs.iter().map(|a| ctx.reduced_form(a)).collect(),
        Some(text) => {
            let eta = parse_monomial(&alg, &doc.spec.names, text)?;
            let basis = ctx.compute_eta_basis(&eta, None, false)?;
            inputs.iter().map(|a| ctx.reduce_eta(a, &basis)).collect()
        }
    };
    let mut out = OperatorDocument::new(doc.spec.clone());
    out.push_operators(&alg, "reduced", &reduced);
    Ok(out.to_text())
}

fn cmd_eta_basis<K: Field>(k: K, doc: &OperatorDocument, eta: &str) -> CliResult<String> {
    let alg = doc.spec.algebra(k)?;
    let ctx = context(&alg, doc)?;
    let eta = parse_monomial(&alg, &doc.spec.names, eta)?;
    let basis = ctx.compute_eta_basis(&eta, None, false)?;
    let mut out = OperatorDocument::new(doc.spec.clone());
    out.push_operators(&alg, "eta-basis", &basis.operators());
    Ok(out.to_text())
}

/// The presentation of a document: either `W_x(t)^r/S` with `[lambda]`, or a
/// `W_{t,x}` presentation with `dt = yes` that goes through scalar extension.
fn presentation<K: Field>(k: K, doc: &OperatorDocument) -> CliResult<(DerivedPresentation<K>, Vec<String>)> {
    let names = &doc.spec.names;
    if doc.spec.dt {
        let alg = doc.spec.algebra(k)?;
        let gens = doc.operators(&alg, "generators")?;
        let ext = build_extension(&ParametricPresentation::new(alg, gens)?, DEFAULT_ELL_CEILING)?;
        let f = match doc.section("integrand") {
            Some(lines) if !lines.is_empty() => parse_operator(&ext.target, names, &lines[0])?,
            _ => ext.target.unit(0),
        };
        let note = vec![format!("scalar extension: ell = {}, r = {}", ext.ell, ext.r)];
        return Ok((ext.presentation(f)?, note));
    }
    let alg = doc.spec.algebra(k)?;
    let gens = doc.operators(&alg, "generators")?;
    let lambda = doc.rows(&alg, "lambda")?;
    let f = match doc.section("integrand") {
        Some(lines) if !lines.is_empty() => parse_operator(&alg, names, &lines[0])?,
        _ if alg.rank() == 1 => alg.one(),
        _ => return Err(Error::Invalid("rank > 1 needs an [integrand] section".into()).into()),
    };
    Ok((DerivedPresentation::new(alg, gens, lambda, f)?, Vec::new()))
}

fn print_monomial<K: Field>(alg: &WeylAlgebra<K>, names: &[String], m: &Monomial) -> String {
    print_operator(alg, names, &alg.monomial(m.clone()))
}

fn cmd_confine<K: Field>(k: K, doc: &OperatorDocument, rho: u32, ceiling: u32) -> CliResult<String> {
    let (pres, _) = presentation(k, doc)?;
    let alg = pres.algebra();
    let names = &doc.spec.names;
    let conf = confine(&pres, rho, &ConfineOptions { degree_ceiling: ceiling })?;
    let support: Vec<String> = conf.support.iter().map(|m| print_monomial(alg, names, m)).collect();
    let trace: Vec<String> = conf.trace.iter().map(|s| s.to_string()).collect();
    let scalar = alg.with_rank(1)?;
    let row = |v: &[K::Elem]| -> String {
        v.iter()
            .map(|c| print_operator(&scalar, names, &scalar.constant(c.clone())))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = format!(
        "eta = {}\nsupport = {}\ntrace = {}\n[initial]\n{}\n[images]\n",
        print_monomial(alg, names, &conf.eta),
        support.join(", "),
        trace.join(", "),
        row(&conf.initial)
    );
    for r in &conf.images {
        out.push_str(&row(r));
        out.push('\n');
    }
    Ok(out)
}

struct Report {
    telescoper: Telescoper,
    gb_seconds: f64,
    telescope_seconds: f64,
    transcript: Vec<String>,
}

fn run_telescope(pres: &DerivedPresentation<QT>, run: &RunArgs, names: &[String]) -> CliResult<Report> {
    let t0 = Instant::now();
    let _ = pres.context();
    let gb_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let mut transcript = vec![format!("seed {}", run.seed)];
    let alg = pres.algebra();
    let telescoper = if run.direct {
        let opts = ConfineOptions {
            degree_ceiling: run.degree_ceiling,
        };
        let (conf, rel) = telescope_relation(pres, run.rho, &opts)?;
        transcript.push(format!(
            "direct: eta {}, |B| = {}, trace {:?}",
            print_monomial(alg, names, &conf.eta),
            conf.support.len(),
            conf.trace
        ));
        Telescoper::from_rational(&rel)?
    } else {
        let cfg = ModularConfig {
            seed: run.seed,
            rho: run.rho,
            workers: run.workers.max(1),
            max_primes: run.max_primes,
            max_points: run.point_budget,
            degree_ceiling: run.degree_ceiling,
            ..ModularConfig::default()
        };
        let out = telescope_modular(pres, &cfg)?;
        transcript.extend(out.transcript);
        out.telescoper
    };
    Ok(Report {
        telescoper,
        gb_seconds,
        telescope_seconds: t1.elapsed().as_secs_f64(),
        transcript,
    })
}

fn emit(report: &Report, run: &RunArgs) -> CliResult<()> {
    let metrics = json!({
        "gb_seconds": report.gb_seconds,
        "telescope_seconds": report.telescope_seconds,
        "order": report.telescoper.order(),
        "degree": report.telescoper.degree(),
        "mode": if run.direct { "direct" } else { "modular" },
        "seed": run.seed,
    })
    .to_string();
    let doc = report.telescoper.to_document();
    match &run.output {
        Some(p) => write(p, &doc)?,
        None => print!("{doc}"),
    }
    match &run.metrics {
        Some(p) => write(p, &format!("{metrics}\n"))?,
        None => eprintln!("{metrics}"),
    }
    if let Some(p) = &run.transcript {
        write(p, &(report.transcript.join("\n") + "\n"))?;
    }
    Ok(())
}

fn cmd_telescope(input: &Path, run: &RunArgs) -> CliResult<()> {
    let doc = OperatorDocument::parse(&read(input)?)?;
    if doc.spec.field != FieldSpec::QT {
        return Err(Error::Invalid("telescope needs field = Q(t)".into()).into());
    }
    let (pres, note) = presentation(qt(), &doc)?;
    let mut report = run_telescope(&pres, run, &doc.spec.names)?;
    report.transcript.splice(0..0, note);
    emit(&report, run)
}

fn commutative(op: &Op<Rationals>) -> CliResult<CommPoly> {
    let mut p = CommPoly::zero(op.terms().first().map_or(0, |(m, _)| m.n()));
    for (m, c) in op.terms() {
        if !m.is_d_free() {
            return Err(Error::Invalid("f and g must be free of derivatives".into()).into());
        }
        let e: Vec<u32> = m.alpha().iter().map(|&x| u32::from(x)).collect();
        p = p.add(&CommPoly::term(e.len(), e, c.clone()));
    }
    Ok(p)
}

fn read_fg(path: &Path) -> CliResult<(CommPoly, CommPoly)> {
    let doc = OperatorDocument::parse(&read(path)?)?;
    let alg = doc.spec.algebra(Rationals)?;
    let n = alg.n();
    let one = |name: &str| -> CliResult<CommPoly> {
        let ops = doc.operators(&alg, name)?;
        match ops.as_slice() {
            [op] if op.is_zero() => Ok(CommPoly::zero(n)),
            [op] => commutative(op),
            _ => Err(Error::Invalid(format!("section [{name}] must hold one expression")).into()),
        }
    };
    Ok((one("f")?, one("g")?))
}

fn cmd_kregular(a: &KregularArgs) -> CliResult<()> {
    let inp = match (&a.fg, a.k) {
        (Some(path), _) => {
            let (f, g) = read_fg(path)?;
            ScalarProductInput::new(f, g)?
        }
        (None, Some(k)) => {
            if a.model.replace(' ', "") != "ll,se" {
                return Err(Error::Invalid(format!("model '{}' is not built in; use --fg", a.model)).into());
            }
            ScalarProductInput::model(k)?
        }
        (None, None) => return Err(Error::Invalid("give --k or --fg".into()).into()),
    };
    let names: Vec<String> = (1..=inp.k()).map(|i| format!("p{i}")).collect();
    if let Some(n) = a.count_check {
        if a.fg.is_some() {
            return Err(Error::Invalid("--count-check applies to the built-in model".into()).into());
        }
        let s = scalar_product_series(&inp.f, &inp.g, n)?;
        let mut fact = BigInt::from(1);
        for (m, c) in s.iter().enumerate() {
            if m > 0 {
                fact *= m;
            }
            let count = count_regular_graphs(inp.k(), m)?;
            if c * BigRational::from_integer(fact.clone()) != BigRational::from_integer(count.into()) {
                return Err(Failure::Check(format!("series and count disagree at n = {m}")));
            }
        }
        eprintln!("count check passed up to n = {n}");
    }
    let pres = inp.presentation()?;
    let report = run_telescope(&pres, &a.run, &names)?;
    if let Some(n) = a.series_check {
        let s = scalar_product_series(&inp.f, &inp.g, n)?;
        if !verify_ode_on_series(&report.telescoper, &s)? {
            return Err(Failure::Check(format!("telescoper does not annihilate the series to t^{n}")));
        }
        eprintln!("series check passed to t^{n}");
    }
    emit(&report, &a.run)
}

fn cmd_verify_series(operator: &Path, series: Option<&Path>, k: Option<usize>, terms: usize) -> CliResult<()> {
    let p = Telescoper::from_document(&read(operator)?)?;
    let s: Vec<BigRational> = match (series, k) {
        (Some(path), _) => read(path)?
            .lines()
            .map(|l| l.split('#').next().unwrap().trim())
            .filter(|l| !l.is_empty())
            .enumerate()
            .map(|(i, l)| {
                l.parse::<BigRational>().map_err(|e| {
                    Failure::Core(Error::Parse {
                        pos: i,
                        msg: format!("coefficient {i}: {e}"),
                    })
                })
            })
            .collect::<CliResult<_>>()?,
        (None, Some(k)) => {
            let inp = ScalarProductInput::model(k)?;
            scalar_product_series(&inp.f, &inp.g, terms)?
        }
        (None, None) => return Err(Error::Invalid("give --series or --k".into()).into()),
    };
    if verify_ode_on_series(&p, &s)? {
        println!("annihilated through t^{}", s.len() - 1 - p.order());
        Ok(())
    } else {
        Err(Failure::Check("the series is not annihilated".into()))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Cmd::Gb { input } => {
            let doc = OperatorDocument::parse(&read(&input)?)?;
            print!("{}", with_field!(doc.spec.field, cmd_gb(&doc))?);
        }
        Cmd::Reduce { input, eta } => {
            let doc = OperatorDocument::parse(&read(&input)?)?;
            print!("{}", with_field!(doc.spec.field, cmd_reduce(&doc, eta.as_deref()))?);
        }
        Cmd::EtaBasis { input, eta } => {
            let doc = OperatorDocument::parse(&read(&input)?)?;
            print!("{}", with_field!(doc.spec.field, cmd_eta_basis(&doc, &eta))?);
        }
        Cmd::Confine {
            input,
            rho,
            degree_ceiling,
        } => {
            let doc = OperatorDocument::parse(&read(&input)?)?;
            print!("{}", with_field!(doc.spec.field, cmd_confine(&doc, rho, degree_ceiling))?);
        }
        Cmd::Telescope { input, run } => cmd_telescope(&input, &run)?,
        Cmd::Kregular(a) => cmd_kregular(&a)?,
        Cmd::VerifySeries {
            operator,
            series,
            k,
            terms,
        } => cmd_verify_series(&operator, series.as_deref(), k, terms)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
