//! Command-line frontend: every analysis emits one JSON document on
//! standard output; diagnostics and progress stay on standard error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use dworklab::analysis;
use dworklab::center;
use dworklab::counterexample as cx;
use dworklab::expsum;
use dworklab::parse::{parse_form, print_form};
use dworklab::poly::{FieldElem, Form};

#[derive(Parser)]
#[command(
    name = "dworklab",
    about = "Workbench for Dwork-regular forms, prime-field exponential sums, \
             and dispersive maximal-operator counterexample constructions",
    version
)]
struct Cli {
    /// Seed for all randomized searches (idempotent search, sampling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = machine parallelism).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Directory for sum-table caches (also via DWORKLAB_CACHE).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormArg {
    /// Form in the text grammar, e.g. "x1^3 + x1*x2^2".
    #[arg(long)]
    form: String,
    /// Ambient variable count (default: largest index used).
    #[arg(long)]
    nvars: Option<usize>,
}

impl FormArg {
    fn parse(&self) -> Result<Form, CliError> {
        Ok(parse_form(&self.form, self.nvars)?)
    }
}

#[derive(Args)]
struct TripleArg {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    r: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Intertwining rank, per-variable sets, witness and relabeling.
    Rank(FormArg),
    /// Dwork regularity over Q or over F_q with the failing subset.
    DworkCheck {
        #[command(flatten)]
        form: FormArg,
        /// Check the reduction modulo this prime instead of over Q.
        #[arg(long, value_name = "q")]
        modulus: Option<u64>,
    },
    /// Projective nonsingularity over Q or over F_q.
    Nonsingular {
        #[command(flatten)]
        form: FormArg,
        #[arg(long, value_name = "q")]
        modulus: Option<u64>,
    },
    /// Classify primes up to a bound by regularity of the reduction.
    BadPrimes {
        #[command(flatten)]
        form: FormArg,
        #[arg(long)]
        q_max: u64,
    },
    /// Fix leading variables over F_q and certify the Deligne conditions.
    DeligneSpecialize {
        #[command(flatten)]
        form: FormArg,
        #[arg(long, value_name = "q")]
        modulus: u64,
        /// Comma-separated values for x1..xr.
        #[arg(long, value_delimiter = ',')]
        fix: Vec<i64>,
    },
    /// Basis and dimension of the matrix center.
    Center(FormArg),
    /// Decomposability verdict through center idempotents.
    Decompose(FormArg),
    /// Emit the explicit Dwork-regular family of given rank.
    Examples(TripleArg),
    /// Codimensions of the rank classes in the moduli space.
    Codim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
    },
    /// Threshold increment delta(n,k,r) and the regularity threshold.
    Delta(TripleArg),
    /// Scan all complete sums of a form modulo q; caches and summarizes.
    ExpsumTable {
        #[command(flatten)]
        form: FormArg,
        #[arg(long, value_name = "q")]
        modulus: u64,
    },
    /// Extract pairs with square-root-size sums and check their density.
    GoodPairs {
        #[command(flatten)]
        form: FormArg,
        #[arg(long, value_name = "q")]
        modulus: u64,
        /// Lower constant alpha1 as a rational, default 1/2.
        #[arg(long)]
        alpha1: Option<String>,
        /// Density constant alpha2 as a rational, default (1/8)(k-1)^(-2m).
        #[arg(long)]
        alpha2: Option<String>,
        /// Include the full pair list in the output.
        #[arg(long)]
        emit_pairs: bool,
    },
    /// Closed-form exponents sigma, kappa, lambda with relation checks.
    Params(TripleArg),
    /// Build the box set for an instance and report its measures.
    Boxes {
        #[arg(long)]
        config: PathBuf,
        /// Dyadic exponent; defaults to each entry of the config j_list.
        #[arg(long)]
        j: Option<u64>,
    },
    /// Certify the lattice-sum lower bound at sampled good box points.
    LowerBound {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        j: Option<u64>,
        /// Explicit instance R,L,Q,S1 (overrides --j).
        #[arg(long, value_delimiter = ',')]
        explicit: Option<Vec<f64>>,
        /// Good pairs tested per prime.
        #[arg(long, default_value_t = 3)]
        max_pairs: usize,
    },
    /// Ratio experiment along R = 2^j.
    Growth {
        #[arg(long)]
        config: PathBuf,
        /// Regularity s; defaults to the config value.
        #[arg(long)]
        s: Option<f64>,
    },
}

// ---------------------------------------------------------------------------

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Parse(#[from] dworklab::parse::ParseError),
    #[error(transparent)]
    Poly(#[from] dworklab::poly::PolyError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Center(#[from] center::CenterError),
    #[error(transparent)]
    ExpSum(#[from] expsum::ExpSumError),
    #[error(transparent)]
    Cx(#[from] cx::CxError),
    #[error("{0}")]
    Other(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Throttled progress lines on standard error, at most one per second.
struct Progress {
    last: Option<Instant>,
}

impl Progress {
    fn new() -> Self {
        Progress { last: None }
    }

    fn tick(&mut self, msg: &str) {
        let now = Instant::now();
        let due = self
            .last
            .is_none_or(|t| now.duration_since(t) >= Duration::from_secs(1));
        if due {
            eprintln!("{msg}");
            self.last = Some(now);
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    let parts: Vec<&str> = text.split('/').collect();
    let bad = || CliError::Other(format!("bad rational `{text}`"));
    match parts.as_slice() {
        [n] => Ok(BigRational::from_integer(
            n.trim().parse::<BigInt>().map_err(|_| bad())?,
        )),
        [n, d] => Ok(BigRational::new(
            n.trim().parse::<BigInt>().map_err(|_| bad())?,
            d.trim().parse::<BigInt>().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

fn cache_dir(cli: &Cli) -> PathBuf {
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os("DWORKLAB_CACHE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("./.dworklab"))
}

fn emit(value: Value) {
    // A closed pipe (e.g. piping into `head`) is a normal way to stop
    // reading; exit quietly instead of panicking.
    let mut out = std::io::stdout().lock();
    let result = serde_json::to_writer_pretty(&mut out, &value)
        .map_err(std::io::Error::from)
        .and_then(|()| writeln!(out));
    if let Err(e) = result {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("warning: thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(value) => {
            emit(value);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    match &cli.command {
        Command::Rank(arg) => {
            let f = arg.parse()?;
            let report = analysis::intertwining_rank(&f)?;
            Ok(report.to_json())
        }
        Command::DworkCheck { form, modulus } => {
            let f = form.parse()?;
            let verdict = match modulus {
                None => analysis::is_dwork_regular_q(&f)?,
                Some(q) => analysis::is_dwork_regular_fq(&f.reduce_mod(*q)?)?,
            };
            Ok(verdict.to_json())
        }
        Command::Nonsingular { form, modulus } => {
            let f = form.parse()?;
            let value = match modulus {
                None => analysis::is_nonsingular_q(&f)?,
                Some(q) => analysis::is_nonsingular_fq(&f.reduce_mod(*q)?)?,
            };
            Ok(json!({ "nonsingular": value, "modulus": modulus }))
        }
        Command::BadPrimes { form, q_max } => {
            let f = form.parse()?;
            let report = analysis::bad_primes(&f, *q_max)?;
            Ok(report.to_json())
        }
        Command::DeligneSpecialize { form, modulus, fix } => {
            let f = form.parse()?.reduce_mod(*modulus)?;
            let values: Vec<FieldElem> = fix
                .iter()
                .map(|&c| FieldElem::new(c, *modulus))
                .collect::<Result<_, _>>()?;
            let (deligne, lead) = analysis::deligne_after_specialization(&f, &values)?;
            let lead_text: Vec<String> = lead.terms().map(|(m, c)| format!("{c}*{m:?}")).collect();
            Ok(json!({
                "deligne": deligne,
                "modulus": modulus,
                "fixed": fix,
                "leading_form": lead_text,
            }))
        }
        Command::Center(arg) => {
            let f = arg.parse()?;
            Ok(center::compute_center(&f)?.to_json())
        }
        Command::Decompose(arg) => {
            let f = arg.parse()?;
            Ok(center::decide_decomposability(&f, cli.seed)?.to_json())
        }
        Command::Examples(t) => {
            let f = analysis::generate_example(t.n, t.k, t.r)?;
            Ok(json!({
                "n": t.n, "k": t.k, "r": t.r,
                "form": print_form(&f),
            }))
        }
        Command::Codim { n, k } => {
            let (high, low) = analysis::codimensions(*n, *k)?;
            Ok(json!({
                "n": n, "k": k,
                "codim_rank_below_n": high.to_string(),
                "codim_rank_one": low.to_string(),
            }))
        }
        Command::Delta(t) => {
            let delta = analysis::delta_threshold(t.n, t.k, t.r)?;
            let threshold = BigRational::new(BigInt::from(1), BigInt::from(4)) + &delta;
            let corollary = analysis::corollary_threshold(t.n, t.k)?;
            Ok(json!({
                "delta": delta.to_string(),
                "s_threshold": threshold.to_string(),
                "decomposable_threshold": corollary.to_string(),
            }))
        }
        Command::ExpsumTable { form, modulus } => {
            let reduced = form.parse()?.reduce_mod(*modulus)?;
            let dir = cache_dir(cli);
            let table = expsum::load_or_scan(Some(&dir), &reduced, 1 << 31)?;
            expsum::check_table(&table)?;
            Ok(json!({
                "q": table.q,
                "m": table.m,
                "degree": table.degree,
                "entries": table.len(),
                "parseval_relative_defect": table.parseval_defect(),
                "weil_excess": table.weil_excess(),
                "conjugate_symmetry_defect": table.conjugate_symmetry_defect(),
                "cache_dir": dir,
            }))
        }
        Command::GoodPairs {
            form,
            modulus,
            alpha1,
            alpha2,
            emit_pairs,
        } => {
            let reduced = form.parse()?.reduce_mod(*modulus)?;
            let dir = cache_dir(cli);
            let table = expsum::load_or_scan(Some(&dir), &reduced, 1 << 31)?;
            let a1 = match alpha1 {
                Some(t) => parse_rational(t)?,
                None => BigRational::new(BigInt::from(1), BigInt::from(2)),
            };
            let a2 = match alpha2 {
                Some(t) => parse_rational(t)?,
                None => expsum::default_alpha2(table.degree, table.m),
            };
            let set = expsum::good_pairs(&table, &a1, &a2)?;
            let mut doc = json!({
                "q": set.q,
                "m": set.m,
                "degree": set.degree,
                "alpha1": a1.to_string(),
                "alpha2": a2.to_string(),
                "count": set.count(),
                "required": set.required,
            });
            if *emit_pairs {
                let pairs: Vec<Value> = set
                    .pairs(&table)
                    .map(|(a, b)| json!({ "a": a, "b": b }))
                    .collect();
                doc["pairs"] = Value::Array(pairs);
            }
            Ok(doc)
        }
        Command::Params(t) => {
            let plan = cx::solve_parameters(t.n, t.k, t.r)?;
            Ok(plan.to_json())
        }
        Command::Boxes { config, j } => {
            let cfg = cx::parse_config(&std::fs::read_to_string(config)?)?;
            let plan = cx::solve_parameters(cfg.n, cfg.k, cfg.r)?;
            let (pk, witness) = cx::prepare_form(cfg.n, cfg.k, cfg.r, &cfg.form, cfg.b_max)?;
            let dir = cache_dir(cli);
            let js: Vec<u64> = match j {
                Some(v) => vec![*v],
                None => cfg.j_list.clone(),
            };
            let mut progress = Progress::new();
            let mut docs = Vec::new();
            for jj in js {
                progress.tick(&format!("boxes: j = {jj}"));
                let inst = cx::feasible_instance(&plan, cx::InstanceSpec::Progression { j: jj })?;
                let set =
                    cx::build_boxes(&inst, &pk, &witness, &cfg.constants, Some(&dir), cli.seed)?;
                let star = cx::omega_star(&inst, &pk, &witness, &cfg.constants, set.union_measure);
                let mut doc = set.to_json();
                doc["instance"] = inst.to_json();
                doc["omega_star"] = star.to_json();
                docs.push(doc);
            }
            Ok(Value::Array(docs))
        }
        Command::LowerBound {
            config,
            j,
            explicit,
            max_pairs,
        } => {
            let cfg = cx::parse_config(&std::fs::read_to_string(config)?)?;
            let plan = cx::solve_parameters(cfg.n, cfg.k, cfg.r)?;
            let (pk, witness) = cx::prepare_form(cfg.n, cfg.k, cfg.r, &cfg.form, cfg.b_max)?;
            let dir = cache_dir(cli);
            let spec = match (explicit, j) {
                (Some(v), _) if v.len() == 4 => cx::InstanceSpec::Explicit {
                    r: v[0],
                    l: v[1],
                    q: v[2],
                    s1: v[3],
                },
                (Some(_), _) => {
                    return Err(CliError::Other("--explicit needs R,L,Q,S1".into()));
                }
                (None, Some(jj)) => cx::InstanceSpec::Progression { j: *jj },
                (None, None) => {
                    let jj = *cfg.j_list.first().ok_or_else(|| {
                        CliError::Other("need --j, --explicit, or a j_list in the config".into())
                    })?;
                    cx::InstanceSpec::Progression { j: jj }
                }
            };
            let inst = cx::feasible_instance(&plan, spec)?;
            let set = cx::build_boxes(&inst, &pk, &witness, &cfg.constants, Some(&dir), cli.seed)?;
            let nr = inst.dims() as f64;
            let mut progress = Progress::new();
            let mut reports = Vec::new();
            let mut all_certified = true;
            for &q in &set.primes {
                progress.tick(&format!("lower-bound: prime {q}"));
                let half_trail = cfg.constants.c5 * (q as f64).powf(-1.0 - 1.0 / nr);
                // A wrapped box appears as several pieces; sample distinct pairs.
                let mut seen = std::collections::BTreeSet::new();
                let sample: Vec<_> = set
                    .boxes
                    .iter()
                    .filter(|b| b.q == q && seen.insert((b.a, b.b.clone())))
                    .take(*max_pairs)
                    .collect();
                for b in sample {
                    for offsets in [
                        vec![0.0; inst.dims()],
                        vec![half_trail; inst.dims()],
                        vec![-half_trail; inst.dims()],
                    ] {
                        let rep = cx::lower_bound_chain(
                            &inst,
                            &pk,
                            &witness,
                            &cfg.constants,
                            q,
                            b.a,
                            &b.b,
                            &offsets,
                        )?;
                        all_certified &=
                            rep.certified && rep.error_within_half_main && rep.main_above_floor;
                        reports.push(rep.to_json());
                    }
                }
            }
            Ok(json!({
                "instance": inst.to_json(),
                "all_certified": all_certified,
                "points": reports,
            }))
        }
        Command::Growth { config, s } => {
            let cfg = cx::parse_config(&std::fs::read_to_string(config)?)?;
            let plan = cx::solve_parameters(cfg.n, cfg.k, cfg.r)?;
            let (pk, witness) = cx::prepare_form(cfg.n, cfg.k, cfg.r, &cfg.form, cfg.b_max)?;
            let s_value = s
                .or(cfg.s)
                .ok_or_else(|| CliError::Other("need --s or an `s` entry in the config".into()))?;
            let dir = cache_dir(cli);
            let mut progress = Progress::new();
            let mut rows = Vec::new();
            for &jj in &cfg.j_list {
                progress.tick(&format!("growth: j = {jj}"));
                rows.push(cx::growth_row(
                    &plan,
                    &pk,
                    &witness,
                    jj,
                    s_value,
                    &cfg.constants,
                    Some(&dir),
                    cli.seed,
                ));
            }
            let report = cx::summarize_growth(&plan, s_value, rows);
            Ok(report.to_json())
        }
    }
}
