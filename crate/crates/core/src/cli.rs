//! The `cwlab` command line. Report bodies go to stdout and depend only on
//! the arguments; a `#`-prefixed header with timing goes to stderr.
//!
//! Exit codes: 0 pass or vacuous, 1 input error, 2 violation, 3 budget.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::affine::AffineSubspace;
use crate::campaign::{self, SuiteConfig, CRITERIA_CSV_HEADER};
use crate::constructions::{
    example_one_detailed, example_two, norm_form, random_homogeneous_system, random_system, Construction,
    ConstructionRecipe, Kind,
};
use crate::counter::{Counter, Region, DEFAULT_BUDGET};
use crate::error::Error;
use crate::ff::FieldSpec;
use crate::format::{parse_sub, parse_sys, write_sys, SysFile};
use crate::geometry::{conjecture_scan, estimate_dimension, linear_factor_test, ScanConfig, SCAN_HEADER};
use crate::poly::default_names;
use crate::rng::SplitMix64;
use crate::theorems::{
    audit_lower_bounds, check_congruence, lemma1_witness, lemma2_exhaustive, verify_homogenization_identity,
    CheckOptions, Law, LawReport, Lemma2Part, Scope, Status, SubsetMode,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cwlab", version, about = "Zero counts and Chevalley-Warning type checks over finite fields")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Largest number of points a single count may scan.
    #[arg(long, global = true, env = "CWLAB_BUDGET")]
    pub budget: Option<u128>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutFormat>,
    /// Seed for every randomized scope.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count zeros over A^n, a subspace, or an extension field.
    Count {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        subspace: Option<PathBuf>,
        /// Count over F_{q^s} instead.
        #[arg(long, conflicts_with = "subspace")]
        ext: Option<u32>,
    },
    /// Check one congruence law.
    Check {
        #[arg(long)]
        system: PathBuf,
        /// chevalley | ax | warning-hyperplanes | theorem1 | homogenization
        #[arg(long)]
        law: String,
        /// Every direction space (up to --max-directions, then a seeded sample).
        #[arg(long, conflicts_with = "sample")]
        all_pairs: bool,
        #[arg(long, default_value_t = 10_000)]
        max_directions: u128,
        /// Seeded random direction spaces per dimension.
        #[arg(long)]
        sample: Option<u64>,
        /// Only subspaces of this dimension.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Audit the lower bounds for a nonempty zero set.
    Audit {
        #[arg(long)]
        system: PathBuf,
    },
    /// Build a named system; writes <out> and the .recipe.json next to it.
    Construct {
        /// norm-form | example1 | example2 | random | random-homogeneous
        kind: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        /// Degree of a norm form.
        #[arg(long)]
        k: Option<u32>,
        /// Comma-separated degrees for random systems.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u32>,
        /// Rebuild from a recipe instead.
        #[arg(long, conflicts_with = "kind")]
        recipe: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the covering inequality (1) or the line-closure lemma (2).
    Lemma {
        which: u8,
        /// Lemma 1: zero set of this system.
        #[arg(long)]
        system: Option<PathBuf>,
        /// Lemma 1: starting subspace.
        #[arg(long)]
        subspace: Option<PathBuf>,
        /// Lemma 1: this many seeded random instances instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        t: Option<usize>,
        /// i | ii | iii | iv
        #[arg(long)]
        part: Option<String>,
        #[arg(long)]
        m: Option<u32>,
        /// Seeded subsets instead of all of them.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Fit the dimension and component count from counts over F_{q^s}.
    EstimateDim {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 3)]
        smax: u32,
        /// Also search for a linear factor over F_{q^s} with this many trials.
        #[arg(long)]
        factor_trials: Option<u32>,
        #[arg(long, default_value_t = 1)]
        factor_ext: u32,
    },
    /// Survey random systems for D_hat < n - d.
    ScanConjecture {
        #[arg(long, default_value = "small")]
        preset: String,
    },
    /// Run a battery: acceptance | lemma2-exhaustive | examples.
    Suite {
        #[arg(long, default_value = "acceptance")]
        preset: String,
        /// Also write the summary here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Check { .. } => "check",
            Command::Audit { .. } => "audit",
            Command::Construct { .. } => "construct",
            Command::Lemma { .. } => "lemma",
            Command::EstimateDim { .. } => "estimate-dim",
            Command::ScanConjecture { .. } => "scan-conjecture",
            Command::Suite { .. } => "suite",
        }
    }
}

/// Failure of a command: an exit code and a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        msg: msg.into(),
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_sys(path: &Path) -> std::result::Result<SysFile, Failure> {
    parse_sys(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.msg = format!("{}: {}", path.display(), f.msg);
        f
    })
}

fn load_sub(path: &Path, field: &std::sync::Arc<FieldSpec>) -> std::result::Result<AffineSubspace, Failure> {
    parse_sub(&read(path)?, field).map_err(|e| {
        let mut f = Failure::from(e);
        f.msg = format!("{}: {}", path.display(), f.msg);
        f
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn law_body(r: &LawReport, fmt: OutFormat) -> String {
    match fmt {
        OutFormat::Json => pretty(r),
        OutFormat::Csv => format!(
            "law,status,evidence,witness\n{},{},{},{}\n",
            r.law,
            r.status().as_str(),
            csv_field(&r.evidence.to_string()),
            csv_field(&r.witness.as_ref().map_or(String::new(), Value::to_string))
        ),
    }
}

fn law_exit(r: &LawReport) -> i32 {
    if r.status() == Status::Fail {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn recipe_path(out: &Path) -> PathBuf {
    let stem = out.to_string_lossy();
    let stem = stem.strip_suffix(".sys").unwrap_or(&stem);
    PathBuf::from(format!("{stem}.recipe.json"))
}

fn need<T>(v: Option<T>, what: &str) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| input(format!("missing --{what}")))
}

fn execute(cli: &Cli) -> Outcome {
    let counter = Counter::new(
        cli.workers.unwrap_or_else(|| Counter::default().workers),
        cli.budget.unwrap_or(DEFAULT_BUDGET),
    );
    if cli.budget == Some(0) || cli.workers == Some(0) {
        return Err(input("budget and workers must be positive"));
    }
    let seed = cli.seed;
    match &cli.command {
        Command::Count { system, subspace, ext } => {
            let sf = load_sys(system)?;
            let region = match (subspace, ext) {
                (Some(p), _) => Region::Subspace(load_sub(p, sf.system.field())?),
                (None, Some(s)) => Region::Extension(*s),
                (None, None) => Region::Full,
            };
            let r = counter.count(&sf.system, &region)?;
            let body = match cli.format.unwrap_or(OutFormat::Json) {
                OutFormat::Json => pretty(&r),
                OutFormat::Csv => format!(
                    "q,n,region,count,scanned,workers\n{},{},{},{},{},{}\n",
                    r.q,
                    r.n,
                    csv_field(&r.region),
                    r.count,
                    r.scanned,
                    r.workers
                ),
            };
            Ok((body, EXIT_OK))
        }
        Command::Check {
            system,
            law,
            all_pairs: _,
            max_directions,
            sample,
            dim,
        } => {
            let sf = load_sys(system)?;
            let fmt = cli.format.unwrap_or(OutFormat::Json);
            if law == "homogenization" {
                let r = verify_homogenization_identity(&sf.system, &counter)?;
                return Ok((law_body(&r, fmt), law_exit(&r)));
            }
            let law = Law::parse(law).ok_or_else(|| input(format!("unknown law `{law}`")))?;
            let scope = match sample {
                Some(count) => Scope::Sampled { count: *count as usize, seed },
                None => Scope::AllPairs {
                    max_directions: *max_directions,
                    seed,
                },
            };
            let opts = CheckOptions {
                scope,
                dim: *dim,
                counter,
            };
            let r = check_congruence(&sf.system, law, &opts)?;
            Ok((law_body(&r, fmt), law_exit(&r)))
        }
        Command::Audit { system } => {
            let sf = load_sys(system)?;
            let r = audit_lower_bounds(&sf.system, &counter)?;
            Ok((law_body(&r, cli.format.unwrap_or(OutFormat::Json)), law_exit(&r)))
        }
        Command::Construct {
            kind,
            q,
            n,
            k,
            degrees,
            recipe,
            out,
        } => {
            let (c, extra) = match recipe {
                Some(path) => {
                    let r: ConstructionRecipe =
                        serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
                    let system = r.replay()?;
                    (Construction { system, recipe: r }, Value::Null)
                }
                None => {
                    let kind = need(kind.as_deref(), "kind (positional)")?;
                    let kind = Kind::parse(kind).ok_or_else(|| input(format!("unknown construction `{kind}`")))?;
                    let field = FieldSpec::from_order(need(*q, "q")?)?;
                    match kind {
                        Kind::NormForm => (norm_form(&field, need(*k, "k")?)?, Value::Null),
                        Kind::Example1 => {
                            let ex = example_one_detailed(&field, n.unwrap_or(4))?;
                            let extra = json!({
                                "quadric_count": ex.quadric_count,
                                "derived_total": ex.derived_total,
                                "closed_form_total": ex.displayed_total,
                                "discrepancy": ex.discrepancy(),
                            });
                            (ex.construction, extra)
                        }
                        Kind::Example2 => (example_two(&field)?, Value::Null),
                        Kind::Random | Kind::RandomHomogeneous => {
                            let n = need(*n, "n")?;
                            if degrees.is_empty() {
                                return Err(input("missing --degrees"));
                            }
                            let f = if kind == Kind::Random { random_system } else { random_homogeneous_system };
                            (f(&field, n, degrees, seed)?, Value::Null)
                        }
                    }
                }
            };
            let names = default_names(c.system.nvars());
            let rp = recipe_path(out);
            let write = |p: &Path, s: &str| std::fs::write(p, s).map_err(|e| input(format!("{}: {e}", p.display())));
            write(out, &write_sys(&c.system, &names))?;
            write(&rp, &pretty(&c.recipe))?;
            let body = json!({
                "system": out.display().to_string(),
                "recipe": rp.display().to_string(),
                "degrees": c.system.degrees(),
                "homogeneous": c.system.is_homogeneous(),
                "construction": c.recipe,
                "expected": extra,
            });
            Ok((pretty(&body), EXIT_OK))
        }
        Command::Lemma {
            which,
            system,
            subspace,
            random,
            q,
            t,
            part,
            m,
            samples,
        } => {
            let fmt = cli.format.unwrap_or(OutFormat::Json);
            match which {
                1 => {
                    if let Some(count) = random {
                        let mut rng = SplitMix64::new(seed);
                        let mut fails = Vec::new();
                        for i in 0..*count {
                            let (z, l0) = campaign::random_lemma1_instance(&mut rng)?;
                            let r = lemma1_witness(&z, &l0)?;
                            if !r.pass {
                                fails.push(json!({"instance": i, "report": r}));
                            }
                        }
                        let ev = json!({"instances": count, "seed": seed, "failures": fails.len()});
                        let pass = fails.is_empty();
                        let r = LawReport::verdict("lemma1", pass, ev, Some(json!(fails)));
                        return Ok((law_body(&r, fmt), law_exit(&r)));
                    }
                    let sf = load_sys(&need(system.clone(), "system")?)?;
                    let l0 = load_sub(&need(subspace.clone(), "subspace")?, sf.system.field())?;
                    let z = counter.zero_set(&sf.system)?;
                    let r = lemma1_witness(&z, &l0)?;
                    Ok((law_body(&r, fmt), law_exit(&r)))
                }
                2 => {
                    let field = FieldSpec::from_order(need(*q, "q")?)?;
                    let part = need(part.as_deref(), "part")?;
                    let part = Lemma2Part::parse(part, *m).ok_or_else(|| input(format!("bad --part `{part}` (iv needs --m)")))?;
                    let mode = match samples {
                        Some(count) => SubsetMode::Sampled { count: *count, seed },
                        None => SubsetMode::Exhaustive,
                    };
                    let r = lemma2_exhaustive(&field, need(*t, "t")?, part, mode)?;
                    Ok((law_body(&r, fmt), law_exit(&r)))
                }
                _ => Err(input("lemma must be 1 or 2")),
            }
        }
        Command::EstimateDim {
            system,
            smax,
            factor_trials,
            factor_ext,
        } => {
            let sf = load_sys(system)?;
            let est = estimate_dimension(&sf.system, *smax, &counter)?;
            let factor = match factor_trials {
                Some(t) if sf.system.r() == 1 => {
                    Some(linear_factor_test(&sf.system.polys()[0], *factor_ext, *t, seed, &counter)?)
                }
                Some(_) => return Err(input("the linear factor test needs a single polynomial")),
                None => None,
            };
            let body = match cli.format.unwrap_or(OutFormat::Json) {
                OutFormat::Json => match factor {
                    Some(f) => pretty(&json!({"estimate": est, "linear_factor": f})),
                    None => pretty(&est),
                },
                OutFormat::Csv => {
                    let mut s = String::from("s,N_s,residual,D_hat,k_hat\n");
                    let show = |o: Option<u64>| o.map_or("empty".into(), |v| v.to_string());
                    for (i, (sv, c)) in est.counts.iter().enumerate() {
                        let res = est.residuals.get(i).map_or(String::new(), |r| format!("{r:.6}"));
                        s.push_str(&format!(
                            "{sv},{c},{res},{},{}\n",
                            show(est.d_hat.map(u64::from)),
                            show(est.k_hat)
                        ));
                    }
                    s
                }
            };
            Ok((body, EXIT_OK))
        }
        Command::ScanConjecture { preset } => {
            let cfg = ScanConfig::preset(preset, seed).ok_or_else(|| input(format!("unknown preset `{preset}`")))?;
            let (report, rows) = conjecture_scan(&cfg, &counter)?;
            let body = match cli.format.unwrap_or(OutFormat::Csv) {
                OutFormat::Csv => {
                    let mut s = format!("{SCAN_HEADER}\n");
                    for r in &rows {
                        s.push_str(&r.csv());
                        s.push('\n');
                    }
                    s
                }
                OutFormat::Json => pretty(&json!({"report": report, "rows": rows})),
            };
            // flags are candidates for inspection, reported with exit 2
            Ok((body, law_exit(&report)))
        }
        Command::Suite { preset, out } => {
            let batteries = campaign::preset(preset).ok_or_else(|| input(format!("unknown preset `{preset}`")))?;
            let cfg = SuiteConfig { seed, counter };
            let mut results = Vec::new();
            for b in batteries {
                let r = b(&cfg)?;
                eprintln!("# {}  [{} ms]", r.line(), r.elapsed_ms);
                results.push(r);
            }
            let all = results.iter().all(|r| r.pass);
            let body = match cli.format.unwrap_or(OutFormat::Json) {
                OutFormat::Json => pretty(&json!({"preset": preset, "seed": seed, "pass": all, "criteria": results})),
                OutFormat::Csv => {
                    let mut s = format!("{CRITERIA_CSV_HEADER}\n");
                    for r in &results {
                        s.push_str(&r.csv());
                        s.push('\n');
                    }
                    s
                }
            };
            if let Some(p) = out {
                std::fs::write(p, &body).map_err(|e| input(format!("{}: {e}", p.display())))?;
            }
            Ok((body, if all { EXIT_OK } else { EXIT_VIOLATION }))
        }
    }
}

/// Parses `args`, runs the command, and writes the body to `out` and the
/// header and any error to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let result = execute(&cli);
    let workers = cli.workers.unwrap_or_else(|| Counter::default().workers);
    let _ = writeln!(
        err,
        "# cwlab {} {} seed={} workers={} budget={} started_unix={} elapsed_ms={}",
        env!("CARGO_PKG_VERSION"),
        cli.command.name(),
        cli.seed,
        workers,
        cli.budget.unwrap_or(DEFAULT_BUDGET),
        started,
        clock.elapsed().as_millis()
    );
    match result {
        Ok((body, code)) => {
            let _ = out.write_all(body.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}
