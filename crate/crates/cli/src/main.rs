//! `steinhaus`: construct, certify and search balanced Steinhaus triangles.
//!
//! Every command prints one JSON object on stdout (`--format text` gives a
//! short human rendering instead). Exit codes: 0 success, 1 a check failed,
//! 2 usage error, 3 enumeration budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use steinhaus_core::binommat::{cmat, mmat, tmat};
use steinhaus_core::certify::{all_passed, run_suite, Status, Suite};
use steinhaus_core::families::{balanced_period, mu_for_range, FamilyHint};
use steinhaus_core::iap::{
    iap_derive, iap_is_periodic, iap_iterated, iap_window, orbit_is_periodic, orbit_is_periodic_direct, IapSpec,
};
use steinhaus_core::idap::{idap_from_antisym_orbit, idap_orbit_antisym_predicate, idap_orbit_direct};
use steinhaus_core::modlinalg::{left_kernel_gfp, left_kernel_prime_power};
use steinhaus_core::search::{bset, brute_force_balanced, SearchJob};
use steinhaus_core::triangle::{build_triangle, triangle_multiplicity};
use steinhaus_core::{modring, Budget, Error, LocalRule, ModMatrix, ModTuple, Modulus};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "steinhaus", version, about = "Balanced Steinhaus triangles modulo m")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build or check a triangle from its first row.
    #[command(subcommand)]
    Triangle(TriangleCmd),
    /// Interlaced arithmetic progressions.
    #[command(subcommand)]
    Iap(IapCmd),
    /// Doubly arithmetic orbits of antisymmetric progressions.
    #[command(subcommand)]
    Idap(IdapCmd),
    /// Binomial-sum matrices.
    #[command(subcommand)]
    Binom(BinomCmd),
    /// Left kernel of `M_k^p` modulo a prime or prime power.
    Kernel(KernelArgs),
    /// Explicit balanced periods.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Exhaustive and lifting searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Re-run the published results.
    VerifyPaper {
        #[arg(long, default_value = "fast")]
        suite: String,
    },
}

#[derive(Args)]
struct RowArgs {
    #[arg(long)]
    m: u64,
    /// First row: a digit string (m <= 10) or comma-separated integers.
    #[arg(long, allow_hyphen_values = true)]
    row: String,
    #[arg(long, default_value = "pascal")]
    rule: String,
}

#[derive(Subcommand)]
enum TriangleCmd {
    /// Print the triangle and its multiplicities.
    Gen {
        #[command(flatten)]
        row: RowArgs,
        /// Render as plain text rows or a PGM image instead of JSON.
        #[arg(long)]
        render: Option<String>,
    },
    /// Report multiplicities; with `--balanced`, fail unless balanced.
    Verify {
        #[command(flatten)]
        row: RowArgs,
        #[arg(long)]
        balanced: bool,
    },
}

#[derive(Args)]
struct IapInput {
    /// JSON `{"m":…,"k":…,"A":[…],"D":[…]}` or `@path` to read it from a file.
    #[arg(long)]
    spec: String,
}

#[derive(Subcommand)]
enum IapCmd {
    /// The progression after `times` negated-rule derivations.
    Derive {
        #[command(flatten)]
        input: IapInput,
        #[arg(long, default_value_t = 1)]
        times: u64,
    },
    /// Terms `from..=to`.
    Window {
        #[command(flatten)]
        input: IapInput,
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
    },
    /// Horizontal and orbit periodicity, by matrix predicate and by derivation.
    Periodic {
        #[command(flatten)]
        input: IapInput,
        #[arg(long)]
        p1: usize,
        #[arg(long)]
        p2: Option<usize>,
    },
}

#[derive(Subcommand)]
enum IdapCmd {
    /// Whether the orbit of `<A, A X_k>` is doubly arithmetic with row block `k2`.
    Check {
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        k2: usize,
    },
}

#[derive(Subcommand)]
enum BinomCmd {
    Cmat(MatArgs),
    Tmat(MatArgs),
    Mmat(MatArgs),
}

#[derive(Args)]
struct MatArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u64,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long)]
    k: usize,
    /// Exponent of `M_k`; defaults to `k * m`.
    #[arg(long)]
    p: Option<u64>,
    /// A prime.
    #[arg(long)]
    prime: u64,
    /// Work modulo `prime^lift` by lifting (default 1).
    #[arg(long, default_value_t = 1)]
    lift: u32,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Period of `μ A0 + 4 A2` modulo `m`.
    Universal {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        mu: Option<i64>,
    },
    /// Period of a family member described by a JSON hint.
    Family {
        #[arg(long)]
        m: u64,
        /// e.g. `{"family":"e","i0":1,"negative":false,"alpha":[0,…]}`.
        #[arg(long)]
        hint: String,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Count balanced triangles over all first rows.
    Brute {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "pascal")]
        rule: String,
        #[arg(long, default_value_t = 1)]
        shards: u64,
        #[arg(long, default_value_t = 0)]
        shard: u64,
        /// Checkpoint file, resumed if present.
        #[arg(long)]
        resume: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000_000)]
        checkpoint_every: u128,
        #[arg(long, default_value_t = 64)]
        max_witnesses: usize,
    },
    /// Lift the balanced antisymmetric `k`-tuples up to modulus `2^u`.
    Bset {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        u: u32,
        /// Include the element list.
        #[arg(long)]
        elements: bool,
    },
}

/// Outcome of a command: the report, its text rendering and whether the
/// requested check held.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Report { json, text: text.into(), ok: true }
    }
}

fn modulus(m: u64) -> Result<Modulus, Error> {
    Modulus::new(m)
}

fn parse_tuple(m: Modulus, s: &str) -> Result<ModTuple, Error> {
    if s.contains(',') || s.starts_with('-') {
        let vals: Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
        let vals = vals.map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(ModTuple::from_signed(m, &vals))
    } else if m.get() <= 10 {
        ModTuple::from_digits(m, s)
    } else {
        let v: i64 = s.parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(ModTuple::from_signed(m, &[v]))
    }
}

fn tuple_json(t: &ModTuple) -> Value {
    match t.to_digits() {
        Some(d) => json!(d),
        None => json!(t.v),
    }
}

fn matrix_json(a: &ModMatrix) -> Value {
    json!({ "m": a.m.get(), "rows": a.to_rows() })
}

fn parse_rule(s: &str) -> Result<LocalRule, Error> {
    s.parse()
}

fn read_spec(s: &str) -> Result<IapSpec, Error> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => s.to_string(),
    };
    Ok(serde_json::from_str(&text)?)
}

fn default_mu(m: u64) -> Result<i64, Error> {
    let bound = 10.max(m + m % 2);
    let mu = mu_for_range(bound)?;
    if mu > 1 << 40 {
        return Err(Error::Precondition(format!("default μ for m = {m} is too large; pass --mu")));
    }
    Ok(mu as i64)
}

fn run(cmd: Command) -> Result<Report, Error> {
    match cmd {
        Command::Triangle(TriangleCmd::Gen { row, render }) => {
            let m = modulus(row.m)?;
            let t = build_triangle(&parse_tuple(m, &row.row)?, parse_rule(&row.rule)?);
            let mm = triangle_multiplicity(&t);
            let text = match render.as_deref() {
                Some("pgm") => t.render_pgm(),
                Some("text") | None => t.render_text(),
                Some(other) => return Err(Error::Parse(format!("unknown rendering {other:?}"))),
            };
            let rows: Vec<Value> = t.rows.iter().map(tuple_json).collect();
            let json = json!({
                "schema": SCHEMA, "m": m.get(), "rule": t.rule, "size": t.size(),
                "rows": rows, "counts": mm.counts, "balanced": modring::is_balanced(&mm),
            });
            Ok(Report::ok(if render.is_some() { json!({ "schema": SCHEMA, "render": text.clone() }) } else { json }, text))
        }
        Command::Triangle(TriangleCmd::Verify { row, balanced }) => {
            let m = modulus(row.m)?;
            let t = build_triangle(&parse_tuple(m, &row.row)?, parse_rule(&row.rule)?);
            let mm = triangle_multiplicity(&t);
            let is_bal = modring::is_balanced(&mm);
            Ok(Report {
                json: json!({
                    "schema": SCHEMA, "m": m.get(), "rule": t.rule, "size": t.size(),
                    "counts": mm.counts, "balanced": is_bal,
                }),
                text: format!("balanced: {is_bal}; counts {:?}", mm.counts),
                ok: !balanced || is_bal,
            })
        }
        Command::Iap(IapCmd::Derive { input, times }) => {
            let s = read_spec(&input.spec)?;
            let d = if times == 1 { iap_derive(&s) } else { iap_iterated(&s, times) };
            Ok(Report::ok(json!({ "schema": SCHEMA, "times": times, "spec": d }), format!("A = {} D = {}", d.a, d.d)))
        }
        Command::Iap(IapCmd::Window { input, from, to }) => {
            let s = read_spec(&input.spec)?;
            let w = iap_window(&s, from, to)?;
            Ok(Report::ok(json!({ "schema": SCHEMA, "from": from, "to": to, "window": tuple_json(&w) }), w.to_string()))
        }
        Command::Iap(IapCmd::Periodic { input, p1, p2 }) => {
            let s = read_spec(&input.spec)?;
            let horizontal = iap_is_periodic(&s, p1)?;
            let mut json = json!({ "schema": SCHEMA, "p1": p1, "horizontal": horizontal });
            let mut text = format!("{p1}-periodic: {horizontal}");
            if let Some(p2) = p2 {
                let predicate = orbit_is_periodic(&s, p1, p2 as u64)?;
                let direct = orbit_is_periodic_direct(&s, p1, p2)?;
                if predicate != direct {
                    return Err(Error::Contradiction(format!(
                        "matrix predicate {predicate} disagrees with derivation {direct}"
                    )));
                }
                json["p2"] = json!(p2);
                json["orbit"] = json!(predicate);
                text += &format!("; orbit ({p1}, {p2})-periodic: {predicate}");
            }
            Ok(Report::ok(json, text))
        }
        Command::Idap(IdapCmd::Check { m, a, k2 }) => {
            let m = modulus(m)?;
            let a = parse_tuple(m, &a)?;
            let predicate = idap_orbit_antisym_predicate(&a, k2 as u64)?;
            let direct = idap_orbit_direct(&IapSpec::antisymmetric(a.clone())?, k2)?;
            if predicate != direct {
                return Err(Error::Contradiction(format!(
                    "matrix predicate {predicate} disagrees with derivation {direct}"
                )));
            }
            let mut json = json!({ "schema": SCHEMA, "m": m.get(), "k1": a.len(), "k2": k2, "idap": predicate });
            if predicate {
                let spec = idap_from_antisym_orbit(&a, k2)?;
                json["A"] = matrix_json(&spec.a);
                json["D1"] = matrix_json(&spec.d1);
                json["D2"] = matrix_json(&spec.d2);
            }
            Ok(Report::ok(json, format!("doubly arithmetic: {predicate}")))
        }
        Command::Binom(b) => {
            let (name, args) = match &b {
                BinomCmd::Cmat(a) => ("C", a),
                BinomCmd::Tmat(a) => ("T", a),
                BinomCmd::Mmat(a) => ("M", a),
            };
            let m = modulus(args.m)?;
            let mat = match b {
                BinomCmd::Cmat(_) => cmat(args.k, args.p, m),
                BinomCmd::Tmat(_) => tmat(args.k, args.p, m),
                BinomCmd::Mmat(_) => mmat(args.k, args.p, m),
            };
            let text = mat.to_rows().iter().map(|r| format!("{r:?}")).collect::<Vec<_>>().join("\n");
            Ok(Report::ok(
                json!({ "schema": SCHEMA, "matrix": name, "k": args.k, "p": args.p, "m": m.get(), "rows": mat.to_rows() }),
                text,
            ))
        }
        Command::Kernel(args) => {
            let p = args.prime;
            if args.lift <= 1 {
                let exp = args.p.unwrap_or(args.k as u64 * p);
                let basis = left_kernel_gfp(&mmat(args.k, exp, modulus(p)?), p)?;
                let vecs: Vec<Value> = basis.vectors.iter().map(tuple_json).collect();
                Ok(Report::ok(
                    json!({ "schema": SCHEMA, "k": args.k, "p": exp, "prime": p, "dimension": basis.dimension(), "basis": vecs }),
                    format!("dimension {}", basis.dimension()),
                ))
            } else {
                let budget = Budget::from_env()?;
                let k = args.k;
                let fixed = args.p;
                let sols = left_kernel_prime_power(
                    |v| {
                        let mv = p.pow(v);
                        mmat(k, fixed.unwrap_or(k as u64 * mv), Modulus::new(mv).expect("positive"))
                    },
                    p,
                    args.lift,
                    budget.max_cells,
                )?;
                let vecs: Vec<Value> = sols.iter().map(tuple_json).collect();
                Ok(Report::ok(
                    json!({ "schema": SCHEMA, "k": k, "prime": p, "lift": args.lift, "size": sols.len(), "elements": vecs }),
                    format!("{} tuples", sols.len()),
                ))
            }
        }
        Command::Construct(ConstructCmd::Universal { m, mu }) => {
            let mu = match mu {
                Some(mu) => mu,
                None => default_mu(m)?,
            };
            let cert = balanced_period(modulus(m)?, &FamilyHint::Universal { mu })?;
            let text = cert.period.to_string();
            Ok(Report::ok(
                json!({ "schema": SCHEMA, "m": m, "mu": mu, "length": cert.length, "period": tuple_json(&cert.period),
                        "balanced_lambda": cert.balanced_lambda }),
                text,
            ))
        }
        Command::Construct(ConstructCmd::Family { m, hint }) => {
            let hint: FamilyHint = serde_json::from_str(&hint)?;
            let cert = balanced_period(modulus(m)?, &hint)?;
            Ok(Report::ok(
                json!({ "schema": SCHEMA, "m": m, "hint": hint, "length": cert.length,
                        "period": tuple_json(&cert.period), "balanced_lambda": cert.balanced_lambda }),
                cert.period.to_string(),
            ))
        }
        Command::Search(SearchCmd::Brute { m, n, rule, shards, shard, resume, checkpoint_every, max_witnesses }) => {
            let mut job = SearchJob::new(modulus(m)?, n, parse_rule(&rule)?).with_shard(shard, shards)?;
            job.max_witnesses = max_witnesses;
            let report = brute_force_balanced(&job, &Budget::from_env()?, resume.as_deref(), checkpoint_every)?;
            let text = format!("{} rows, {} balanced ({} up to units)", report.examined, report.balanced, report.balanced_up_to_units);
            let mut json = serde_json::to_value(&report)?;
            json["schema"] = json!(SCHEMA);
            json["witnesses"] = json!(report.witnesses.iter().map(tuple_json).collect::<Vec<_>>());
            Ok(Report::ok(json, text))
        }
        Command::Search(SearchCmd::Bset { k, u, elements }) => {
            let report = bset(k, u, &Budget::from_env()?)?;
            let text = report
                .levels
                .iter()
                .map(|l| format!("2^{}: {} ({} up to units)", l.u, l.total, l.up_to_units))
                .collect::<Vec<_>>()
                .join("\n");
            let mut json = json!({ "schema": SCHEMA, "k": k, "u": u, "levels": report.levels,
                                   "total": report.total(), "up_to_units": report.up_to_units(),
                                   "runtime_ms": report.runtime_ms });
            if elements {
                json["elements"] = json!(report.elements.iter().map(tuple_json).collect::<Vec<_>>());
            }
            Ok(Report::ok(json, text))
        }
        Command::VerifyPaper { suite } => {
            let suite: Suite = suite.parse()?;
            let outcomes = run_suite(suite);
            let text = outcomes
                .iter()
                .map(|o| {
                    let tag = match o.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Skip => "SKIP",
                    };
                    format!("{tag} [{}] {} ({} ms): {}", o.id, o.name, o.elapsed_ms, o.detail)
                })
                .collect::<Vec<_>>()
                .join("\n");
            let ok = all_passed(&outcomes);
            Ok(Report { json: json!({ "schema": SCHEMA, "suite": suite, "passed": ok, "checks": outcomes }), text, ok })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.json),
                Format::Text => println!("{}", report.text),
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Budget { .. } => 3,
                Error::Parse(_) => 2,
                _ => 1,
            })
        }
    }
}
