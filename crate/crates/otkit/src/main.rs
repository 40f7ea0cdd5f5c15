use clap::{Parser, Subcommand};
use otkit::coefficients::kdelta;
use otkit::enumerate::enumerate;
use otkit::gen::{generate, GenSpec};
use otkit::lambda_cnf::{o_assign, o_assign_n};
use otkit::suites::{run_suite, SuiteReport, SuiteSpec, SUITES};
use otkit::towers::{build_tower, Chain};
use otkit::validity::{check, in_slice, Clause};
use otkit::{compare, parse_term, parse_vector, Config, Term};
use serde_json::json;
use std::cmp::Ordering;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "otkit", version, about = "Ordinal notation toolkit: terms, order, towers and property suites")]
struct Cli {
    /// Number of reflection levels N (at least 3).
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(3..=64))]
    levels: u64,
    /// Restrict to the slice n.
    #[arg(long, global = true)]
    slice: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    count: Option<usize>,
    /// Machine-readable report, one JSON object per line.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a term; print its canonical form and length.
    Parse { term: String },
    /// Print the canonical form of a term.
    Print { term: String },
    /// Compare two terms: LT, EQ or GT.
    Cmp { a: String, b: String },
    /// Check validity; exit 1 with diagnostics when invalid.
    Validate { term: String },
    /// Coefficient set K_delta(term), one term per line.
    Kdelta {
        term: String,
        #[arg(long)]
        delta: String,
    },
    /// All valid terms up to a length.
    Enum {
        #[arg(long, default_value_t = 5)]
        max_len: usize,
    },
    /// Seeded random valid terms.
    Gen {
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// The tower T(term) as an s-expression.
    Tower { term: String },
    /// The predecessor chain of a collapsing term.
    Chain { term: String },
    /// o(v) for a comma separated vector of N-2 entries.
    OAssign {
        vector: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run a property suite, or `all`.
    Check {
        suite: String,
        #[arg(long)]
        max_len: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = Config::new(cli.levels as usize);
    match run(&cli, cfg) {
        Ok(code) => code,
        Err(Fail::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(2)
        }
        Err(Fail::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

enum Fail {
    Parse(String),
    Other(String),
}

fn term(text: &str, cfg: Config) -> Result<Term, Fail> {
    parse_term(text, cfg).map_err(|e| Fail::Parse(e.to_string()))
}

fn other(e: impl ToString) -> Fail {
    Fail::Other(e.to_string())
}

fn run(cli: &Cli, cfg: Config) -> Result<ExitCode, Fail> {
    match &cli.cmd {
        Cmd::Parse { term: t } => {
            let t = term(t, cfg)?;
            println!("{t}");
            println!("length {}", t.len());
        }
        Cmd::Print { term: t } => println!("{}", term(t, cfg)?),
        Cmd::Cmp { a, b } => {
            let (a, b) = (term(a, cfg)?, term(b, cfg)?);
            let s = match compare(&a, &b) {
                Ordering::Less => "LT",
                Ordering::Equal => "EQ",
                Ordering::Greater => "GT",
            };
            println!("{s}");
        }
        Cmd::Validate { term: t } => {
            let t = term(t, cfg)?;
            let report = check(&t, cfg);
            let mut ok = report.ok;
            for f in &report.failures {
                println!("{f}");
            }
            if let Some(n) = cli.slice {
                if report.ok && !in_slice(&t, n) {
                    println!("not in slice {n}");
                    ok = false;
                }
            }
            if !ok {
                return Ok(ExitCode::FAILURE);
            }
            println!("valid");
        }
        Cmd::Kdelta { term: t, delta } => {
            let (t, d) = (term(t, cfg)?, term(delta, cfg)?);
            for x in kdelta(&d, &t) {
                println!("{x}");
            }
        }
        Cmd::Enum { max_len } => {
            let ts = enumerate(*max_len, cfg);
            let keep = ts.iter().filter(|t| cli.slice.is_none_or(|n| in_slice(t, n)));
            for t in keep.take(cli.count.unwrap_or(usize::MAX)) {
                println!("{t}");
            }
        }
        Cmd::Gen { max_len } => {
            let spec = GenSpec {
                seed: cli.seed,
                count: cli.count.unwrap_or(10),
                max_len: *max_len,
                cfg,
                slice: cli.slice,
                ..GenSpec::default()
            };
            for t in generate(&spec).map_err(other)? {
                println!("{t}");
            }
        }
        Cmd::Tower { term: t } => println!("{}", build_tower(&term(t, cfg)?, cfg).map_err(other)?),
        Cmd::Chain { term: t } => print_chain(&Chain::build(&term(t, cfg)?, cfg).map_err(other)?),
        Cmd::OAssign { vector, n } => {
            let v = parse_vector(vector, cfg).map_err(|e| Fail::Parse(e.to_string()))?;
            println!("o = {}", o_assign(&v).map_err(other)?);
            if let Some(n) = n {
                println!("o_{n} = {}", o_assign_n(&v, *n).map_err(other)?);
            }
        }
        Cmd::Check { suite, max_len } => {
            let spec =
                SuiteSpec { seed: cli.seed, count: cli.count, max_len: *max_len, levels: cfg.levels, slice: cli.slice };
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut ok = true;
            for name in names {
                let r = run_suite(name, &spec).map_err(other)?;
                ok &= r.passed();
                if cli.json {
                    report_json(&r);
                } else {
                    report_text(&r);
                }
            }
            if !ok {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_chain(c: &Chain) {
    let levels = c.cfg().levels;
    for (j, t) in c.nodes().iter().enumerate() {
        println!("[{j}] {t}");
        let clause = match c.clause(j) {
            Some(Clause::Plain) => "plain".to_string(),
            Some(Clause::KCollapse) => "K-collapse".to_string(),
            Some(Clause::Step { k }) => format!("step k={k}"),
            Some(Clause::Below { .. }) => "below".to_string(),
            None => "-".to_string(),
        };
        println!("    clause   {clause}");
        let m: Vec<String> = (2..levels).map(|k| c.m(j, k).to_string()).collect();
        println!("    m        ({})", m.join(", "));
        if let Some(Clause::Below { witness }) = c.clause(j) {
            let w: Vec<String> = witness.iter().map(|p| p.to_string()).collect();
            println!("    witness  ({})", w.join(", "));
        }
        for k in 2..levels {
            let pd = c.pd_k(j, k);
            println!("    k={k}  q={} r={} pd=[{pd}] {}", c.q(k, j), c.r(k, j), c.term(pd));
        }
    }
    println!("[{}] K", c.len());
}

fn report_text(r: &SuiteReport) {
    for (p, n) in &r.properties {
        let bad = r.failures_of(p);
        let status = if bad == 0 { "pass" } else { "FAIL" };
        println!("{status}  {}/{p}  cases={n} failures={bad}", r.name);
    }
    for f in r.failures.iter().take(20) {
        let seed = f.seed.map(|s| format!(" (seed {s})")).unwrap_or_default();
        println!("  counterexample {}/{}: {}{seed}", r.name, f.property, f.case);
    }
    if r.failures.len() > 20 {
        println!("  ... {} more", r.failures.len() - 20);
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
    let status = if r.passed() { "PASS" } else { "FAIL" };
    println!("{status}  {}  cases={} {:.2}s", r.name, r.cases, r.elapsed.as_secs_f64());
}

fn report_json(r: &SuiteReport) {
    for (p, n) in &r.properties {
        let bad = r.failures_of(p);
        let status = if bad == 0 { "pass" } else { "fail" };
        println!("{}", json!({"suite": r.name, "case": p, "status": status, "cases": n, "failures": bad}));
    }
    for f in &r.failures {
        println!(
            "{}",
            json!({"suite": r.name, "case": f.case, "property": f.property, "status": "fail", "seed": f.seed})
        );
    }
    let status = if r.passed() { "pass" } else { "fail" };
    println!(
        "{}",
        json!({"suite": r.name, "case": "total", "status": status, "cases": r.cases, "millis": r.elapsed.as_millis() as u64, "notes": r.notes})
    );
}
