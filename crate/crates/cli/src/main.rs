use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use franel::expr::{self, Evaluator, Expr, Parsed};
use franel::identities::{self, IdentityOutcome};
use franel::modring::{PrimePowerRing, RationalParam};
use franel::primes::PrimeRange;
use franel::report::OutputFormat;
use franel::sequences::{apery_exact, franel_exact_list, franel_poly_exact, generalized_franel, AperyRoute, TableCache};
use franel::suite;

#[derive(Parser)]
#[command(name = "franel", version, about = "Franel-number congruence workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Seq {
    Franel,
    Apery,
    Fpoly,
    Genfranel,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Subcommand)]
enum Command {
    /// Print a sequence for 0..=n, exactly or reduced mod p^e for each prime.
    Compute {
        #[arg(long, value_enum)]
        seq: Seq,
        #[arg(long)]
        n: u64,
        /// Argument of f_n(x).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<RationalParam>,
        /// Exponent of the generalized Franel numbers.
        #[arg(long)]
        r: Option<RationalParam>,
        /// Reduce into Z/p^e for each prime in the range.
        #[arg(long)]
        primes: Option<PrimeRange>,
        #[arg(long, default_value_t = 1)]
        mod_exp: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Run the built-in congruence checks.
    Verify {
        #[arg(long)]
        primes: PrimeRange,
        /// Check ids or instance labels, comma separated.
        #[arg(long, value_delimiter = ',')]
        id: Vec<String>,
        /// Only run checks stated modulo p^e.
        #[arg(long)]
        mod_exp: Option<u32>,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        /// Conjecture counterexamples fail the run.
        #[arg(long)]
        strict_conjectures: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a congruence (or a bare expression) over a prime range.
    Eval {
        expr: String,
        #[arg(long)]
        primes: PrimeRange,
        /// Ring exponent for bare expressions.
        #[arg(long, default_value_t = 1)]
        mod_exp: u32,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Check the exact binomial identities.
    Identities {
        #[command(flatten)]
        output: Output,
    },
    /// Recover the odd integers a_r from the alternating moments.
    ScanAr {
        /// Moment orders, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        r: Vec<u32>,
        #[arg(long, default_value = "5..499")]
        primes: PrimeRange,
        #[command(flatten)]
        output: Output,
    },
    /// Scan 3-adic valuations of the alternating partial sums.
    #[command(name = "check-3adic")]
    Check3adic {
        #[arg(long, default_value_t = 2187)]
        n: u64,
        #[arg(long)]
        strict_conjectures: bool,
        /// Print every n, not only counterexamples.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Write each prime p == 1 (mod 3) as x^2 + 3y^2.
    Cornacchia {
        #[arg(long)]
        primes: PrimeRange,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Checks,
}

type CmdResult = Result<(), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn write_out(output: &Output, text: &str) -> CmdResult {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Renders non-report records: json/csv via serde, text via `line`.
fn render<T: Serialize>(rows: &[T], format: Format, line: impl Fn(&T) -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => rows.iter().map(|r| line(r) + "\n").collect(),
    }
}

#[derive(Serialize)]
struct SequenceRow {
    prime: Option<u64>,
    modulus_exponent: Option<u32>,
    values: String,
}

fn integer_param(q: &RationalParam, what: &str) -> Result<i64, Failure> {
    if q.is_integer() {
        Ok(q.numerator())
    } else {
        Err(usage(format!("{what} must be an integer for exact values")))
    }
}

fn compute(
    seq: Seq,
    n: u64,
    x: Option<RationalParam>,
    r: Option<RationalParam>,
    primes: Option<PrimeRange>,
    mod_exp: u32,
    output: &Output,
) -> CmdResult {
    let x = match (seq, x) {
        (Seq::Fpoly, None) => return Err(usage("--seq fpoly needs --x")),
        (_, x) => x,
    };
    let r_int = match (seq, r) {
        (Seq::Genfranel, None) => return Err(usage("--seq genfranel needs --r")),
        (Seq::Genfranel, Some(q)) => {
            let v = integer_param(&q, "--r")?;
            if v < 1 {
                return Err(usage("--r must be a positive integer"));
            }
            v
        }
        _ => 0,
    };
    let rows = match primes {
        None => {
            let values: Vec<BigInt> = match seq {
                Seq::Franel => franel_exact_list(n as usize),
                Seq::Apery => (0..=n).map(|k| apery_exact(k, AperyRoute::Definition)).collect(),
                Seq::Fpoly => {
                    let xv = BigInt::from(integer_param(x.as_ref().expect("checked"), "--x")?);
                    (0..=n).map(|k| franel_poly_exact(k, &xv)).collect()
                }
                Seq::Genfranel => (0..=n).map(|k| generalized_franel(k, r_int as u32)).collect(),
            };
            let text: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            vec![SequenceRow { prime: None, modulus_exponent: None, values: text.join(" ") }]
        }
        Some(range) => {
            let call = match seq {
                Seq::Franel => "f(k)".to_string(),
                Seq::Apery => "A(k)".to_string(),
                Seq::Fpoly => "fx(k, x)".to_string(),
                Seq::Genfranel => format!("fr({r_int}, k)"),
            };
            let body = expr::parse_expr(&call).expect("fixed expression");
            let mut rows = Vec::new();
            for p in range.primes().into_iter().filter(|&p| p >= 3) {
                let ring = PrimePowerRing::new(p, mod_exp).map_err(usage)?;
                let cache = TableCache::new(ring);
                let mut bindings = HashMap::new();
                if let Some(q) = &x {
                    match ring.from_rational(q) {
                        Ok(v) => bindings.insert("x".to_string(), v),
                        Err(_) => continue,
                    };
                }
                let ev = Evaluator::new(&cache, &bindings);
                let mut values = Vec::new();
                for k in 0..=n {
                    let e = substitute(&body, k);
                    values.push(ev.eval(&e).map_err(usage)?.value().to_string());
                }
                rows.push(SequenceRow { prime: Some(p), modulus_exponent: Some(mod_exp), values: values.join(" ") });
            }
            rows
        }
    };
    let text = render(&rows, output.format, |row| match row.prime {
        Some(p) => format!("p={p}: {}", row.values),
        None => row.values.clone(),
    });
    write_out(output, &text)
}

fn substitute(e: &Expr, k: u64) -> Expr {
    match e {
        Expr::Var(v) if v == "k" => Expr::Int(k as i128),
        Expr::Call { name, args } => {
            Expr::Call { name: name.clone(), args: args.iter().map(|a| substitute(a, k)).collect() }
        }
        other => other.clone(),
    }
}

fn verify(
    primes: PrimeRange,
    ids: &[String],
    mod_exp: Option<u32>,
    workers: usize,
    strict: bool,
    output: &Output,
) -> CmdResult {
    let mut specs = suite::select(ids).map_err(usage)?;
    if let Some(e) = mod_exp {
        specs.retain(|s| s.modulus_exponent == e);
    }
    let report = suite::run_suite(&specs, primes, workers).map_err(usage)?;
    write_out(output, &report.render(output.format.into()))?;
    for r in report.conjecture_counterexamples() {
        eprintln!("CONJECTURE COUNTEREXAMPLE: {} at p = {}", r.label(), r.prime);
    }
    if report.exit_code(strict) == 0 {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

#[derive(Serialize)]
struct ValueRow {
    prime: u64,
    modulus_exponent: u32,
    value: Option<String>,
    error: Option<String>,
}

fn eval(text: &str, primes: PrimeRange, mod_exp: u32, workers: usize, output: &Output) -> CmdResult {
    match expr::parse(text).map_err(usage)? {
        Parsed::Congruence(stmt) => {
            let report = expr::eval_congruence(&stmt, primes, "expr", workers).map_err(usage)?;
            write_out(output, &report.render(output.format.into()))?;
            if report.exit_code(false) == 0 {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Parsed::Expr(e) => {
            if !(1..=4).contains(&mod_exp) {
                return Err(usage("--mod-exp must be in 1..=4"));
            }
            let mut rows = Vec::new();
            for p in primes.primes().into_iter().filter(|&p| p >= 3) {
                let ring = PrimePowerRing::new(p, mod_exp).map_err(usage)?;
                let row = match expr::eval_expr(&e, ring, &HashMap::new()) {
                    Ok(v) => ValueRow { prime: p, modulus_exponent: mod_exp, value: Some(v.value().to_string()), error: None },
                    Err(err) => ValueRow { prime: p, modulus_exponent: mod_exp, value: None, error: Some(err.to_string()) },
                };
                rows.push(row);
            }
            if rows.is_empty() {
                return Err(usage(format!("no primes in range {primes}")));
            }
            let text = render(&rows, output.format, |r| match (&r.value, &r.error) {
                (Some(v), _) => format!("p={} mod p^{}: {v}", r.prime, r.modulus_exponent),
                (_, Some(e)) => format!("p={}: error: {e}", r.prime),
                _ => unreachable!(),
            });
            write_out(output, &text)?;
            if rows.iter().any(|r| r.error.is_some()) {
                Err(Failure::Checks)
            } else {
                Ok(())
            }
        }
    }
}

#[derive(Serialize)]
struct IdentityRow {
    identity_id: String,
    range_tested: String,
    cases: u64,
    pass: bool,
    counterexample: Option<String>,
}

fn identity_row(o: &IdentityOutcome) -> IdentityRow {
    IdentityRow {
        identity_id: o.identity_id.clone(),
        range_tested: o.range_tested.clone(),
        cases: o.cases,
        pass: o.pass,
        counterexample: o.counterexample.as_ref().map(|c| {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}: lhs {} != rhs {}", params.join(","), c.lhs, c.rhs)
        }),
    }
}

fn identities_cmd(output: &Output) -> CmdResult {
    let rows: Vec<IdentityRow> = identities::verify_all_default().iter().map(identity_row).collect();
    let text = render(&rows, output.format, |r| {
        let status = if r.pass { "ok".to_string() } else { format!("FAIL {}", r.counterexample.clone().unwrap_or_default()) };
        format!("{:<28} {:<24} {:>6} cases  {status}", r.identity_id, r.range_tested, r.cases)
    });
    write_out(output, &text)?;
    if rows.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

#[derive(Serialize)]
struct ArRow {
    r: u32,
    value: Option<String>,
    odd: Option<bool>,
    primes_used: usize,
    error: Option<String>,
}

fn scan_ar(rs: &[u32], primes: PrimeRange, output: &Output) -> CmdResult {
    if rs.contains(&0) {
        return Err(usage("--r must be positive"));
    }
    let rows: Vec<ArRow> = rs
        .iter()
        .map(|&r| match suite::scan_ar(r, primes) {
            Ok(s) => ArRow { r, value: Some(s.value.to_string()), odd: Some(s.odd), primes_used: s.lifts.len(), error: None },
            Err(e) => ArRow { r, value: None, odd: None, primes_used: 0, error: Some(e.to_string()) },
        })
        .collect();
    let text = render(&rows, output.format, |a| match (&a.value, &a.error) {
        (Some(v), _) => format!(
            "a_{} = {v} ({}, {} primes)",
            a.r,
            if a.odd == Some(true) { "odd" } else { "EVEN" },
            a.primes_used
        ),
        (_, Some(e)) => format!("a_{}: error: {e}", a.r),
        _ => unreachable!(),
    });
    write_out(output, &text)?;
    if rows.iter().any(|a| a.error.is_some()) {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}

fn check_3adic(n: u64, strict: bool, all: bool, output: &Output) -> CmdResult {
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let scan = suite::check_3adic_integrality(n);
    let bad: Vec<_> = scan.counterexamples().copied().collect();
    let rows = if all { scan.rows.clone() } else { bad.clone() };
    let margin = |m: Option<i64>| m.map_or("inf".to_string(), |m| m.to_string());
    let mut text = render(&rows, output.format, |r| {
        let mark = if r.is_counterexample() { "  CONJECTURE COUNTEREXAMPLE" } else { "" };
        format!("n={} alternating {} weighted {}{mark}", r.n, margin(r.alternating), margin(r.weighted))
    });
    if matches!(output.format, Format::Text) {
        text.push_str(&format!("checked n = 1..{n}: {} negative margins\n", bad.len()));
    }
    write_out(output, &text)?;
    for r in &bad {
        eprintln!("CONJECTURE COUNTEREXAMPLE: 3-adic margin negative at n = {}", r.n);
    }
    if strict && !bad.is_empty() {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct CornacchiaRow {
    p: u64,
    x: Option<u64>,
    y: Option<u64>,
}

fn cornacchia(primes: PrimeRange, output: &Output) -> CmdResult {
    let mut rows = Vec::new();
    for p in primes.primes().into_iter().filter(|&p| p > 3) {
        let rep = suite::cornacchia_x2_3y2(p).map_err(usage)?;
        rows.push(CornacchiaRow { p, x: rep.map(|r| r.x), y: rep.map(|r| r.y) });
    }
    if rows.is_empty() {
        return Err(usage(format!("no primes above 3 in range {primes}")));
    }
    let text = render(&rows, output.format, |r| match (r.x, r.y) {
        (Some(x), Some(y)) => format!("{} = {x}^2 + 3*{y}^2", r.p),
        _ => format!("{}: none (p == 2 mod 3)", r.p),
    });
    write_out(output, &text)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Compute { seq, n, x, r, primes, mod_exp, output } => compute(seq, n, x, r, primes, mod_exp, &output),
        Command::Verify { primes, id, mod_exp, workers, strict_conjectures, output } => {
            verify(primes, &id, mod_exp, workers, strict_conjectures, &output)
        }
        Command::Eval { expr, primes, mod_exp, workers, output } => eval(&expr, primes, mod_exp, workers, &output),
        Command::Identities { output } => identities_cmd(&output),
        Command::ScanAr { r, primes, output } => scan_ar(&r, primes, &output),
        Command::Check3adic { n, strict_conjectures, all, output } => check_3adic(n, strict_conjectures, all, &output),
        Command::Cornacchia { primes, output } => cornacchia(primes, &output),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
