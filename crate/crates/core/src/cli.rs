//! Command-line front end.
//!
//! Every subcommand renders the same result three ways (JSON, CSV, text).
//! Rationals are always emitted as exact decimal strings.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::characters::{character, set_cache_dir, CharacterTable};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::frobenius::{frobenius_count, xi_all, ClassList};
use crate::hurwitz::{
    cross_check, hurwitz, hurwitz_general, one_part_queries, HurwitzQuery, HurwitzValue, Route,
};
use crate::oracle::{oracle_frobenius, oracle_xi_all, OracleConfig, Permutation};
use crate::partitions::{partitions_of, Partition};
use crate::polynomiality::{double_table, quasi_triple_table, CoefficientTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Character,
    Sinh,
    Bernoulli,
    All,
}

#[derive(Debug, Parser)]
#[command(
    name = "hurwitz",
    version,
    about = "Exact quasi-triple Hurwitz numbers and symmetric-group character sums"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    /// Directory for persisted character tables.
    #[arg(long, global = true, env = "HURWITZ_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Append wall-clock time to the output (makes it nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Irreducible character values of S_d.
    Char {
        #[arg(long)]
        d: usize,
        #[arg(long, requires = "mu")]
        lambda: Option<Partition>,
        #[arg(long, requires = "lambda")]
        mu: Option<Partition>,
    },
    /// Tuples from the given classes whose product has m cycles.
    Xi {
        #[arg(long)]
        d: usize,
        /// Classes separated by ';', parts by ','.
        #[arg(long)]
        classes: String,
        /// Omit to list every m.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Tuples from the given classes whose product is a fixed permutation of type pi.
    Frobenius {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        classes: String,
        #[arg(long)]
        pi: Partition,
    },
    /// Quasi-triple Hurwitz number H^g_{d,m}(alpha, beta).
    Hurwitz {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        alpha: Partition,
        #[arg(long)]
        beta: Partition,
        #[arg(long, value_enum, default_value = "character")]
        route: RouteArg,
    },
    /// Polynomial coefficients (Witten-type symbols).
    Coeff {
        #[arg(long)]
        g: usize,
        #[arg(long, required_unless_present = "double", conflicts_with = "double")]
        d: Option<usize>,
        #[arg(long, required_unless_present = "double", conflicts_with = "double")]
        m: Option<usize>,
        /// Double-Hurwitz symbols, where d is implied by beta.
        #[arg(long)]
        double: bool,
        #[arg(long)]
        n: usize,
    },
    /// Brute-force oracle against the character formulas, plus route agreement.
    Verify {
        #[arg(long, default_value_t = 5)]
        max_d: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// H^g_{d,m}((d), beta) for every beta and m.
    Table {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        d: usize,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidPartition(_) | Error::WeightMismatch { .. } => 2,
        Error::InadmissibleQuery { .. } => 3,
        Error::Mismatch(_) => 4,
        Error::BudgetExceeded { .. } => 5,
        _ => 1,
    }
}

/// Lossless JSON form of a rational.
pub fn rational_json(r: &Rational) -> Value {
    json!({
        "numerator": r.numer().to_string(),
        "denominator": r.denom().to_string(),
        "value": r.to_string(),
    })
}

/// Inverse of [`rational_json`].
pub fn rational_from_json(v: &Value) -> Option<Rational> {
    let num: BigInt = v.get("numerator")?.as_str()?.parse().ok()?;
    let den: BigInt = v.get("denominator")?.as_str()?.parse().ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(num, den))
}

struct Rendered {
    json: Value,
    csv: String,
    text: String,
}

impl Rendered {
    fn pick(mut self, format: Format, elapsed: Option<f64>) -> String {
        if let Some(ms) = elapsed {
            if let Value::Object(map) = &mut self.json {
                map.insert("elapsed_ms".into(), json!(ms));
            }
            let _ = writeln!(self.text, "elapsed: {ms:.3} ms");
        }
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.csv,
            Format::Text => self.text,
        }
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// to the given streams. Returns the process exit code.
pub fn run_with(
    argv: impl IntoIterator<Item = String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    if let Some(dir) = &cli.cache_dir {
        if let Err(e) = std::fs::create_dir_all(dir) {
            let _ = writeln!(
                err,
                "error: cannot create cache directory {}: {e}",
                dir.display()
            );
            return 1;
        }
        set_cache_dir(Some(dir.clone()));
    }
    let start = Instant::now();
    match execute(&cli.command) {
        Ok((rendered, status)) => {
            let elapsed = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
            let _ = out.write_all(rendered.pick(cli.format, elapsed).as_bytes());
            status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(argv: impl IntoIterator<Item = String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn execute(cmd: &Command) -> Result<(Rendered, i32)> {
    let ok = |r| Ok((r, 0));
    match cmd {
        Command::Char { d, lambda, mu } => ok(cmd_char(*d, lambda.as_ref(), mu.as_ref())?),
        Command::Xi { d, classes, m } => ok(cmd_xi(*d, classes, *m)?),
        Command::Frobenius { d, classes, pi } => ok(cmd_frobenius(*d, classes, pi)?),
        Command::Hurwitz {
            g,
            d,
            m,
            alpha,
            beta,
            route,
        } => ok(cmd_hurwitz(*g, *d, *m, alpha, beta, *route)?),
        Command::Coeff { g, d, m, double, n } => ok(cmd_coeff(*g, *d, *m, *double, *n)?),
        Command::Verify { max_d, budget } => cmd_verify(*max_d, *budget),
        Command::Table { g, d } => ok(cmd_table(*g, *d)?),
    }
}

fn check_weight(d: usize, p: &Partition) -> Result<()> {
    if p.weight() != d {
        return Err(Error::WeightMismatch {
            expected: d,
            found: p.weight(),
        });
    }
    Ok(())
}

fn cmd_char(d: usize, lambda: Option<&Partition>, mu: Option<&Partition>) -> Result<Rendered> {
    if let (Some(lambda), Some(mu)) = (lambda, mu) {
        check_weight(d, lambda)?;
        check_weight(d, mu)?;
        let v = character(lambda, mu)?;
        return Ok(Rendered {
            json: json!({"command": "char", "d": d, "lambda": lambda.to_string(), "mu": mu.to_string(), "value": v.to_string()}),
            csv: format!("lambda,mu,value\n\"{lambda}\",\"{mu}\",{v}\n"),
            text: format!("chi^({lambda})(({mu})) = {v}\n"),
        });
    }
    let table = CharacterTable::global(d)?;
    let parts = table.partitions();
    let rows: Vec<Vec<String>> = parts
        .iter()
        .map(|l| table.row(l).map(|r| r.iter().map(i64::to_string).collect()))
        .collect::<Result<_>>()?;
    let labels: Vec<String> = parts.iter().map(Partition::to_string).collect();
    let mut csv = String::from("lambda,mu,value\n");
    let mut text = String::new();
    let _ = writeln!(
        text,
        "character table of S_{d}; rows lambda, columns mu = {}",
        labels.join(" | ")
    );
    for (l, row) in labels.iter().zip(&rows) {
        for (m, v) in labels.iter().zip(row) {
            let _ = writeln!(csv, "\"{l}\",\"{m}\",{v}");
        }
        let _ = writeln!(text, "{l:>16}: {}", row.join(" "));
    }
    Ok(Rendered {
        json: json!({"command": "char", "d": d, "partitions": labels, "table": rows}),
        csv,
        text,
    })
}

fn cmd_xi(d: usize, classes: &str, m: Option<usize>) -> Result<Rendered> {
    let list = ClassList::parse(d, classes)?;
    let all = xi_all(&list)?;
    let ms: Vec<usize> = match m {
        Some(m) if m == 0 || m > d => {
            return Err(Error::Precondition(format!("m must lie in 1..={d}")));
        }
        Some(m) => vec![m],
        None => (1..=d).collect(),
    };
    let mut csv = String::from("m,value\n");
    let mut text = String::new();
    let mut values = Vec::new();
    for &m in &ms {
        let v = &all[m - 1];
        values.push(json!({"m": m, "value": v.to_string()}));
        let _ = writeln!(csv, "{m},{v}");
        let _ = writeln!(text, "xi_{{{d},{m}}}({list}) = {v}");
    }
    Ok(Rendered {
        json: json!({"command": "xi", "d": d, "classes": list.to_string(), "values": values}),
        csv,
        text,
    })
}

fn cmd_frobenius(d: usize, classes: &str, pi: &Partition) -> Result<Rendered> {
    check_weight(d, pi)?;
    let list = ClassList::parse(d, classes)?;
    let v = frobenius_count(&list, pi)?;
    Ok(Rendered {
        json: json!({"command": "frobenius", "d": d, "classes": list.to_string(), "pi": pi.to_string(), "value": v.to_string()}),
        csv: format!("classes,pi,value\n\"{list}\",\"{pi}\",{v}\n"),
        text: format!("N({list}; {pi}) = {v}\n"),
    })
}

fn query_json(q: &HurwitzQuery) -> Value {
    json!({"g": q.g, "d": q.d, "m": q.m, "alpha": q.alpha.to_string(), "beta": q.beta.to_string()})
}

fn cmd_hurwitz(
    g: usize,
    d: usize,
    m: usize,
    alpha: &Partition,
    beta: &Partition,
    route: RouteArg,
) -> Result<Rendered> {
    let q = HurwitzQuery::new(g, d, m, alpha.clone(), beta.clone())?;
    let values: Vec<HurwitzValue> = match route {
        RouteArg::Character => vec![hurwitz(&q, Route::Character)?],
        RouteArg::Sinh => vec![hurwitz(&q, Route::Sinh)?],
        RouteArg::Bernoulli => vec![hurwitz(&q, Route::Bernoulli)?],
        RouteArg::All => cross_check(&q)?,
    };
    let t = values[0].t;
    let mut csv = String::from("route,numerator,denominator\n");
    let mut text = String::new();
    let mut results = Vec::new();
    for v in &values {
        let mut entry = rational_json(&v.value);
        entry["route"] = json!(v.route.name());
        results.push(entry);
        let _ = writeln!(csv, "{},{},{}", v.route, v.value.numer(), v.value.denom());
        let _ = writeln!(text, "{q} = {}  [{}, t = {t}]", v.value, v.route);
    }
    Ok(Rendered {
        json: json!({"command": "hurwitz", "query": query_json(&q), "t": t, "value": rational_json(&values[0].value), "results": results}),
        csv,
        text,
    })
}

fn table_render(kind: &str, table: &CoefficientTable) -> Rendered {
    let mut csv = String::from("b,numerator,denominator\n");
    let mut text = String::new();
    let mut entries = Vec::new();
    for (b, v) in table.nonzero() {
        let label: Vec<String> = b.iter().map(usize::to_string).collect();
        let mut entry = rational_json(v);
        entry["b"] = json!(b);
        entries.push(entry);
        let _ = writeln!(csv, "{},{},{}", label.join(" "), v.numer(), v.denom());
        let taus: Vec<String> = b.iter().map(|x| format!("tau_{x}")).collect();
        let _ = writeln!(text, "<<{}>> = {v}", taus.join(" "));
    }
    Rendered {
        json: json!({
            "command": "coeff",
            "kind": kind,
            "g": table.g,
            "d": table.d,
            "m": table.m,
            "n": table.n,
            "entries": entries,
        }),
        csv,
        text,
    }
}

fn cmd_coeff(
    g: usize,
    d: Option<usize>,
    m: Option<usize>,
    double: bool,
    n: usize,
) -> Result<Rendered> {
    if double {
        return Ok(table_render("double", &double_table(g, n)?));
    }
    let (d, m) = (d.expect("clap enforces"), m.expect("clap enforces"));
    Ok(table_render(
        "quasi-triple",
        &quasi_triple_table(g, d, m, n, 2 * g)?,
    ))
}

/// Class lists used by `verify`: single classes, pairs, transposition chains
/// of length up to 4 and triples mixing a chain with two classes.
pub fn verify_class_lists(d: usize) -> Vec<ClassList> {
    let parts = partitions_of(d);
    let mut lists = Vec::new();
    let push = |lists: &mut Vec<ClassList>, cs: Vec<Partition>| {
        lists.push(ClassList::new(d, cs).expect("weights match"))
    };
    for a in &parts {
        push(&mut lists, vec![a.clone()]);
    }
    for a in &parts {
        for b in &parts {
            push(&mut lists, vec![a.clone(), b.clone()]);
        }
    }
    if let Some(tau) = Partition::transposition(d) {
        for len in 1..=4 {
            push(&mut lists, vec![tau.clone(); len]);
        }
        for a in &parts {
            for b in &parts {
                push(&mut lists, vec![a.clone(), tau.clone(), b.clone()]);
            }
        }
    }
    lists
}

fn cmd_verify(max_d: usize, budget: u128) -> Result<(Rendered, i32)> {
    let config = OracleConfig {
        max_d: max_d.max(1),
        budget,
    };
    let mut rows = Vec::new();
    let mut failed = false;
    for d in 1..=max_d {
        let mut instances = 0usize;
        let mut failures = Vec::new();
        for list in verify_class_lists(d) {
            let expected = oracle_xi_all(&list, &config)?;
            if xi_all(&list)? != expected {
                failures.push(format!("xi {list}"));
            }
            for pi in partitions_of(d) {
                let count = oracle_frobenius(&list, &Permutation::from_cycle_type(&pi), &config)?;
                if frobenius_count(&list, &pi)? != count {
                    failures.push(format!("frobenius {list} at {pi}"));
                }
            }
            instances += 1;
        }
        failed |= !failures.is_empty();
        rows.push(("oracle", d, instances, failures));

        let mut failures = Vec::new();
        let queries: Vec<HurwitzQuery> = one_part_queries(d, 2)
            .into_iter()
            .filter(|q| q.d == d)
            .collect();
        for q in &queries {
            match cross_check(q) {
                Ok(_) => {}
                Err(Error::Mismatch(msg)) => failures.push(msg),
                Err(e) => return Err(e),
            }
        }
        failed |= !failures.is_empty();
        rows.push(("routes", d, queries.len(), failures));
    }

    let mut csv = String::from("suite,d,instances,failures,status\n");
    let mut text = String::new();
    let mut json_rows = Vec::new();
    for (suite, d, n, failures) in &rows {
        let status = if failures.is_empty() { "pass" } else { "FAIL" };
        let _ = writeln!(csv, "{suite},{d},{n},{},{status}", failures.len());
        let _ = writeln!(
            text,
            "{status:4}  {suite:7} d={d}  {n} instances, {} failures",
            failures.len()
        );
        for f in failures {
            let _ = writeln!(text, "      {f}");
        }
        json_rows.push(
            json!({"suite": suite, "d": d, "instances": n, "failures": failures, "status": status}),
        );
    }
    let rendered = Rendered {
        json: json!({"command": "verify", "max_d": max_d, "budget": budget.to_string(), "passed": !failed, "rows": json_rows}),
        csv,
        text,
    };
    Ok((rendered, if failed { 4 } else { 0 }))
}

fn cmd_table(g: usize, d: usize) -> Result<Rendered> {
    if d == 0 {
        return Err(Error::Precondition("degree d must be at least 1".into()));
    }
    let mut csv = String::from("beta,m,t,numerator,denominator\n");
    let mut text = String::new();
    let mut rows = Vec::new();
    for beta in partitions_of(d) {
        for m in 1..=d {
            let q = HurwitzQuery::one_part(g, d, m, beta.clone())?;
            if !q.is_admissible() {
                continue;
            }
            let v = hurwitz_general(&q)?;
            let mut entry = rational_json(&v.value);
            entry["beta"] = json!(beta.to_string());
            entry["m"] = json!(m);
            entry["t"] = json!(v.t);
            rows.push(entry);
            let _ = writeln!(
                csv,
                "\"{beta}\",{m},{},{},{}",
                v.t,
                v.value.numer(),
                v.value.denom()
            );
            let _ = writeln!(text, "{q} = {}", v.value);
        }
    }
    Ok(Rendered {
        json: json!({"command": "table", "g": g, "d": d, "rows": rows}),
        csv,
        text,
    })
}
