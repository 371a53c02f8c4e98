//! `efrac`: command-line front end for the efrac-core library.

use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use efrac_core::bounds::lcm_attainable;
use efrac_core::geometry::summarize;
use efrac_core::oracle::{parse_delta_list, DEFAULT_BUDGET};
use efrac_core::{
    canonical_q, enumerate_exact, extremal_gap_tuple, extremal_lcm_tuple, gap_amount, greedy, lcm_bound,
    sharp_sum_bound, split_expand, srq_decompose, sweep, u, EgyptianTuple, LogStructure, QMode, Rational,
    SweepConfig, VerificationReport,
};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

const BUDGET_ENV: &str = "EFRAC_ORACLE_BUDGET";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "efrac", version, about = "Exact Egyptian-fraction bounds, searches and verification")]
struct Cli {
    /// Output format. CSV is only available for commands that print tuples.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Gap,
    Lcm,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Greedy (Fibonacci-Sylvester) expansion of a positive rational.
    Greedy {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        x: Rational,
    },
    /// Replace 1/m at a 1-based position by 1/(m+1) + 1/(m(m+1)).
    Split {
        /// Denominators, comma or space separated.
        tuple: String,
        #[arg(long)]
        at: usize,
    },
    /// All nondecreasing k-term representations of a rational.
    Enumerate {
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        sum: Rational,
        #[arg(long)]
        terms: u64,
    },
    /// Gap below k - delta, and the sharp sum bound when k is given.
    Gap {
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        delta: Rational,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Upper bound on the lcm over a deficiency class.
    LcmBound {
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        delta: Rational,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Extremal tuple attaining the gap or lcm bound.
    Extremal {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        k: u64,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        delta: Rational,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Generalized Sylvester values u(p,q) and t(p,q) = 1 + u(p,q).
    Sylvester {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Print every row 1..=p.
        #[arg(long)]
        table: bool,
    },
    /// Exhaustive verification sweep. Exits 2 on any counterexample or budget exhaustion.
    Oracle {
        #[arg(long)]
        k_max: u64,
        #[arg(long, allow_hyphen_values = true)]
        delta_list: String,
        /// `canonical` or `all-upto:N`.
        #[arg(long, default_value = "canonical")]
        q_mode: String,
        /// Search node budget; defaults to $EFRAC_ORACLE_BUDGET, then 100000000.
        #[arg(long)]
        budget: Option<u64>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Log structure on projective space: volume, gap and index bounds.
    Geometry {
        #[arg(long)]
        dim: u64,
        /// e.g. "m:2,m:3,one,one".
        #[arg(long, default_value = "")]
        coeffs: String,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        t: Option<Rational>,
        #[arg(long)]
        q: Option<u64>,
    },
}

#[derive(Serialize)]
struct OutputEnvelope {
    command: &'static str,
    inputs: Value,
    result: Value,
    version: &'static str,
}

struct Outcome {
    inputs: Value,
    result: Value,
    text: String,
    /// Set for commands whose result is a flat list of tuples.
    rows: Option<Vec<EgyptianTuple>>,
    failed: bool,
}

impl Outcome {
    fn new(inputs: Value, result: impl Serialize, text: String) -> anyhow::Result<Self> {
        Ok(Outcome { inputs, result: serde_json::to_value(result)?, text, rows: None, failed: false })
    }

    fn tuples(inputs: Value, rows: Vec<EgyptianTuple>) -> anyhow::Result<Self> {
        let text = rows.iter().map(|t| join(t, " ") + "\n").collect();
        let mut out = Outcome::new(inputs, &rows, text)?;
        out.rows = Some(rows);
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| e.to_string())
}

fn parse_tuple(s: &str) -> anyhow::Result<EgyptianTuple> {
    let dens = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<BigUint>().with_context(|| format!("bad denominator {p:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(EgyptianTuple::new(dens)?)
}

fn join(t: &EgyptianTuple, sep: &str) -> String {
    t.denominators().iter().map(|m| m.to_string()).collect::<Vec<_>>().join(sep)
}

fn q_or_canonical(q: Option<u64>, delta: &Rational) -> anyhow::Result<u64> {
    match q {
        Some(q) => Ok(q),
        None => Ok(canonical_q(delta)?),
    }
}

fn default_budget() -> anyhow::Result<u64> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{BUDGET_ENV}={v:?} is not a node count")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Greedy { .. } => "greedy",
        Command::Split { .. } => "split",
        Command::Enumerate { .. } => "enumerate",
        Command::Gap { .. } => "gap",
        Command::LcmBound { .. } => "lcm-bound",
        Command::Extremal { .. } => "extremal",
        Command::Sylvester { .. } => "sylvester",
        Command::Oracle { .. } => "oracle",
        Command::Geometry { .. } => "geometry",
    }
}

fn run(command: &Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Greedy { x } => Outcome::tuples(json!({ "x": x }), vec![greedy(x)?]),
        Command::Split { tuple, at } => {
            let t = parse_tuple(tuple)?;
            let inputs = json!({ "tuple": t, "at": at.to_string() });
            Outcome::tuples(inputs, vec![split_expand(&t, *at)?])
        }
        Command::Enumerate { sum, terms } => {
            let inputs = json!({ "sum": sum, "terms": terms.to_string() });
            Outcome::tuples(inputs, enumerate_exact(sum, *terms)?)
        }
        Command::Gap { delta, q, k } => {
            let q = q_or_canonical(*q, delta)?;
            let srq = srq_decompose(delta, q)?;
            let gap = gap_amount(delta, q)?;
            let mut result = json!({ "s": srq.s.to_string(), "r": srq.r.to_string(), "q": q.to_string(), "gap": gap });
            let mut text = format!("s: {}\nr: {}\nq: {q}\ngap: {gap}\n", srq.s, srq.r);
            if let Some(k) = k {
                let bound = sharp_sum_bound(*k, delta, q)?;
                writeln!(text, "sharp_sum_bound: {bound}")?;
                result["sharp_sum_bound"] = json!(bound);
            }
            let inputs = json!({ "delta": delta, "q": q.to_string(), "k": k.map(|k| k.to_string()) });
            Outcome::new(inputs, result, text)
        }
        Command::LcmBound { delta, q } => {
            let q = q_or_canonical(*q, delta)?;
            let bound = lcm_bound(delta, q)?;
            let srq = srq_decompose(delta, q)?;
            let attainable = lcm_attainable(&srq);
            let text = format!("s: {}\nr: {}\nq: {q}\nlcm_bound: {bound}\nattainable: {attainable}\n", srq.s, srq.r);
            let result = json!({
                "s": srq.s.to_string(), "r": srq.r.to_string(), "q": q.to_string(),
                "lcm_bound": bound, "attainable": attainable,
            });
            Outcome::new(json!({ "delta": delta, "q": q.to_string() }), result, text)
        }
        Command::Extremal { kind, k, delta, q } => {
            let q = q_or_canonical(*q, delta)?;
            let tuple = match kind {
                Kind::Gap => extremal_gap_tuple(*k, delta, q)?,
                Kind::Lcm => extremal_lcm_tuple(*k, delta, q)?,
            };
            let inputs = json!({ "kind": kind, "k": k.to_string(), "delta": delta, "q": q.to_string() });
            let mut out = Outcome::tuples(inputs, tuple.into_iter().collect())?;
            if out.text.is_empty() {
                out.text = "none\n".into();
            }
            Ok(out)
        }
        Command::Sylvester { p, q, table } => {
            let first = if *table { 1 } else { *p };
            let mut rows = Vec::new();
            let mut text = String::new();
            for i in first..=*p {
                let ui = u(i, *q)?;
                let ti = &ui + 1u32;
                if *table {
                    writeln!(text, "{i} {ui} {ti}")?;
                } else {
                    writeln!(text, "u: {ui}\nt: {ti}")?;
                }
                rows.push(json!({ "p": i.to_string(), "u": ui.to_string(), "t": ti.to_string() }));
            }
            let inputs = json!({ "p": p.to_string(), "q": q.to_string(), "table": table });
            let result = if *table { Value::Array(rows) } else { rows.pop().unwrap_or(Value::Null) };
            Outcome::new(inputs, result, text)
        }
        Command::Oracle { k_max, delta_list, q_mode, budget, timing: with_timing } => {
            let budget = match budget {
                Some(b) => *b,
                None => default_budget()?,
            };
            let config = SweepConfig {
                k_max: *k_max,
                deltas: parse_delta_list(delta_list)?,
                q_mode: q_mode.parse::<QMode>()?,
                budget,
            };
            let report = sweep(&config)?;
            let report = if *with_timing { report } else { report.without_timing() };
            let inputs = json!({
                "k_max": k_max.to_string(), "deltas": config.deltas, "q_mode": q_mode, "budget": budget.to_string(),
            });
            let text = oracle_text(&report);
            let mut out = Outcome::new(inputs, &report, text)?;
            out.failed = !report.passed;
            Ok(out)
        }
        Command::Geometry { dim, coeffs, t, q } => {
            let ls = LogStructure::new(*dim, LogStructure::parse_coefficients(coeffs)?)?;
            let summary = summarize(&ls, t.clone(), *q)?;
            let mut text = format!(
                "v: {}\nt: {}\nq: {}\ngap_bound: {}\nindex_bound: {}\n",
                summary.volume, summary.t, summary.q, summary.gap_bound, summary.index_bound
            );
            if let Some(r) = &summary.bpf_index {
                writeln!(text, "r: {r}")?;
            }
            let inputs = json!({ "dim": dim.to_string(), "coeffs": coeffs, "t": t, "q": q.map(|q| q.to_string()) });
            Outcome::new(inputs, &summary, text)
        }
    }
}

fn oracle_text(report: &VerificationReport) -> String {
    let mut s = String::new();
    let status = if report.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(s, "{status}");
    let _ = writeln!(s, "nodes: {}", report.stats.nodes);
    if let Some(ms) = report.stats.millis {
        let _ = writeln!(s, "millis: {ms}");
    }
    let _ = writeln!(s, "lcm classes: {}", report.lcm_classes.len());
    let _ = writeln!(s, "equality witnesses: {}", report.equality_witnesses.len());
    if report.budget_exceeded {
        let _ = writeln!(s, "budget exceeded");
    }
    for c in &report.counterexamples {
        let tuple = c.tuple.as_ref().map(|t| t.to_string()).unwrap_or_default();
        let delta = c.delta.as_ref().map(|d| d.to_string()).unwrap_or_default();
        let _ = writeln!(s, "counterexample {:?} {tuple} delta={delta} q={} {}", c.claim, c.q, c.detail);
    }
    s
}

fn render(cli: &Cli, out: Outcome) -> anyhow::Result<String> {
    match cli.format {
        Format::Text => Ok(out.text),
        Format::Csv => {
            let rows = out.rows.ok_or_else(|| anyhow!("csv output is only available for tuple lists"))?;
            Ok(rows.iter().map(|t| join(t, ",") + "\n").collect())
        }
        Format::Json => {
            let env = OutputEnvelope {
                command: command_name(&cli.command),
                inputs: out.inputs,
                result: out.result,
                version: VERSION,
            };
            Ok(serde_json::to_string_pretty(&env)? + "\n")
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = (|| {
        let tuple_command = matches!(
            cli.command,
            Command::Greedy { .. } | Command::Split { .. } | Command::Enumerate { .. } | Command::Extremal { .. }
        );
        if cli.format == Format::Csv && !tuple_command {
            bail!("--format csv is only available for greedy, split, enumerate and extremal");
        }
        let out = run(&cli.command)?;
        let failed = out.failed;
        Ok((render(&cli, out)?, failed))
    })();
    match result {
        Ok((text, failed)) => {
            print!("{text}");
            if failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
