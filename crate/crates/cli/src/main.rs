//! Command-line driver for the verification suite.

mod checks;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use checks::{anchor, CheckError, Config, CHECK_IDS};
use kmonoid::kaehler::{build_differential_module, qn_presentation};
use kmonoid::ktheory::{compute_k3, compute_k4, ConeLevels};
use kmonoid::sheafcalc::{level, BlowUp};

#[derive(Parser)]
#[command(name = "kmonoid", version, about = "Exact finite-level checks for the K-theory of the Segre cone")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, default_value_t = 5)]
    nmax: usize,
    #[arg(long, global = true, default_value_t = 3)]
    window: usize,
    #[arg(long = "box-pad", global = true, default_value_t = 4)]
    box_pad: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Range `A..B` of twists for the cohomology audit.
    #[arg(long, global = true, default_value = "-6..6", allow_hyphen_values = true)]
    range: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run one check, or `all`.
    Verify { id: String },
    /// Print a table: hilbert, omega-dims, k4-system or k3-system.
    Table { what: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Serialize)]
struct CheckRecord {
    check_id: String,
    anchor: String,
    verdict: String,
    witnesses: Vec<String>,
    findings: Vec<String>,
    dims: Value,
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct ReportDocument {
    version: &'static str,
    config: Value,
    checks: Vec<CheckRecord>,
}

fn parse_range(s: &str) -> Option<(i64, i64)> {
    let (a, b) = s.split_once("..")?;
    let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (a <= b).then_some((a, b))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn render_report(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("report serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("check_id,anchor,verdict,witnesses,findings,elapsed_ms\n");
            for c in &doc.checks {
                s += &format!(
                    "{},{},{},{},{},{}\n",
                    c.check_id,
                    csv_field(&c.anchor),
                    c.verdict,
                    csv_field(&c.witnesses.join("; ")),
                    csv_field(&c.findings.join("; ")),
                    c.elapsed_ms
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &doc.checks {
                s += &format!("{:<13} {:<5} {}\n", c.check_id, c.verdict, c.anchor);
                for w in &c.witnesses {
                    s += &format!("    witness: {w}\n");
                }
                for f in &c.findings {
                    s += &format!("    finding: {f}\n");
                }
            }
            s
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_verify(id: &str, cfg: &Config, cli: &Cli) -> ExitCode {
    let ids: Vec<&str> = if id == "all" {
        CHECK_IDS.to_vec()
    } else if CHECK_IDS.contains(&id) {
        vec![id]
    } else {
        eprintln!("unknown check id {id}; known: all, {}", CHECK_IDS.join(", "));
        return ExitCode::from(2);
    };
    let results: Vec<(String, Result<checks::Outcome, CheckError>, u128)> = ids
        .par_iter()
        .map(|id| {
            let t = Instant::now();
            let r = checks::run(id, cfg);
            (id.to_string(), r, t.elapsed().as_millis())
        })
        .collect();
    let mut records = Vec::new();
    let mut failed = false;
    for (id, r, ms) in results {
        match r {
            Ok(o) => {
                failed |= !o.pass;
                records.push(CheckRecord {
                    anchor: anchor(&id).to_string(),
                    check_id: id,
                    verdict: if o.pass { "PASS" } else { "FAIL" }.into(),
                    witnesses: o.witnesses,
                    findings: o.findings,
                    dims: serde_json::to_value(o.dims).expect("dims serialize"),
                    elapsed_ms: ms,
                });
            }
            Err(e) => {
                eprintln!("{id}: {e}");
                return ExitCode::from(2);
            }
        }
    }
    records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    let doc = ReportDocument {
        version: env!("CARGO_PKG_VERSION"),
        config: serde_json::to_value(cfg).expect("config serializes"),
        checks: records,
    };
    if let Err(e) = emit(&render_report(&doc, cli.format), &cli.out) {
        eprintln!("{e}");
        return ExitCode::from(2);
    }
    if failed {
        for c in doc.checks.iter().filter(|c| c.verdict == "FAIL") {
            for w in &c.witnesses {
                eprintln!("{} FAIL: {w}", c.check_id);
            }
        }
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

struct Table {
    name: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

fn build_table(what: &str, cfg: &Config) -> Result<Table, String> {
    let e = |x: &dyn std::fmt::Display| x.to_string();
    match what {
        "hilbert" => {
            let dm = build_differential_module(qn_presentation(cfg.nmax).map_err(|x| e(&x))?, 0).map_err(|x| e(&x))?;
            let mut per = vec![0usize; cfg.nmax];
            for (deg, b) in &dm.blocks {
                per[level(deg) as usize] += b.pieces[0].dim();
            }
            let rows = per.iter().enumerate().map(|(j, d)| vec![json!(j), json!(d), json!((j + 1) * (j + 1))]).collect();
            Ok(Table { name: "hilbert", columns: vec!["j", "dim", "expected"], rows })
        }
        "omega-dims" => {
            let cone = ConeLevels::build(cfg.nmax).map_err(|x| e(&x))?;
            let rows = (1..=cfg.nmax)
                .map(|n| {
                    let dm = cone.module(n);
                    let mut r = vec![json!(n)];
                    r.extend((0..=4).map(|m| json!(dm.dim(m))));
                    r
                })
                .collect();
            Ok(Table { name: "omega-dims", columns: vec!["n", "omega0", "omega1", "omega2", "omega3", "omega4"], rows })
        }
        "k4-system" => {
            let cone = ConeLevels::build(cfg.nmax.max(2)).map_err(|x| e(&x))?;
            let (_, r) = compute_k4(&cone).map_err(|x| e(&x))?;
            let rows = r
                .levels
                .iter()
                .map(|l| vec![json!(l.n), json!(l.dim), json!(l.transition_rank), json!(l.witness_nonzero)])
                .collect();
            Ok(Table { name: "k4-system", columns: vec!["n", "dim", "transition_rank", "witness_nonzero"], rows })
        }
        "k3-system" => {
            let cone = ConeLevels::build(cfg.nmax.max(2)).map_err(|x| e(&x))?;
            let (sys, r) = compute_k3(&cone, &BlowUp::new(), cfg.box_pad).map_err(|x| e(&x))?;
            let rows = r
                .levels
                .iter()
                .map(|l| {
                    let rank = (l.n < sys.last()).then(|| sys.transition(l.n).rank());
                    vec![json!(l.n), json!(l.source_dim), json!(l.target_cech), json!(l.kernel_dim), json!(rank)]
                })
                .collect();
            Ok(Table { name: "k3-system", columns: vec!["n", "hc2", "target", "kernel", "transition_rank"], rows })
        }
        other => Err(format!("unknown table {other}; known: hilbert, omega-dims, k4-system, k3-system")),
    }
}

fn render_table(t: &Table, format: Format) -> String {
    let cell = |v: &Value| match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match format {
        Format::Json => {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| Value::Object(t.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                .collect();
            serde_json::to_string_pretty(&json!({"table": t.name, "rows": rows})).expect("table serializes") + "\n"
        }
        Format::Csv => {
            let mut s = t.columns.join(",") + "\n";
            for r in &t.rows {
                s += &(r.iter().map(cell).collect::<Vec<_>>().join(",") + "\n");
            }
            s
        }
        Format::Text => {
            let mut s = t.columns.iter().map(|c| format!("{c:>16}")).collect::<String>() + "\n";
            for r in &t.rows {
                s += &(r.iter().map(|v| format!("{:>16}", cell(v))).collect::<String>() + "\n");
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(range) = parse_range(&cli.range) else {
        eprintln!("bad --range {}; expected A..B with A <= B", cli.range);
        return ExitCode::from(2);
    };
    if cli.nmax < cli.window + 1 || cli.box_pad < 0 {
        eprintln!("need nmax >= window + 1 and box-pad >= 0");
        return ExitCode::from(2);
    }
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    }
    let cfg = Config { nmax: cli.nmax, window: cli.window, box_pad: cli.box_pad, range };
    match &cli.command {
        Command::Verify { id } => cmd_verify(id, &cfg, &cli),
        Command::Table { what } => match build_table(what, &cfg) {
            Ok(t) => match emit(&render_table(&t, cli.format), &cli.out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(2)
                }
            },
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
    }
}
