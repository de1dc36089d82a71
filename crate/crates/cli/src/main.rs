use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use vfc::harness::{run, Report, RunConfig, Suite};
use vfc::weil::{haefliger_table, declared_dimension_tables, vey_basis, weil_betti, wtilde_dims};
use vfc::Model;

#[derive(Parser)]
#[command(name = "vfc", version, about = "Exact cocycle verification and cohomology tables for vector fields on T^N and R^N")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Dimension N
    #[arg(long, env = "VFC_DIM", default_value_t = 2)]
    dim: usize,
    /// Output format
    #[arg(long, env = "VFC_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, env = "VFC_OUT")]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// torus or affine
    #[arg(long, env = "VFC_MODEL", default_value = "torus")]
    model: String,
    /// Mode-box radius R
    #[arg(long, env = "VFC_RADIUS", default_value_t = 2)]
    radius: i32,
    /// Random tuples added to every check
    #[arg(long, env = "VFC_SAMPLES", default_value_t = 100)]
    samples: usize,
    /// Seed for sampled and random tuples
    #[arg(long, env = "VFC_SEED", default_value_t = 7)]
    seed: u64,
    /// Largest exhaustive tuple count per check
    #[arg(long, env = "VFC_BUDGET", default_value_t = 500_000)]
    budget: u64,
    /// Report planted defects as raw checks, which fail with witnesses
    #[arg(long)]
    planted: bool,
    /// Zero all wall-time fields so reports are byte-comparable
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Weil,
    Haefliger,
    Declared,
    Vey,
    Wtilde,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: crossed-hom, cocycles, relations, gauge, formal, extensions, all
    Verify {
        suite: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Print a dimension table
    Table {
        which: Table,
        #[command(flatten)]
        common: Common,
        /// Degree for `vey`
        #[arg(long)]
        degree: Option<usize>,
        /// Betti numbers of M for `haefliger`, comma separated (default: torus)
        #[arg(long, value_delimiter = ',')]
        betti: Option<Vec<usize>>,
    },
    /// Run several suites into one consolidated JSON report
    Report {
        /// Output path
        path: PathBuf,
        /// Suites to include (comma separated; empty for none)
        #[arg(long, value_delimiter = ',', default_value = "all")]
        suites: Vec<String>,
        #[command(flatten)]
        args: RunArgs,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn config(a: &RunArgs) -> Result<RunConfig, String> {
    let model: Model = a.model.parse().map_err(|e: vfc::Error| e.to_string())?;
    let cfg = RunConfig {
        dim: a.common.dim,
        model,
        radius: a.radius,
        samples: a.samples,
        seed: a.seed,
        budget: a.budget,
        planted: a.planted,
        timing: !a.no_timing,
        ..RunConfig::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}

fn finish(report: &Report, format: Format, out: &Option<PathBuf>) -> ExitCode {
    if let Err(e) = emit(&render(report, format), out) {
        return usage(e);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn table(which: Table, common: &Common, degree: Option<usize>, betti: Option<Vec<usize>>) -> Result<String, String> {
    let n = common.dim;
    let limit = match which {
        Table::Weil | Table::Vey | Table::Wtilde | Table::Haefliger => 5,
        Table::Declared => 8,
    };
    if n == 0 || n > limit {
        return Err(format!("--dim must be in 1..={limit} for this table, got {n}"));
    }
    let (rows, value): (Vec<(String, String)>, serde_json::Value) = match which {
        Table::Weil => {
            let b = weil_betti(n);
            (b.iter().map(|(q, d)| (format!("H^{q}"), d.to_string())).collect(), json!({ "table": "weil", "N": n, "dims": b }))
        }
        Table::Wtilde => {
            let w = wtilde_dims(n);
            (w.iter().map(|(q, d)| (format!("W~_{q}"), d.to_string())).collect(), json!({ "table": "wtilde", "N": n, "dims": w }))
        }
        Table::Haefliger => {
            let t = haefliger_table(n, betti.as_deref()).map_err(|e| e.to_string())?;
            (t.iter().map(|(s, d)| (format!("H^{s}(V)"), d.to_string())).collect(), json!({ "table": "haefliger", "N": n, "dims": t }))
        }
        Table::Vey => {
            let degrees: Vec<usize> = match degree {
                Some(q) => vec![q],
                None => weil_betti(n).keys().copied().collect(),
            };
            let mut rows = Vec::new();
            let mut map = serde_json::Map::new();
            for q in degrees {
                let ms: Vec<String> = vey_basis(n, q).iter().map(ToString::to_string).collect();
                for m in &ms {
                    rows.push((format!("q={q}"), m.clone()));
                }
                map.insert(q.to_string(), json!(ms));
            }
            (rows, json!({ "table": "vey", "N": n, "basis": map }))
        }
        Table::Declared => {
            let t = declared_dimension_tables(n);
            (
                t.iter().map(|r| (r.group.clone(), format!("{}   ({})", r.dim, r.source))).collect(),
                json!({ "table": "declared-dimensions", "N": n, "note": "stated consequences of structure theorems, not recomputed", "rows": t }),
            )
        }
    };
    Ok(match common.format {
        Format::Json => serde_json::to_string_pretty(&value).expect("table serializes") + "\n",
        Format::Text => {
            let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            rows.iter().map(|(k, v)| format!("{k}{}  {v}\n", " ".repeat(w - k.chars().count()))).collect()
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Verify { suite, args } => {
            let suites = match Suite::parse_list(&suite) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let cfg = match config(&args) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            match run(&suites, &cfg) {
                Ok(r) => finish(&r, args.common.format, &args.common.out),
                Err(e) => usage(e),
            }
        }
        Command::Table { which, common, degree, betti } => match table(which, &common, degree, betti).and_then(|t| emit(&t, &common.out)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage(e),
        },
        Command::Report { path, suites, args } => {
            let mut list = Vec::new();
            for s in suites.iter().filter(|s| !s.is_empty()) {
                match Suite::parse_list(s) {
                    Ok(v) => list.extend(v),
                    Err(e) => return usage(e),
                }
            }
            list.sort();
            list.dedup();
            let cfg = match config(&args) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            match run(&list, &cfg) {
                Ok(r) => finish(&r, Format::Json, &Some(path)),
                Err(e) => usage(e),
            }
        }
    }
}
