mod cache;
mod config;
mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gwsym::descend::DescendEngine;
use gwsym::jfun::j_function;
use gwsym::rational::{format_rational, one};
use gwsym::target::{parse_target, virtual_dimension};
use gwsym::verify::{run_all, run_suite, Suite, SuiteParams, SuiteReport};
use gwsym::wdvv::{kontsevich_table, WdvvEngine};
use gwsym::{CurveClass, DescBracket, GwError, Rational};
use serde::Serialize;

use crate::cache::CacheFile;
use crate::config::{Config, CACHE_ENV};
use crate::parse::parse_insertions;

const MAX_ND: u32 = 40;
const MAX_LADDER: u32 = 8;

/// Failures that map to specific exit codes: 2, 3 and 4.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Unsupported(String),
    Inconsistent(String),
}

impl std::error::Error for CliError {}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Unsupported(m) | CliError::Inconsistent(m) => {
                f.write_str(m)
            }
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gwsym",
    version,
    about = "Exact genus-zero Gromov-Witten invariants"
)]
struct Cli {
    /// JSON config with optional `order`, `cache_path`, `workers`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Persistent invariant cache (overrides $GWSYM_CACHE and the config).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one invariant.
    Gw {
        /// `P<r>`, `P<r>xP<s>[x...]` or `CI:<n>:<l1,l2,...>`.
        target: String,
        /// Curve class: `4`, or `1,2` for products.
        #[arg(long = "d")]
        degree: String,
        /// Comma-separated insertions, e.g. `2x11`, `(1,0),(1,1)`, `pt,pt`, `psi2:2`.
        #[arg(long, allow_hyphen_values = true)]
        ins: String,
        #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
        engine: EngineChoice,
    },
    /// Emit a table as CSV or JSON.
    Table {
        #[command(subcommand)]
        kind: TableKind,
    },
    /// Run an identity suite (or `all`); exits 1 on any failure.
    Verify {
        suite: String,
        #[arg(long = "target")]
        targets: Vec<String>,
        #[arg(long)]
        dmax: Option<u32>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Manage the persistent cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum TableKind {
    /// Rational plane curve counts `n_1..n_dmax`.
    Nd {
        #[arg(long)]
        dmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// The descendant ladder `n_d^(a)` on P2.
    #[command(name = "nd_a")]
    NdA {
        #[arg(long = "d")]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Laurent coefficients of a J-function.
    Jfun {
        #[arg(long)]
        target: String,
        #[arg(long = "d")]
        degree: String,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    Export { path: PathBuf },
    Import { path: PathBuf },
    Stats,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Wdvv,
    Descend,
    Auto,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
struct VdimCheck {
    vdim: i64,
    codim: i64,
    on_dimension: bool,
}

#[derive(Serialize)]
struct GwRecord {
    target: String,
    beta: String,
    insertions: Vec<String>,
    value: String,
    engine: &'static str,
    vdim_check: VdimCheck,
}

struct Settings {
    config: Config,
    cache: Option<PathBuf>,
    workers: Option<usize>,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CliError>() {
            return match e {
                CliError::Usage(_) => 2,
                CliError::Unsupported(_) => 3,
                CliError::Inconsistent(_) => 4,
            };
        }
        if let Some(e) = cause.downcast_ref::<GwError>() {
            return match e {
                GwError::Parse(_)
                | GwError::InvalidCurveClass(_)
                | GwError::InvalidInsertion(_)
                | GwError::TooManyDescendants
                | GwError::UnknownSuite(_)
                | GwError::BoundExceeded(_)
                | GwError::OrderTooSmall { .. }
                | GwError::UnstableDegreeZero(_) => 2,
                GwError::UnsupportedTarget(_) => 3,
                _ => 4,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 5;
        }
    }
    4
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let cache = config.cache_path(cli.cache.as_deref(), std::env::var(CACHE_ENV).ok());
    let workers = cli.workers.or(config.workers);
    let settings = Settings {
        config,
        cache,
        workers,
    };
    match cli.command {
        Command::Gw {
            target,
            degree,
            ins,
            engine,
        } => cmd_gw(&settings, &target, &degree, &ins, engine),
        Command::Table { kind } => cmd_table(&settings, kind),
        Command::Verify {
            suite,
            targets,
            dmax,
            trials,
            seed,
        } => cmd_verify(
            &settings,
            &suite,
            SuiteParams {
                targets,
                dmax,
                trials,
                workers: settings.workers,
            },
            seed,
        ),
        Command::Cache { action } => cmd_cache(&settings, action),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_gw(
    settings: &Settings,
    target: &str,
    degree: &str,
    ins: &str,
    engine: EngineChoice,
) -> Result<u8> {
    let target = parse_target(target)?;
    let beta: CurveClass = degree.parse()?;
    target.check_class(&beta)?;
    let insertions = parse_insertions(&target, ins)?;
    let descendants = insertions.iter().filter(|i| i.psi > 0).count();
    if descendants > 1 {
        return Err(GwError::TooManyDescendants.into());
    }
    let use_wdvv = match engine {
        EngineChoice::Wdvv => {
            if descendants > 0 {
                return Err(CliError::Unsupported(
                    "the wdvv engine handles ordinary invariants only".into(),
                )
                .into());
            }
            true
        }
        EngineChoice::Descend => false,
        EngineChoice::Auto => target.is_projective_space() && descendants == 0,
    };
    let mut store = match &settings.cache {
        Some(p) => Some(CacheFile::load(p)?),
        None => None,
    };
    let key = target.to_string();
    let raw = if use_wdvv {
        let w = WdvvEngine::new(&target)?;
        if let Some(c) = &store {
            let entries = c.entries_for(cache::WDVV, &key);
            w.import_entries(entries.iter().map(|(k, v)| (k.as_str(), v)))?;
        }
        let codims: Vec<usize> = insertions.iter().map(|i| i.index).collect();
        let v = w.gw(beta.0[0] as i64, &codims)?;
        if let Some(c) = &mut store {
            for (k, v) in w.export_entries() {
                c.insert(format!("{}{k}", cache::WDVV), &v)?;
            }
        }
        v
    } else {
        let e = DescendEngine::new(&target);
        if let Some(c) = &store {
            e.import_entries(c.entries_for(cache::DESCEND, &key))?;
        }
        let plain: Vec<usize> = insertions
            .iter()
            .filter(|i| i.psi == 0)
            .map(|i| i.index)
            .collect();
        let desc = insertions
            .iter()
            .find(|i| i.psi > 0)
            .map(|i| (i.index, i.psi));
        let v = e.bracket(&DescBracket::new(&target, beta.clone(), &plain, desc)?)?;
        if let Some(c) = &mut store {
            for (k, v) in e.export_entries() {
                c.insert(format!("{}{k}", cache::DESCEND), &v)?;
            }
        }
        v
    };
    if let (Some(c), Some(p)) = (&store, &settings.cache) {
        c.save(p)?;
    }
    let weight: Rational = insertions.iter().fold(one(), |acc, i| acc * &i.weight);
    let codim: i64 = insertions
        .iter()
        .map(|i| (target.codim(i.index) + i.psi as usize) as i64)
        .sum();
    let vdim = virtual_dimension(&target, &beta, insertions.len());
    let record = GwRecord {
        target: key,
        beta: beta.to_string(),
        insertions: insertions.iter().map(|i| i.label.clone()).collect(),
        value: format_rational(&(raw * weight)),
        engine: if use_wdvv { "wdvv" } else { "descend" },
        vdim_check: VdimCheck {
            vdim,
            codim,
            on_dimension: vdim == codim,
        },
    };
    print_json(&record)?;
    Ok(0)
}

fn emit_table(format: Format, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(header)?;
            for r in rows {
                w.write_record(&r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .into_iter()
                .map(|r| {
                    header
                        .iter()
                        .map(|h| h.to_string())
                        .zip(r.into_iter().map(serde_json::Value::String))
                        .collect()
                })
                .collect();
            print_json(&objects)?;
        }
    }
    Ok(())
}

fn cmd_table(settings: &Settings, kind: TableKind) -> Result<u8> {
    match kind {
        TableKind::Nd { dmax, format } => {
            if dmax == 0 || dmax > MAX_ND {
                return Err(CliError::Usage(format!("--dmax must be in 1..={MAX_ND}")).into());
            }
            let rows = kontsevich_table(dmax)
                .iter()
                .enumerate()
                .map(|(i, n)| vec![(i + 1).to_string(), format_rational(n)])
                .collect();
            emit_table(format, &["d", "n_d"], rows)?;
        }
        TableKind::NdA { degree, format } => {
            if degree == 0 || degree > MAX_LADDER {
                return Err(CliError::Usage(format!("--d must be in 1..={MAX_LADDER}")).into());
            }
            let e = DescendEngine::new(&parse_target("P2")?);
            let rows = e
                .ladder_nd_a(degree)?
                .iter()
                .enumerate()
                .map(|(a, v)| vec![degree.to_string(), a.to_string(), format_rational(v)])
                .collect();
            emit_table(format, &["d", "a", "value"], rows)?;
        }
        TableKind::Jfun {
            target,
            degree,
            order,
            format,
        } => {
            let target = parse_target(&target)?;
            let beta: CurveClass = degree.parse()?;
            let j = j_function(&target, &beta, order.or(settings.config.order))?;
            let rows = j
                .rows()
                .into_iter()
                .map(|(e, m, q)| vec![e.to_string(), m.pretty(), format_rational(&q)])
                .collect();
            emit_table(format, &["t_exponent", "monomial", "coefficient"], rows)?;
        }
    }
    Ok(0)
}

fn report_status(reports: &[SuiteReport]) -> u8 {
    for r in reports {
        eprintln!(
            "{}: {} checks, {} failures, {:?}",
            r.suite,
            r.instances,
            r.failures.len(),
            r.wall_time
        );
    }
    if reports.iter().all(SuiteReport::passed) {
        0
    } else {
        1
    }
}

fn cmd_verify(settings: &Settings, suite: &str, params: SuiteParams, seed: u64) -> Result<u8> {
    if suite == "all" {
        if params
            != (SuiteParams {
                workers: settings.workers,
                ..SuiteParams::default()
            })
        {
            return Err(
                CliError::Usage("`verify all` takes only --seed and --workers".into()).into(),
            );
        }
        let reports = run_all(seed, settings.workers)?;
        print_json(&reports)?;
        return Ok(report_status(&reports));
    }
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, &params, seed)?;
    print_json(&report)?;
    Ok(report_status(std::slice::from_ref(&report)))
}

fn cmd_cache(settings: &Settings, action: CacheAction) -> Result<u8> {
    let path = settings.cache.clone().ok_or_else(|| {
        CliError::Usage(format!(
            "no cache configured: pass --cache, set {CACHE_ENV} or cache_path in the config"
        ))
    })?;
    match action {
        CacheAction::Stats => print_json(&CacheFile::load(&path)?.stats())?,
        CacheAction::Export { path: out } => {
            let store = CacheFile::load(&path)?;
            store.save(&out)?;
            print_json(&store.stats())?;
        }
        CacheAction::Import { path: src } => {
            if !src.exists() {
                return Err(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    src.display().to_string(),
                ))
                .context("importing cache");
            }
            let incoming = CacheFile::load(&src)?;
            let mut store = CacheFile::load(&path)?;
            store.merge(&incoming)?;
            store.save(&path)?;
            print_json(&store.stats())?;
        }
    }
    Ok(0)
}
