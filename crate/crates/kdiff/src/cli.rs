//! Command-line front end.

use crate::bq::{certify, scan_int, DmTuple, DEFAULT_KMAX};
use crate::cache::{FileStore, Store, ENV_VAR};
use crate::error::Error;
use crate::graph::LevelGraph;
use crate::rat::{self, Q};
use crate::selftest;
use crate::stratum::{LegId, StratumSpec};
use crate::taut::{
    c1_log_cotangent, c1_log_horizontal, euler_characteristic, euler_terms, normal_bundle_c1, residue_rewrite,
    zeta_rewrite, Evaluator, Psi, TautExpression,
};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ENGINE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "kdiff", version, about = "Exact intersection numbers on genus-zero strata of k-differentials")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory of the persistent integral cache.
    #[arg(long, global = true, env = ENV_VAR)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for independent tasks (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbifold Euler characteristic with its term table.
    Chi {
        /// Stratum, e.g. "3;(-1,-1,-1,-1,-2)".
        spec: String,
    },
    /// Level graphs with a given number of passages.
    Graphs {
        /// Stratum, e.g. "3;(-1,-1,-1,-1,-2)".
        spec: String,
        /// Number of level passages.
        #[arg(long, short = 'L', default_value_t = 1)]
        depth: usize,
        /// Include graphs with one horizontal edge (one-passage listing).
        #[arg(long)]
        horizontal: bool,
    },
    /// Covers of the level graphs with a given number of passages.
    Covers {
        /// Stratum, e.g. "3;(-1,-1,-1,-1,-2)".
        spec: String,
        /// Number of level passages.
        #[arg(long, short = 'L', default_value_t = 1)]
        depth: usize,
        /// Include covers of graphs with one horizontal edge.
        #[arg(long)]
        horizontal: bool,
    },
    /// Dump a tautological class: zeta, psi:<leg>, zeta-rewrite:<leg>,
    /// residue:<index>, normal:<divisor index>, c1, c1-horizontal.
    Class {
        /// Stratum, e.g. "3;(-1,-1,-1,-1,-2)".
        spec: String,
        /// Class kind.
        kind: String,
    },
    /// Integral of zeta^a prod psi_i^{p_i}.
    Integrate {
        /// Stratum, e.g. "3;(-1,-1,-1,-1,-2)".
        spec: String,
        /// Power of zeta.
        #[arg(long, default_value_t = 0)]
        zeta: u32,
        /// Psi exponents as leg^exp pairs, e.g. 1^1,2^1.
        #[arg(long, default_value = "")]
        psi: String,
        /// Leg used for the first zeta rewrite.
        #[arg(long)]
        leg: Option<LegId>,
    },
    /// Ball-quotient certificates for five-pointed strata.
    Bq {
        #[command(subcommand)]
        action: BqAction,
    },
    /// Run the invariant suites.
    Selftest {
        /// Restrict to the named suites.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Largest k in the ball-quotient scan.
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: i64,
        /// Compare every INT tuple with the generic evaluator.
        #[arg(long)]
        cross_validate: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum BqAction {
    /// List INT tuples up to a bound on k.
    Scan {
        /// Largest k scanned.
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: i64,
    },
    /// Certify tuples given as k:a1,...,a5, or every scanned tuple.
    Certify {
        /// Tuples such as 3:1,1,1,1,2.
        tuples: Vec<String>,
        /// Certify every INT tuple up to --kmax.
        #[arg(long)]
        all: bool,
        /// Largest k used with --all.
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: i64,
        /// Compare with the generic evaluator.
        #[arg(long)]
        cross_validate: bool,
    },
}

/// Failure of a command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse { .. }) { EXIT_PARSE } else { EXIT_ENGINE };
        Failure { code, message: e.to_string() }
    }
}

type Out<'a> = &'a mut dyn Write;

fn emit(out: Out<'_>, text: impl AsRef<str>) -> Result<(), Failure> {
    writeln!(out, "{}", text.as_ref()).map_err(|e| {
        let code = if e.kind() == std::io::ErrorKind::BrokenPipe { EXIT_OK } else { EXIT_ENGINE };
        Failure { code, message: e.to_string() }
    })
}

/// Drops the "/1" of integral values in ';'-separated cells.
fn tidy(cell: &str) -> String {
    cell.split(';')
        .map(|part| match part.strip_suffix("/1") {
            Some(num) if num.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) && !num.is_empty() => num,
            _ => part,
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_spec(s: &str) -> Result<StratumSpec, Failure> {
    s.parse::<StratumSpec>().map_err(Failure::from)
}

fn evaluator(cli: &Cli) -> Result<Evaluator, Failure> {
    let mut ev = Evaluator::new();
    if let Some(dir) = &cli.cache_dir {
        let store = FileStore::open(dir).map_err(|e| Failure { code: EXIT_ENGINE, message: format!("cache: {e}") })?;
        ev = ev.with_store(Arc::new(store));
    }
    Ok(ev)
}

fn parse_psi(text: &str) -> Result<Psi, Failure> {
    let mut psi = Psi::new();
    let mut pos = 0;
    for item in text.split(',') {
        if !item.trim().is_empty() {
            let bad = || Failure::from(Error::parse(pos, format!("bad psi term '{item}'")));
            let (id, e) = item.split_once('^').ok_or_else(bad)?;
            let id: LegId = id.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            *psi.entry(id).or_insert(0) += e;
        }
        pos += item.len() + 1;
    }
    Ok(psi)
}

fn csv_line(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| if c.contains([',', '"', '\n']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c.clone() })
        .collect::<Vec<_>>()
        .join(",")
}

fn print_table(out: Out<'_>, format: Format, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let list: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| header.iter().zip(r).map(|(h, c)| (h.to_string(), json!(c))).collect())
                .collect();
            emit(out, serde_json::to_string_pretty(&list).expect("json"))
        }
        Format::Csv => {
            emit(out, csv_line(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>()))?;
            for r in rows {
                emit(out, csv_line(r))?;
            }
            Ok(())
        }
        Format::Text => {
            let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|c| tidy(c)).collect()).collect();
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for r in &rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |cells: Vec<&str>| {
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ")
            };
            emit(out, line(header.to_vec()).trim_end())?;
            for r in &rows {
                emit(out, line(r.iter().map(|s| s.as_str()).collect()).trim_end())?;
            }
            Ok(())
        }
    }
}

fn graph_rows(ev: &Evaluator, spec: &StratumSpec, graphs: &[LevelGraph], with_covers: bool) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let kappas: Vec<String> = (0..g.edges.len()).map(|e| g.kappa(e).to_string()).collect();
        let dims = g.level_dimensions(spec).map(|d| d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"));
        for c in ev.covers(g) {
            let ells: Vec<String> = c.passage_ells().iter().map(|x| x.to_string()).collect();
            let mut row = vec![
                i.to_string(),
                g.encode(),
                g.aut_order().to_string(),
                kappas.join(";"),
                ells.join(";"),
                c.prong_count().to_string(),
                rat::fmt(&c.s_pi()),
                dims.clone().unwrap_or_default(),
            ];
            if with_covers {
                row.push(c.encode());
                row.push(c.aut_commuting().to_string());
            }
            rows.push(row);
        }
    }
    rows
}

fn cmd_graphs(cli: &Cli, out: Out<'_>, spec: &str, depth: usize, horizontal: bool, covers: bool) -> Result<(), Failure> {
    let spec = parse_spec(spec)?;
    let ev = evaluator(cli)?;
    let graphs = ev.graphs(&spec, depth, horizontal)?;
    if graphs.is_empty() && cli.format == Format::Text {
        let dim = spec.dimension()?;
        return emit(out, format!("no level graphs with {depth} passages (dimension {dim})"));
    }
    let rows = graph_rows(&ev, &spec, &graphs, covers);
    let mut header = vec!["index", "graph", "aut", "kappa", "ell", "K", "S", "level_dims"];
    if covers {
        header.extend(["cover", "aut_h"]);
    }
    print_table(out, cli.format, &header, &rows)
}

fn cmd_chi(cli: &Cli, out: Out<'_>, spec: &str) -> Result<(), Failure> {
    let spec = parse_spec(spec)?;
    let ev = evaluator(cli)?;
    let chi = euler_characteristic(&ev, &spec)?;
    let terms = euler_terms(&ev, &spec)?;
    match cli.format {
        Format::Json => emit(
            out,
            serde_json::to_string_pretty(&json!({"spec": spec.to_string(), "chi": rat::fmt(&chi), "terms": terms}))
                .expect("json"),
        ),
        _ => {
            if cli.format == Format::Text {
                emit(out, format!("chi = {}", rat::show(&chi)))?;
            }
            let rows: Vec<Vec<String>> = terms
                .iter()
                .map(|t| {
                    vec![
                        t.depth.to_string(),
                        t.graph.clone(),
                        rat::fmt(&t.s_pi),
                        t.n_top.to_string(),
                        t.aut.to_string(),
                        t.kappa.to_string(),
                        t.level_integrals.iter().map(rat::fmt).collect::<Vec<_>>().join(";"),
                        rat::fmt(&t.value),
                    ]
                })
                .collect();
            print_table(out, cli.format, &["L", "graph", "S", "N_top", "aut", "kappa", "levels", "term"], &rows)
        }
    }
}

fn cmd_class(cli: &Cli, out: Out<'_>, spec: &str, kind: &str) -> Result<(), Failure> {
    let spec = parse_spec(spec)?;
    let ev = evaluator(cli)?;
    let (name, arg) = kind.split_once(':').map_or((kind, None), |(a, b)| (a, Some(b)));
    let number = |what: &str| -> Result<usize, Failure> {
        arg.and_then(|a| a.parse().ok())
            .ok_or_else(|| Failure::from(Error::parse(name.len() + 1, format!("expected {what} after '{name}:'"))))
    };
    let expr: TautExpression = match name {
        "zeta" => TautExpression::zeta(&spec),
        "psi" => TautExpression::psi(&spec, number("a leg")? as LegId),
        "zeta-rewrite" => zeta_rewrite(&ev, &spec, number("a leg")? as LegId)?,
        "residue" => {
            let i = number("an equation index")?;
            if i >= spec.equations().len() {
                return Err(Error::Invalid(format!("no residue equation {i}")).into());
            }
            residue_rewrite(&ev, &spec, i)?
        }
        "normal" => {
            let i = number("a divisor index")?;
            let graphs = ev.graphs(&spec, 1, true)?;
            let g = graphs.get(i).ok_or_else(|| Failure::from(Error::Invalid(format!("no divisor {i}"))))?;
            let cover = ev.covers(g).into_iter().next().expect("cover");
            normal_bundle_c1(&ev, &spec, &cover)?
        }
        "c1" => c1_log_cotangent(&ev, &spec)?,
        "c1-horizontal" => c1_log_horizontal(&ev, &spec)?,
        _ => return Err(Error::parse(0, format!("unknown class '{kind}'")).into()),
    };
    let value = expr.to_json();
    match cli.format {
        Format::Json => emit(out, serde_json::to_string_pretty(&value).expect("json")),
        _ => {
            let rows: Vec<Vec<String>> = value
                .as_array()
                .expect("list")
                .iter()
                .map(|t| {
                    vec![
                        t["coefficient"].as_str().unwrap_or_default().to_string(),
                        t["graph"].as_str().unwrap_or_default().to_string(),
                        t["psi"].to_string(),
                        t["zeta"].to_string(),
                    ]
                })
                .collect();
            print_table(out, cli.format, &["coefficient", "graph", "psi", "zeta"], &rows)
        }
    }
}

fn cmd_integrate(cli: &Cli, out: Out<'_>, spec: &str, zeta: u32, psi: &str, leg: Option<LegId>) -> Result<(), Failure> {
    let spec = parse_spec(spec)?;
    let psi = parse_psi(psi)?;
    let ev = evaluator(cli)?;
    let dim = spec.dimension()?;
    let degree = zeta as i64 + psi.values().map(|&e| e as i64).sum::<i64>();
    if degree != dim {
        return Err(Error::IntegrandDegree { degree, dim }.into());
    }
    let value: Q = match leg {
        Some(i) if zeta > 0 => ev.eval_via_leg(&spec, zeta, &psi, i)?,
        _ => ev.eval(&spec, zeta, &psi)?,
    };
    match cli.format {
        Format::Json => emit(out, json!({"spec": spec.to_string(), "value": rat::fmt(&value)}).to_string()),
        Format::Csv => emit(out, format!("spec,value\n{},{}", csv_line(&[spec.to_string()]), rat::fmt(&value))),
        Format::Text => emit(out, rat::show(&value)),
    }
}

fn cmd_bq(cli: &Cli, out: Out<'_>, action: &BqAction) -> Result<(), Failure> {
    match action {
        BqAction::Scan { kmax } => {
            let list = scan_int(*kmax);
            match cli.format {
                Format::Json => emit(
                    out,
                    serde_json::to_string_pretty(&json!({
                        "kmax": kmax,
                        "count": list.len(),
                        "tuples": list.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    }))
                    .expect("json"),
                ),
                _ => {
                    let rows: Vec<Vec<String>> = list
                        .iter()
                        .map(|t| {
                            let mut r = vec![t.k.to_string()];
                            r.extend(t.a.iter().map(|x| x.to_string()));
                            r
                        })
                        .collect();
                    print_table(out, cli.format, &["k", "a1", "a2", "a3", "a4", "a5"], &rows)?;
                    if cli.format == Format::Text {
                        emit(out, format!("{} tuples with k <= {kmax}", list.len()))?;
                    }
                    Ok(())
                }
            }
        }
        BqAction::Certify { tuples, all, kmax, cross_validate } => {
            let mut list: Vec<DmTuple> = Vec::new();
            for t in tuples {
                list.push(t.parse().map_err(|e: Error| {
                    let code = if matches!(e, Error::Parse { .. } | Error::Invalid(_)) { EXIT_PARSE } else { EXIT_ENGINE };
                    Failure { code, message: format!("{t}: {e}") }
                })?);
            }
            if *all {
                list.extend(scan_int(*kmax));
            }
            let reports: Vec<_> = list
                .par_iter()
                .map(|t| {
                    let ev = cross_validate.then(Evaluator::new);
                    certify(t, ev.as_ref())
                })
                .collect::<Result<_, _>>()?;
            match cli.format {
                Format::Json => {
                    let value = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
                    emit(out, serde_json::to_string_pretty(&value).expect("json"))
                }
                _ => {
                    let rows: Vec<Vec<String>> = reports
                        .iter()
                        .map(|r| {
                            vec![
                                r.tuple.clone(),
                                r.int.to_string(),
                                r.c1_sq.clone().unwrap_or_default(),
                                r.c2.clone().unwrap_or_default(),
                                r.bmy.to_string(),
                                r.certified().to_string(),
                                if *cross_validate { r.cross_validated.to_string() } else { "-".into() },
                            ]
                        })
                        .collect();
                    print_table(out, cli.format, &["tuple", "int", "c1_sq", "c2", "bmy", "certified", "cross_validated"], &rows)
                }
            }
        }
    }
}

fn cmd_selftest(cli: &Cli, out: Out<'_>, suites: &[String], kmax: i64, cross: bool) -> Result<(), Failure> {
    for s in suites {
        if !selftest::SUITES.contains(&s.as_str()) {
            return Err(Error::parse(0, format!("unknown suite '{s}'")).into());
        }
    }
    let store = match &cli.cache_dir {
        Some(dir) => Some(FileStore::open(dir).map_err(|e| Failure { code: EXIT_ENGINE, message: format!("cache: {e}") })?),
        None => None,
    };
    let chosen = (!suites.is_empty()).then_some(suites);
    let results = selftest::run(chosen, kmax, cross, store.as_ref().map(|s| s as &dyn Store));
    match cli.format {
        Format::Json => emit(out, serde_json::to_string_pretty(&results).expect("json"))?,
        _ => {
            for r in &results {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                emit(out, format!("{verdict} {} ({} checks)", r.suite, r.checks))?;
                for f in &r.failures {
                    emit(out, format!("  {f}"))?;
                }
            }
        }
    }
    if results.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Failure { code: EXIT_SELFTEST, message: "selftest failed".into() })
    }
}

/// Runs a parsed command line, writing results to `out`.
pub fn run(cli: &Cli, out: Out<'_>) -> Result<(), Failure> {
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    match &cli.command {
        Command::Chi { spec } => cmd_chi(cli, out, spec),
        Command::Graphs { spec, depth, horizontal } => cmd_graphs(cli, out, spec, *depth, *horizontal, false),
        Command::Covers { spec, depth, horizontal } => cmd_graphs(cli, out, spec, *depth, *horizontal, true),
        Command::Class { spec, kind } => cmd_class(cli, out, spec, kind),
        Command::Integrate { spec, zeta, psi, leg } => cmd_integrate(cli, out, spec, *zeta, psi, *leg),
        Command::Bq { action } => cmd_bq(cli, out, action),
        Command::Selftest { suites, kmax, cross_validate } => cmd_selftest(cli, out, suites, *kmax, *cross_validate),
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if f.code != EXIT_OK && (cli.verbose || f.code != EXIT_SELFTEST) {
                eprintln!("error: {}", f.message);
            }
            f.code
        }
    }
}
