//! Experiment driver: color bound selection, the SBP grid, per-run records
//! and CSV/Markdown reports.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use num_bigint::BigUint;
use petgraph::algo::dsatur_coloring;
use petgraph::graph::{NodeIndex, UnGraph};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoder::encode_opt;
use crate::formula::Formula;
use crate::graph::{read_dimacs_col, Graph, GraphError};
use crate::opb::emit_opb;
use crate::sbp::{self, SbpConfig};
use crate::solver::{minimize, SolverOptions, DEFAULT_TIMEOUT};
use crate::symmetry::{detect_symmetries, lex_leader_sbp, SearchBudget};

/// Color bound used by the experiments unless overridden.
pub const DEFAULT_K: usize = 20;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

/// DSATUR greedy coloring, colors `0..`.
pub fn greedy_coloring(g: &Graph) -> Vec<usize> {
    let mut pg: UnGraph<(), ()> = UnGraph::with_capacity(g.num_vertices(), g.num_edges());
    for _ in 0..g.num_vertices() {
        pg.add_node(());
    }
    for &(a, b) in g.edges() {
        pg.add_edge(NodeIndex::new(a as usize), NodeIndex::new(b as usize), ());
    }
    let (colors, _) = dsatur_coloring(&pg);
    (0..g.num_vertices()).map(|v| colors[&NodeIndex::new(v)]).collect()
}

/// DSATUR color count, clamped to `1..=cap`.
pub fn choose_k(g: &Graph, cap: usize) -> usize {
    let used = greedy_coloring(g).into_iter().max().map_or(0, |c| c + 1);
    used.max(1).min(cap.max(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KChoice {
    Fixed(usize),
    /// DSATUR bound capped at the given value
    Heuristic(usize),
}

impl KChoice {
    pub fn resolve(self, g: &Graph) -> usize {
        match self {
            KChoice::Fixed(k) => k,
            KChoice::Heuristic(cap) => choose_k(g, cap),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum InstDep {
    No,
    Yes,
    Both,
}

impl InstDep {
    pub fn flags(self) -> &'static [bool] {
        match self {
            InstDep::No => &[false],
            InstDep::Yes => &[true],
            InstDep::Both => &[false, true],
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridOptions {
    pub k: KChoice,
    pub configs: Vec<SbpConfig>,
    pub inst_dep: InstDep,
    pub timeout: Duration,
    pub seed: u64,
    pub sym_budget: SearchBudget,
    /// OPB files of the solved formulas go here when set
    pub keep_encodings: Option<PathBuf>,
    /// worker threads; 0 lets rayon decide
    pub jobs: usize,
}

impl Default for GridOptions {
    fn default() -> GridOptions {
        GridOptions {
            k: KChoice::Fixed(DEFAULT_K),
            configs: SbpConfig::table_configs().to_vec(),
            inst_dep: InstDep::Both,
            timeout: DEFAULT_TIMEOUT,
            seed: 0,
            sym_budget: SearchBudget::default(),
            keep_encodings: None,
            jobs: 0,
        }
    }
}

/// One grid cell. Size fields describe the formula handed to the solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub sbp_config: String,
    pub instance_dependent: bool,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub num_pb: usize,
    pub num_generators: usize,
    /// decimal, arbitrary precision
    pub group_order: String,
    pub symmetry_capped: bool,
    pub detect_time_s: f64,
    /// OPTIMAL, SAT, UNSAT, TIMEOUT or ERROR
    pub solve_status: String,
    pub best_value: Option<i64>,
    pub solve_time_s: f64,
    pub error: Option<String>,
}

impl BenchRecord {
    pub fn solved(&self) -> bool {
        matches!(self.solve_status.as_str(), "OPTIMAL" | "UNSAT")
    }

    fn error(instance: &str, g: &Graph, k: usize, cfg: SbpConfig, dep: bool, msg: String) -> BenchRecord {
        BenchRecord {
            instance: instance.to_string(),
            n: g.num_vertices(),
            m: g.num_edges(),
            k,
            sbp_config: cfg.to_string(),
            instance_dependent: dep,
            num_vars: 0,
            num_clauses: 0,
            num_pb: 0,
            num_generators: 0,
            group_order: "1".into(),
            symmetry_capped: false,
            detect_time_s: 0.0,
            solve_status: "ERROR".into(),
            best_value: None,
            solve_time_s: 0.0,
            error: Some(msg),
        }
    }
}

/// Columns holding wall-clock measurements.
pub const TIME_COLUMNS: [&str; 2] = ["detect_time_s", "solve_time_s"];

/// Encodes with `cfg`, then optionally adds lex-leader predicates for the
/// detected symmetries. Returns the formula and the detection summary.
pub fn build_formula(
    g: &Graph,
    k: usize,
    cfg: SbpConfig,
    inst_dep: bool,
    budget: &SearchBudget,
) -> Result<(Formula, Option<crate::symmetry::SymmetryReport>), String> {
    let f = encode_opt(g, k).map_err(|e| e.to_string())?;
    let f = sbp::apply(f, g, cfg).map_err(|e| e.to_string())?;
    if !inst_dep {
        return Ok((f, None));
    }
    let report = detect_symmetries(&f, budget);
    let f = lex_leader_sbp(&report.generators, &f).map_err(|e| e.to_string())?;
    Ok((f, Some(report)))
}

/// Runs one (instance, config, flag) cell.
pub fn run_cell(name: &str, g: &Graph, cfg: SbpConfig, dep: bool, opts: &GridOptions) -> BenchRecord {
    let k = opts.k.resolve(g);
    let (f, report) = match build_formula(g, k, cfg, dep, &opts.sym_budget) {
        Ok(x) => x,
        Err(e) => return BenchRecord::error(name, g, k, cfg, dep, e),
    };
    let detect_time = report.as_ref().map_or(0.0, |r| r.summary.detection_time.as_secs_f64());
    if let Some(dir) = &opts.keep_encodings {
        let path = dir.join(format!("{name}_{}_{}.opb", cfg.to_string().replace(',', "+"), if dep { "dep" } else { "nodep" }));
        if let Err(e) = fs::write(&path, emit_opb(&f)) {
            log::warn!("{}: {e}", path.display());
        }
    }
    let solver_opts = SolverOptions { timeout: Some(opts.timeout), seed: opts.seed, ..SolverOptions::default() };
    let result = match minimize(&f, &solver_opts) {
        Ok(r) => r,
        Err(e) => return BenchRecord::error(name, g, k, cfg, dep, e.to_string()),
    };
    let (num_generators, group_order, capped) = match &report {
        Some(r) => (r.summary.num_generators, r.summary.group_order.clone(), r.capped),
        None => (0, BigUint::from(1u32), false),
    };
    BenchRecord {
        instance: name.to_string(),
        n: g.num_vertices(),
        m: g.num_edges(),
        k,
        sbp_config: cfg.to_string(),
        instance_dependent: dep,
        num_vars: f.num_vars(),
        num_clauses: f.clauses().len(),
        num_pb: f.pb_constraints().len(),
        num_generators,
        group_order: group_order.to_string(),
        symmetry_capped: capped,
        detect_time_s: detect_time,
        solve_status: result.status.to_string(),
        best_value: result.best_value,
        solve_time_s: result.stats.elapsed_s,
        error: None,
    }
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

pub fn load_graph(path: &Path) -> Result<Graph, HarnessError> {
    let file = File::open(path).map_err(io_err(path))?;
    read_dimacs_col(io::BufReader::new(file)).map_err(|source| HarnessError::Graph { path: path.to_path_buf(), source })
}

/// Runs every (instance, config, flag) cell. With `journal` set, each
/// record is appended there as soon as it completes. The returned records
/// are in grid order regardless of completion order.
pub fn run_grid(
    instances: &[PathBuf],
    opts: &GridOptions,
    journal: Option<&Path>,
) -> Result<Vec<BenchRecord>, HarnessError> {
    let graphs: Vec<(String, Graph)> =
        instances.iter().map(|p| Ok((instance_name(p), load_graph(p)?))).collect::<Result<_, HarnessError>>()?;
    let cells: Vec<(usize, SbpConfig, bool)> = (0..graphs.len())
        .flat_map(|i| {
            opts.configs.iter().flat_map(move |&c| opts.inst_dep.flags().iter().map(move |&d| (i, c, d)))
        })
        .collect();
    let appender = match journal {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(io_err(dir))?;
            }
            let file = File::create(path).map_err(io_err(path))?;
            Some(Mutex::new(csv::Writer::from_writer(file)))
        }
        None => None,
    };
    if let Some(dir) = &opts.keep_encodings {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let work = || -> Result<Vec<BenchRecord>, HarnessError> {
        cells
            .par_iter()
            .map(|&(i, cfg, dep)| {
                let (name, g) = &graphs[i];
                log::info!("{name} {cfg} inst-dep={dep}");
                let rec = run_cell(name, g, cfg, dep, opts);
                if let Some(w) = &appender {
                    let mut w = w.lock().unwrap();
                    w.serialize(&rec)?;
                    w.flush().map_err(|e| HarnessError::Csv(e.into()))?;
                }
                Ok(rec)
            })
            .collect()
    };
    if opts.jobs == 0 {
        work()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().expect("thread pool");
        pool.install(work)
    }
}

pub fn records_to_csv(records: &[BenchRecord]) -> Result<String, HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))?).unwrap())
}

pub fn read_records(text: &str) -> Result<Vec<BenchRecord>, HarnessError> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().map(|r| r.map_err(HarnessError::from)).collect()
}

pub const CSV_HEADER: [&str; 17] = [
    "instance",
    "n",
    "m",
    "k",
    "sbp_config",
    "instance_dependent",
    "num_vars",
    "num_clauses",
    "num_pb",
    "num_generators",
    "group_order",
    "symmetry_capped",
    "detect_time_s",
    "solve_status",
    "best_value",
    "solve_time_s",
    "error",
];

/// Per (config, flag) totals in grid order.
pub fn summarize(records: &[BenchRecord]) -> Vec<ConfigSummary> {
    let mut order: Vec<(String, bool)> = Vec::new();
    let mut map: BTreeMap<(String, bool), ConfigSummary> = BTreeMap::new();
    for r in records {
        let key = (r.sbp_config.clone(), r.instance_dependent);
        let s = map.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            ConfigSummary { config: r.sbp_config.clone(), instance_dependent: r.instance_dependent, ..Default::default() }
        });
        s.instances += 1;
        s.solved += r.solved() as usize;
        s.errors += (r.solve_status == "ERROR") as usize;
        s.solve_time_s += r.solve_time_s;
        s.detect_time_s += r.detect_time_s;
        s.generators += r.num_generators;
        s.group_order_sum += r.group_order.parse::<BigUint>().unwrap_or_default();
    }
    order.into_iter().map(|k| map.remove(&k).unwrap()).collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigSummary {
    pub config: String,
    pub instance_dependent: bool,
    pub instances: usize,
    pub solved: usize,
    pub errors: usize,
    pub solve_time_s: f64,
    pub detect_time_s: f64,
    pub generators: usize,
    pub group_order_sum: BigUint,
}

/// CSV with one row per record plus a Markdown summary of per-config
/// totals.
pub fn report(records: &[BenchRecord]) -> Result<(String, String), HarnessError> {
    Ok((records_to_csv(records)?, markdown_summary(records)))
}

pub fn markdown_summary(records: &[BenchRecord]) -> String {
    let summary = summarize(records);
    let mut md = String::from(
        "| SBPs | inst-dep | instances | solved | errors | solve time (s) | detect time (s) | #G | sum #S |\n\
         |---|---|---|---|---|---|---|---|---|\n",
    );
    for s in &summary {
        md.push_str(&format!(
            "| {} | {} | {} | {} | {} | {:.2} | {:.2} | {} | {} |\n",
            s.config,
            if s.instance_dependent { "yes" } else { "no" },
            s.instances,
            s.solved,
            s.errors,
            s.solve_time_s,
            s.detect_time_s,
            s.generators,
            sci(&s.group_order_sum),
        ));
    }
    let solved = |cfg: &str, dep: bool| {
        summary.iter().find(|s| s.config == cfg && s.instance_dependent == dep).map(|s| s.solved)
    };
    for dep in [false, true] {
        if let (Some(base), Some(nusc)) = (solved("none", dep), solved("nu,sc", dep)) {
            let tag = if dep { "with" } else { "without" };
            md.push_str(&format!(
                "\nnu,sc vs none ({tag} instance-dependent SBPs): {nusc} vs {base} solved ({:+})\n",
                nusc as i64 - base as i64
            ));
        }
    }
    md
}

/// Compact scientific form for large orders.
fn sci(x: &BigUint) -> String {
    let s = x.to_string();
    if s.len() <= 6 {
        return s;
    }
    format!("{}.{}e+{}", &s[..1], &s[1..2], s.len() - 1)
}

/// Writes the final CSV and the Markdown summary next to it.
pub fn write_report(records: &[BenchRecord], csv_path: &Path) -> Result<PathBuf, HarnessError> {
    let (csv_text, md) = report(records)?;
    fs::write(csv_path, csv_text).map_err(io_err(csv_path))?;
    let md_path = csv_path.with_extension("md");
    let mut f = File::create(&md_path).map_err(io_err(&md_path))?;
    f.write_all(md.as_bytes()).map_err(io_err(&md_path))?;
    Ok(md_path)
}

/// CSV text with the time columns blanked, for run-to-run comparison.
pub fn strip_time_columns(csv_text: &str) -> String {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = rdr.headers().cloned().unwrap_or_default();
    let keep: Vec<usize> = (0..headers.len()).filter(|&i| !TIME_COLUMNS.contains(&&headers[i])).collect();
    let mut out = keep.iter().map(|&i| &headers[i]).collect::<Vec<_>>().join(",");
    out.push('\n');
    for rec in rdr.records().flatten() {
        out.push_str(&keep.iter().map(|&i| &rec[i]).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}
