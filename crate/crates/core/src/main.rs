use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use colorsym::encoder::{encode_decision_cnf, encode_opt};
use colorsym::formula::Formula;
use colorsym::harness::{self, GridOptions, InstDep, KChoice, DEFAULT_K};
use colorsym::opb::{emit_dimacs_cnf, emit_opb, parse_opb};
use colorsym::sbp::{self, SbpConfig};
use colorsym::solver::{decide, minimize, SolverOptions};
use colorsym::symmetry::{detect_symmetries, lex_leader_sbp, SearchBudget, SymmetryReport};

#[derive(Parser)]
#[command(name = "colorsym", version, about = "Exact graph coloring via 0-1 ILP with symmetry breaking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct EncodeArgs {
    /// DIMACS .col graph
    graph: PathBuf,
    /// color bound
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// instance-independent SBPs, e.g. `nu,sc` or `none`
    #[arg(long, default_value = "none")]
    sbp: SbpConfig,
    /// add lex-leader predicates for detected symmetries
    #[arg(long)]
    inst_dep: bool,
    /// write detected generators in cycle notation
    #[arg(long)]
    emit_generators: Option<PathBuf>,
    #[arg(long, default_value_t = colorsym::symmetry::DEFAULT_MAX_NODES)]
    sym_nodes: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Opb,
    /// decision CNF without the objective (ignores --sbp)
    Cnf,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a graph as an OPB minimization (or a DIMACS CNF decision problem)
    Encode {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, value_enum, default_value = "opb")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode and add symmetry-breaking predicates
    Sbp {
        #[command(flatten)]
        enc: EncodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detect symmetries of an encoded graph or an OPB file
    DetectSym {
        /// .col graph (encoded with --k/--sbp) or .opb formula
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, default_value = "none")]
        sbp: SbpConfig,
        #[arg(long)]
        emit_generators: Option<PathBuf>,
        #[arg(long, default_value_t = colorsym::symmetry::DEFAULT_MAX_NODES)]
        sym_nodes: u64,
    },
    /// Solve a graph (minimum coloring) or an OPB formula; prints a JSON record
    Solve {
        /// .col graph or .opb formula
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, default_value = "none")]
        sbp: SbpConfig,
        #[arg(long)]
        inst_dep: bool,
        /// seconds
        #[arg(long, default_value_t = 1000.0)]
        timeout: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// plain chronological backtracking
        #[arg(long)]
        no_learning: bool,
        /// satisfiability only, ignore the objective
        #[arg(long)]
        decide: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the instance x SBP-config x instance-dependent grid
    Bench {
        instances: Vec<PathBuf>,
        /// color bound, or `auto` for the DSATUR bound capped at 20
        #[arg(long, default_value = "20")]
        k: String,
        /// `all` or a `;`-separated list of configs, e.g. `none;nu,sc`
        #[arg(long, default_value = "all")]
        sbp: String,
        #[arg(long, value_enum, default_value = "both")]
        inst_dep: InstDep,
        #[arg(long, default_value_t = 1000.0)]
        timeout: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// output directory for results.csv and results.md
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// keep the OPB of every solved formula under <out>/encodings
        #[arg(long)]
        keep_encodings: bool,
        /// worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = colorsym::symmetry::DEFAULT_MAX_NODES)]
        sym_nodes: u64,
    },
}

type BoxResult<T> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> BoxResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn is_opb(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("opb"))
}

fn budget(nodes: u64) -> SearchBudget {
    SearchBudget { max_nodes: nodes, ..SearchBudget::default() }
}

fn emit_generators(path: Option<&Path>, report: &SymmetryReport) -> BoxResult<()> {
    if let Some(p) = path {
        let text: String = report.generators.iter().map(|g| format!("{g}\n")).collect();
        fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(())
}

fn print_summary(report: &SymmetryReport) {
    eprintln!(
        "generators: {}  group order: {}  time: {:.3}s{}{}",
        report.summary.num_generators,
        report.summary.group_order,
        report.summary.detection_time.as_secs_f64(),
        if report.capped { "  (capped)" } else { "" },
        if report.rejected > 0 { format!("  rejected: {}", report.rejected) } else { String::new() },
    );
}

fn load_formula(input: &Path, k: usize, cfg: SbpConfig) -> BoxResult<Formula> {
    if is_opb(input) {
        let text = fs::read_to_string(input).map_err(|e| format!("{}: {e}", input.display()))?;
        return Ok(parse_opb(&text)?);
    }
    let g = harness::load_graph(input)?;
    Ok(sbp::apply(encode_opt(&g, k)?, &g, cfg)?)
}

fn parse_configs(text: &str) -> BoxResult<Vec<SbpConfig>> {
    if text == "all" {
        return Ok(SbpConfig::table_configs().to_vec());
    }
    Ok(text.split(';').map(str::parse).collect::<Result<Vec<SbpConfig>, _>>()?)
}

fn run(cli: Cli) -> BoxResult<()> {
    match cli.command {
        Command::Encode { graph, k, format, out } => {
            let g = harness::load_graph(&graph)?;
            let text = match format {
                Format::Opb => emit_opb(&encode_opt(&g, k)?),
                Format::Cnf => emit_dimacs_cnf(&encode_decision_cnf(&g, k)?),
            };
            write_or_print(out.as_deref(), &text)
        }
        Command::Sbp { enc, out } => {
            let g = harness::load_graph(&enc.graph)?;
            let (f, report) = harness::build_formula(&g, enc.k, enc.sbp, enc.inst_dep, &budget(enc.sym_nodes))?;
            if let Some(r) = &report {
                print_summary(r);
                emit_generators(enc.emit_generators.as_deref(), r)?;
            }
            write_or_print(out.as_deref(), &emit_opb(&f))
        }
        Command::DetectSym { input, k, sbp, emit_generators: gen_path, sym_nodes } => {
            let f = load_formula(&input, k, sbp)?;
            let report = detect_symmetries(&f, &budget(sym_nodes));
            print_summary(&report);
            emit_generators(gen_path.as_deref(), &report)?;
            let mut stdout = io::stdout().lock();
            for g in &report.generators {
                if writeln!(stdout, "{g}").is_err() {
                    break;
                }
            }
            Ok(())
        }
        Command::Solve { input, k, sbp, inst_dep, timeout, seed, no_learning, decide: decision, out } => {
            let mut f = load_formula(&input, k, sbp)?;
            if inst_dep {
                let report = detect_symmetries(&f, &SearchBudget::default());
                print_summary(&report);
                f = lex_leader_sbp(&report.generators, &f)?;
            }
            let opts = SolverOptions {
                timeout: Some(Duration::from_secs_f64(timeout)),
                seed,
                learning: !no_learning,
                ..SolverOptions::default()
            };
            let result = if decision || f.objective().is_none() { decide(&f, &opts)? } else { minimize(&f, &opts)? };
            let json = serde_json::to_string_pretty(&result)?;
            write_or_print(out.as_deref(), &format!("{json}\n"))
        }
        Command::Bench { instances, k, sbp, inst_dep, timeout, seed, out, keep_encodings, jobs, sym_nodes } => {
            if instances.is_empty() {
                return Err("no instances given".into());
            }
            let k = match k.as_str() {
                "auto" => KChoice::Heuristic(DEFAULT_K),
                s => KChoice::Fixed(s.parse().map_err(|_| format!("bad --k `{s}`"))?),
            };
            fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
            let opts = GridOptions {
                k,
                configs: parse_configs(&sbp)?,
                inst_dep,
                timeout: Duration::from_secs_f64(timeout),
                seed,
                sym_budget: budget(sym_nodes),
                keep_encodings: keep_encodings.then(|| out.join("encodings")),
                jobs,
            };
            let journal = out.join("results.journal.csv");
            let records = harness::run_grid(&instances, &opts, Some(&journal))?;
            let csv_path = out.join("results.csv");
            let md_path = harness::write_report(&records, &csv_path)?;
            fs::remove_file(&journal).ok();
            print!("{}", fs::read_to_string(&md_path)?);
            eprintln!("wrote {} and {}", csv_path.display(), md_path.display());
            Ok(())
        }
    }
}
