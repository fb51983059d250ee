use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use smallcut::cactus::certify_cut_classes;
use smallcut::circulation::{random_circulation, BitCirculation, BitWidth};
use smallcut::dist::components::FLOOD_DEVIATION;
use smallcut::dist::DistConfig;
use smallcut::generators::GeneratorSpec;
use smallcut::graph::{bfs_tree, parse_graph, Graph};
use smallcut::lv::{dist_report, seq_report, Algo, DistRun, LvError};
use smallcut::oracle::oracle_report;
use smallcut::report::CutReport;
use smallcut::rng::{derive_seed, Prng};
use smallcut::Verdict;

const EXIT_MISMATCH: u8 = 1;
const EXIT_REJECT: u8 = 2;
const EXIT_FAULT: u8 = 3;
const EXIT_USAGE: u8 = 64;

const METRICS_HEADER: &str = "algo,n,m,diameter,rounds,messages,max_bits,seed";

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Reject(String),
    #[error("{0}")]
    Fault(String),
    #[error("reports differ in: {0}")]
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Reject(_) => EXIT_REJECT,
            CliError::Fault(_) => EXIT_FAULT,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl From<LvError> for CliError {
    fn from(e: LvError) -> Self {
        match e {
            LvError::GaveUp { .. } => CliError::Reject(e.to_string()),
            other => CliError::Fault(other.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Cut edges, cut pairs and cut vertices by random circulations.
#[derive(Parser, Debug)]
#[command(name = "smallcut", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write a generated graph.
    Gen(GenArgs),
    /// Run the sequential algorithms.
    Seq(SeqArgs),
    /// Run the distributed algorithms in the CONGEST simulator.
    Dist(DistArgs),
    /// Certify cut classes by contraction to a cactus.
    Cactus(CactusArgs),
    /// Brute-force reference report.
    Oracle(OracleArgs),
    /// Compare two reports; exits 1 if a shared field differs.
    Diff { left: PathBuf, right: PathBuf },
    /// Sweep a graph family and emit a metrics CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// path, cycle, complete, grid, star, theta, bowtie, barbell, twin-k4,
    /// random, attach-cycle, attach-path, fig2, fig6.
    family: String,
    /// Numeric parameters of the family, e.g. `grid 3 4` or `random 20 30 7`.
    params: Vec<u64>,
    /// Base graph for attach-cycle and attach-path.
    #[arg(long)]
    base: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// One of cut-edges, cut-pairs, cut-vertices, two-ecc, three-ecc, all.
    algo: Algo,
    /// Graph file; `-` reads stdin.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repeat each stage until its verifier accepts.
    #[arg(long)]
    las_vegas: bool,
    /// Run each stage once and verify it; a rejection exits with 2.
    #[arg(long, conflicts_with = "las_vegas")]
    verify: bool,
    #[arg(long, default_value_t = 200)]
    max_attempts: usize,
    /// Write the circulation of the last stage.
    #[arg(long)]
    dump_phi: Option<PathBuf>,
    /// Report destination; stdout by default.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn mode(&self) -> (bool, usize) {
        match (self.las_vegas, self.verify) {
            (true, _) => (true, self.max_attempts),
            (false, true) => (true, 1),
            (false, false) => (false, 1),
        }
    }
}

#[derive(Args, Debug)]
struct SeqArgs {
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct SimArgs {
    /// Circulation width, overriding the per-algorithm default.
    #[arg(long)]
    bits: Option<usize>,
    /// Per-message bit budget; defaults to 8·⌈log₂ n⌉.
    #[arg(long)]
    budget_bits: Option<usize>,
    /// Round limit for each phase.
    #[arg(long)]
    max_rounds: Option<u64>,
    #[arg(long, default_value_t = 0)]
    leader: usize,
}

impl SimArgs {
    fn config(&self, seed: u64, max_attempts: usize, trace: bool) -> DistConfig {
        let mut cfg = DistConfig::new(seed);
        cfg.bits = self.bits;
        cfg.budget_bits = self.budget_bits;
        cfg.max_rounds = self.max_rounds;
        cfg.leader = self.leader;
        cfg.max_attempts = max_attempts;
        cfg.trace = trace;
        cfg
    }
}

#[derive(Args, Debug)]
struct DistArgs {
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    sim: SimArgs,
    /// Write the message transcript, one `round src dst bits_hex` line each.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Append a metrics row, writing the header first if the file is new.
    #[arg(long)]
    metrics_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CactusArgs {
    /// A 2-edge-connected graph file; `-` reads stdin.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certify this circulation dump instead of sampling one.
    #[arg(long, conflicts_with = "las_vegas")]
    phi: Option<PathBuf>,
    /// Resample until the certifier accepts.
    #[arg(long)]
    las_vegas: bool,
    #[arg(long, default_value_t = 200)]
    max_attempts: usize,
    /// Write the contracted cactus as JSON.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Distributed algorithm, optionally prefixed `dist-`.
    algo: String,
    #[arg(long, default_value = "cycle")]
    family: String,
    /// Family sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "16,64,256")]
    sizes: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Runs per size; trial `i` uses seed `seed + i`.
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long)]
    las_vegas: bool,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn read_input(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    parse_graph(&read_input(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_report(path: &Path) -> CliResult<CutReport> {
    CutReport::from_json(&read_input(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Fault(format!("stdout: {e}"))),
    }
}

fn dump_phi(path: Option<&Path>, g: &Graph, phi: Option<&BitCirculation>) -> CliResult {
    match (path, phi) {
        (Some(p), Some(phi)) => write_output(Some(p), &phi.dump(g)),
        (Some(p), None) => write_output(Some(p), ""),
        _ => Ok(()),
    }
}

fn metrics_row(algo: &str, g: &Graph, run: &DistRun, flood: bool) -> String {
    let m = &run.session.metrics;
    let label = if flood {
        format!("{algo};{FLOOD_DEVIATION}")
    } else {
        algo.to_string()
    };
    format!(
        "{label},{},{},{},{},{},{},{}",
        g.n(),
        g.m(),
        g.diameter(),
        m.rounds,
        m.messages,
        m.max_payload_bits,
        run.session.cfg.seed
    )
}

fn append_metrics(path: &Path, row: &str) -> CliResult {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let text = if fresh {
        format!("{METRICS_HEADER}\n{row}\n")
    } else {
        format!("{row}\n")
    };
    f.write_all(text.as_bytes())
        .map_err(|e| CliError::Fault(format!("{}: {e}", path.display())))
}

fn cmd_gen(a: GenArgs) -> CliResult {
    let spec = GeneratorSpec::parse(&a.family, &a.params).map_err(|e| CliError::Usage(e.to_string()))?;
    let base = match (&a.base, spec.needs_base()) {
        (Some(p), true) => Some(read_graph(p)?),
        (None, true) => return Err(CliError::Usage(format!("{} needs --base", a.family))),
        (_, false) => None,
    };
    let g = spec
        .generate(base.as_ref())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    write_output(a.out.as_deref(), &g.to_text())
}

fn cmd_seq(a: SeqArgs) -> CliResult {
    let r = &a.run;
    let g = read_graph(&r.graph)?;
    let (las_vegas, attempts) = r.mode();
    let run = seq_report(&g, r.seed, r.algo, las_vegas, attempts)?;
    dump_phi(r.dump_phi.as_deref(), &g, run.phi.as_ref())?;
    write_output(r.out.as_deref(), &run.report.to_json())
}

fn cmd_dist(a: DistArgs) -> CliResult {
    let r = &a.run;
    let g = read_graph(&r.graph)?;
    let (las_vegas, attempts) = r.mode();
    let cfg = a.sim.config(r.seed, attempts, a.trace.is_some());
    let run = dist_report(&g, cfg, r.algo, las_vegas)?;
    if let Some(p) = &a.trace {
        let mut text = run.session.trace.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        write_output(Some(p), &text)?;
    }
    if let Some(p) = &a.metrics_csv {
        append_metrics(p, &metrics_row(&r.algo.to_string(), &g, &run, r.algo.needs_three_ecc()))?;
    }
    dump_phi(r.dump_phi.as_deref(), &g, run.phi.as_ref())?;
    write_output(r.out.as_deref(), &run.report.to_json())
}

fn cmd_cactus(a: CactusArgs) -> CliResult {
    let g = read_graph(&a.graph)?;
    let fault = |e: &dyn std::fmt::Display| CliError::Fault(e.to_string());
    let given = match &a.phi {
        Some(p) => Some(BitCirculation::parse_dump(&g, &read_input(p)?).map_err(|e| CliError::Usage(e.to_string()))?),
        None => None,
    };
    let t = bfs_tree(&g, 0).map_err(|e| fault(&e))?;
    let mut rng = Prng::new(derive_seed(a.seed, 2));
    let tries = if a.las_vegas { a.max_attempts } else { 1 };
    let mut last_reason = String::new();
    for _ in 0..tries {
        let phi = match &given {
            Some(phi) => phi.clone(),
            None => random_circulation(&g, &t, BitWidth::for_cut_classes(g.n(), g.m()), &mut rng),
        };
        match certify_cut_classes(&g, &phi).map_err(|e| fault(&e))? {
            Verdict::Accept(cert) => {
                if let Some(p) = &a.dump {
                    write_output(Some(p), &(cert.cactus.to_json() + "\n"))?;
                }
                let mut report = CutReport::empty(&g);
                report.set_classes(
                    cert.classes
                        .iter()
                        .map(|c| (Some(phi.value(c[0]).to_string()), c.clone()))
                        .collect(),
                );
                report.verified = Some(true);
                return write_output(a.out.as_deref(), &report.to_json());
            }
            Verdict::Reject(why) => last_reason = why,
        }
    }
    Err(CliError::Reject(format!("certificate rejected: {last_reason}")))
}

fn cmd_oracle(a: OracleArgs) -> CliResult {
    let g = read_graph(&a.graph)?;
    g.require_connected().map_err(|e| CliError::Fault(e.to_string()))?;
    write_output(a.out.as_deref(), &oracle_report(&g).to_json())
}

fn cmd_diff(left: &Path, right: &Path) -> CliResult {
    let fields = read_report(left)?.diff(&read_report(right)?);
    if fields.is_empty() {
        Ok(())
    } else {
        Err(CliError::Mismatch(fields.join(", ")))
    }
}

fn cmd_bench(a: BenchArgs) -> CliResult {
    let algo: Algo = a
        .algo
        .strip_prefix("dist-")
        .unwrap_or(&a.algo)
        .parse()
        .map_err(CliError::Usage)?;
    let mut out = format!("{METRICS_HEADER}\n");
    for &size in &a.sizes {
        let g = GeneratorSpec::parse(&a.family, &[size])
            .and_then(|s| s.generate(None))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        for trial in 0..a.trials {
            let cfg = a.sim.config(a.seed + trial, 200, false);
            let run = dist_report(&g, cfg, algo, a.las_vegas)?;
            out.push_str(&metrics_row(&algo.to_string(), &g, &run, algo.needs_three_ecc()));
            out.push('\n');
        }
    }
    write_output(a.out.as_deref(), &out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Seq(a) => cmd_seq(a),
        Cmd::Dist(a) => cmd_dist(a),
        Cmd::Cactus(a) => cmd_cactus(a),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::Diff { left, right } => cmd_diff(&left, &right),
        Cmd::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("smallcut: {e}");
            ExitCode::from(e.code())
        }
    }
}
