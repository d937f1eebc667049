use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use negsssp::io::{parse_graph, read_graph_file, write_graph, AnyGraph};
use negsssp::solver::{solve_bfd, solve_sssp_with, Branch, SolverConfig, SolverStats};
use negsssp::testkit::{generate, oracle_sssp, InstanceSpec, OracleResult, Tag};
use negsssp::{Graph, SsspResult, Weight};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "negsssp", version, about = "Shortest paths with negative edge weights")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve single-source shortest paths on a graph file.
    Solve {
        graph: PathBuf,
        /// 1-based source vertex.
        #[arg(default_value_t = 1)]
        source: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cross-check against Bellman-Ford and fail on any mismatch.
        #[arg(long)]
        oracle: bool,
        /// Write a JSON run record here.
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Algo::Elimination)]
        algo: Algo,
    },
    /// Parse a graph file and print its size and negative-edge count.
    Validate { graph: PathBuf },
    /// Write a seeded random instance.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "uniform", value_parser = parse_tag)]
        tag: Tag,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = InstanceSpec::DEFAULT_WEIGHTS.0, allow_hyphen_values = true)]
        wmin: i64,
        #[arg(long, default_value_t = InstanceSpec::DEFAULT_WEIGHTS.1)]
        wmax: i64,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Time the elimination solver against Bellman-Ford on every
    /// `*.graph` file under a directory.
    Bench {
        corpus: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Worker threads for the solver's parallel stages (0 = default).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Algo {
    /// Batched negative-edge elimination followed by Dijkstra.
    #[value(alias = "fineman")]
    Elimination,
    /// One full-length hop-limited search, then Dijkstra.
    Bfd,
    /// Textbook Bellman-Ford.
    BellmanFord,
}

fn parse_tag(s: &str) -> Result<Tag, String> {
    s.parse().map_err(|e: negsssp::Error| e.to_string())
}

const EXIT_CYCLE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Command::Solve { graph, source, seed, oracle, stats, algo } => {
            cmd_solve(&graph, source, seed, oracle, stats.as_deref(), algo)
        }
        Command::Validate { graph } => cmd_validate(&graph),
        Command::Generate { n, m, k, tag, seed, wmin, wmax, out } => {
            cmd_generate(InstanceSpec { n, m, k, weights: (wmin, wmax), tag, seed }, out.as_deref())
        }
        Command::Bench { corpus, seed, out, threads } => cmd_bench(&corpus, seed, out.as_deref(), threads),
    };
    match res {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("negsssp: {msg}");
            ExitCode::FAILURE
        }
    }
}

#[derive(Serialize)]
struct BatchJson {
    r: usize,
    branch: Branch,
    eliminated: usize,
    restarts: usize,
}

#[derive(Serialize)]
struct RunRecord<'a> {
    instance: String,
    n: usize,
    m: usize,
    k: usize,
    algo: Algo,
    seed: u64,
    wall_ms: f64,
    batches: Vec<BatchJson>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<&'a SolverStats>,
}

fn batches_json(stats: Option<&SolverStats>) -> Vec<BatchJson> {
    stats
        .map(|s| {
            s.batches
                .iter()
                .map(|b| BatchJson { r: b.r, branch: b.branch, eliminated: b.eliminated, restarts: b.restarts })
                .collect()
        })
        .unwrap_or_default()
}

struct Run<W> {
    result: SsspResult<W>,
    stats: Option<SolverStats>,
    wall_ms: f64,
}

fn run<W: Weight>(g: &Graph<W>, source: usize, seed: u64, algo: Algo) -> Result<Run<W>, String> {
    let t = Instant::now();
    let (result, stats) = match algo {
        Algo::Elimination => {
            let (r, s) = solve_sssp_with(g, source, &SolverConfig::with_seed(seed)).map_err(|e| e.to_string())?;
            (r, Some(s))
        }
        Algo::Bfd => (solve_bfd(g, source).map_err(|e| e.to_string())?, None),
        Algo::BellmanFord => (from_oracle(oracle_sssp(g, source).map_err(|e| e.to_string())?), None),
    };
    Ok(Run { result, stats, wall_ms: t.elapsed().as_secs_f64() * 1e3 })
}

fn from_oracle<W: Weight>(r: OracleResult<W>) -> SsspResult<W> {
    match r {
        OracleResult::Distances(d) => SsspResult::Distances(d),
        OracleResult::NegativeCycle { .. } => SsspResult::NegativeCycle,
    }
}

fn verdict<W: Weight>(r: &SsspResult<W>) -> &'static str {
    if r.is_cycle() {
        "negative-cycle"
    } else {
        "distances"
    }
}

fn cmd_solve(
    path: &Path,
    source: usize,
    seed: u64,
    oracle: bool,
    stats: Option<&Path>,
    algo: Algo,
) -> Result<ExitCode, String> {
    let graph = read_graph_file(path).map_err(|e| e.to_string())?;
    if source == 0 || source > graph.n() {
        return Err(format!("source {source} outside 1..={}", graph.n()));
    }
    let instance = path.display().to_string();
    match graph {
        AnyGraph::Int(g) => solve_typed(&g, &instance, source - 1, seed, oracle, stats, algo),
        AnyGraph::Float(g) => solve_typed(&g, &instance, source - 1, seed, oracle, stats, algo),
    }
}

fn solve_typed<W: Weight>(
    g: &Graph<W>,
    instance: &str,
    source: usize,
    seed: u64,
    oracle: bool,
    stats_path: Option<&Path>,
    algo: Algo,
) -> Result<ExitCode, String> {
    let out = run(g, source, seed, algo)?;
    if oracle {
        let want = from_oracle(oracle_sssp(g, source).map_err(|e| e.to_string())?);
        if want != out.result {
            return Err(format!("oracle mismatch: {} vs Bellman-Ford {}", verdict(&out.result), verdict(&want)));
        }
    }
    if let Some(p) = stats_path {
        let record = RunRecord {
            instance: instance.to_string(),
            n: g.n(),
            m: g.m(),
            k: g.count_negative(),
            algo,
            seed,
            wall_ms: out.wall_ms,
            batches: batches_json(out.stats.as_ref()),
            verdict: verdict(&out.result),
            solver: out.stats.as_ref(),
        };
        let json = serde_json::to_string_pretty(&record).map_err(|e| e.to_string())?;
        std::fs::write(p, json + "\n").map_err(|e| format!("{}: {e}", p.display()))?;
    }
    match out.result {
        SsspResult::NegativeCycle => {
            println!("NEGATIVE_CYCLE");
            Ok(ExitCode::from(EXIT_CYCLE))
        }
        SsspResult::Distances(d) => {
            let mut text = String::with_capacity(d.len() * 8);
            for (v, d) in d.iter().enumerate() {
                text.push_str(&format!("{} {}\n", v + 1, d));
            }
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_validate(path: &Path) -> Result<ExitCode, String> {
    let g = read_graph_file(path).map_err(|e| e.to_string())?;
    let mode = match g {
        AnyGraph::Int(_) => "integer",
        AnyGraph::Float(_) => "float",
    };
    println!("n={} m={} negative={} weights={mode}", g.n(), g.m(), g.count_negative());
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(spec: InstanceSpec, out: Option<&Path>) -> Result<ExitCode, String> {
    let g = generate(&spec).map_err(|e| e.to_string())?;
    let text = write_graph(&g);
    debug_assert_eq!(parse_graph(&text).map(|a| a.to_text()).ok().as_deref(), Some(text.as_str()));
    match out {
        Some(p) => negsssp::io::write_graph_file(p, &g).map_err(|e| e.to_string())?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct BenchEntry {
    instance: String,
    n: usize,
    m: usize,
    k: usize,
    seed: u64,
    verdict: &'static str,
    agree: bool,
    elimination_ms: f64,
    bellman_ford_ms: f64,
    /// `elimination_ms / bellman_ford_ms`.
    ratio: f64,
    batches: Vec<BatchJson>,
    finish: Option<negsssp::solver::Finish>,
}

#[derive(Serialize)]
struct BenchReport {
    threads: usize,
    parallel: bool,
    instances: Vec<BenchEntry>,
}

fn collect_graphs(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), String> {
    let entries = std::fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for entry in entries {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.is_dir() {
            collect_graphs(&path, out)?;
        } else if path.extension().is_some_and(|x| x == "graph") {
            out.push(path);
        }
    }
    Ok(())
}

fn bench_one<W: Weight>(g: &Graph<W>, instance: String, seed: u64) -> Result<BenchEntry, String> {
    let fast = run(g, 0, seed, Algo::Elimination)?;
    let slow = run(g, 0, seed, Algo::BellmanFord)?;
    Ok(BenchEntry {
        instance,
        n: g.n(),
        m: g.m(),
        k: g.count_negative(),
        seed,
        verdict: verdict(&fast.result),
        agree: fast.result == slow.result,
        elimination_ms: fast.wall_ms,
        bellman_ford_ms: slow.wall_ms,
        ratio: fast.wall_ms / slow.wall_ms.max(1e-9),
        batches: batches_json(fast.stats.as_ref()),
        finish: fast.stats.map(|s| s.finish),
    })
}

fn cmd_bench(corpus: &Path, seed: u64, out: Option<&Path>, threads: usize) -> Result<ExitCode, String> {
    let mut files = Vec::new();
    collect_graphs(corpus, &mut files)?;
    files.sort();
    if files.is_empty() {
        return Err(format!("no .graph files under {}", corpus.display()));
    }
    let work = || -> Result<Vec<BenchEntry>, String> {
        files
            .iter()
            .map(|p| {
                let name = p.strip_prefix(corpus).unwrap_or(p).display().to_string();
                match read_graph_file(p).map_err(|e| e.to_string())? {
                    AnyGraph::Int(g) => bench_one(&g, name, seed),
                    AnyGraph::Float(g) => bench_one(&g, name, seed),
                }
            })
            .collect()
    };
    let (instances, used) = with_threads(threads, work)?;
    let report = BenchReport { threads: used, parallel: negsssp::is_parallel(), instances };
    let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n";
    match out {
        Some(p) => std::fs::write(p, json).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(
    threads: usize,
    f: impl FnOnce() -> Result<T, String> + Send,
) -> Result<(T, usize), String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    let used = pool.current_num_threads();
    Ok((pool.install(f)?, used))
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T>(_threads: usize, f: impl FnOnce() -> Result<T, String>) -> Result<(T, usize), String> {
    Ok((f()?, 1))
}
