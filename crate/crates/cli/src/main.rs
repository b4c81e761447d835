use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hcm::coloring::{solve_kcoloring, ColoringConfig, ColoringMode};
use hcm::containers::{
    build_almost_regular_collection, build_hypergraph_collection, build_regular_collection, AlmostRegularOptions,
    BuildMode, Built, HyperOptions, HypergraphContainerParams, RegularOptions,
};
use hcm::extsum::{eval_disjoint, eval_k2_counted, eval_k3, eval_naive, ExtSumInstance, NAIVE_LIMIT};
use hcm::generate::{random_independent_set, random_kcnf, random_regular_graph, rng};
use hcm::mis::{mis_base, mis_containers, MisMode, MisParams};
use hcm::partition::{
    build_partition_collection_almost_regular, build_partition_collection_regular, PartitionOptions,
};
use hcm::sat::{solve_ksat_dense, SatConfig, SatMode, StructureParams};
use hcm::{dimacs, Error, Graph, Hypergraph, VertexSet};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hcm", version, about = "Container-based exact solvers for independent set, coloring and k-SAT")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a container collection for a graph or hypergraph.
    Containers(ContainersArgs),
    /// Build partition containers for a graph.
    PartitionContainers(PartitionArgs),
    /// Extensions-Sum evaluation.
    Extsum {
        #[command(subcommand)]
        command: ExtsumCommand,
    },
    /// Decide k-colorability.
    Color(ColorArgs),
    /// Maximum independent set.
    Mis(MisArgs),
    /// Decide satisfiability of a uniform k-CNF.
    Sat(SatArgs),
    /// Sweep instance sizes and report work counters.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Builder {
    Regular,
    AlmostRegular,
    Hypergraph,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliBuildMode {
    Auto,
    Forced,
    Analysis,
}

impl From<CliBuildMode> for BuildMode {
    fn from(m: CliBuildMode) -> Self {
        match m {
            CliBuildMode::Auto => BuildMode::Auto,
            CliBuildMode::Forced => BuildMode::Forced,
            CliBuildMode::Analysis => BuildMode::Analysis,
        }
    }
}

#[derive(Args)]
struct ContainersArgs {
    /// DIMACS graph, or hypergraph JSON for `--builder hypergraph`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "regular")]
    builder: Builder,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    /// Degree ratio bound for almost-regular graphs (defaults to Δ/d).
    #[arg(long)]
    c: Option<f64>,
    /// Hypergraph sampling probability.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    mode: CliBuildMode,
    /// Include the containers themselves in the report.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "regular")]
    builder: Builder,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    mode: CliBuildMode,
    /// Random k-tuples of independent sets used to measure split quality.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum ExtsumCommand {
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "naive")]
        algo: Algo,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Naive,
    Disjoint,
    K2,
    K3,
}

#[derive(Args)]
struct ColorArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "auto")]
    mode: CliColorMode,
    /// Return a coloring when one exists.
    #[arg(long)]
    certificate: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliColorMode {
    Auto,
    Baseline,
    Containers,
}

#[derive(Args)]
struct MisArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    mode: CliMisMode,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMisMode {
    Auto,
    Base,
    Containers,
}

#[derive(Args)]
struct SatArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "D", default_value_t = 10)]
    d: usize,
    #[arg(long = "C", default_value_t = 4.0)]
    c: f64,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long, value_enum, default_value = "auto")]
    mode: CliSatMode,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliSatMode {
    Auto,
    Dpll,
    Containers,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Random d-regular graphs, MIS through containers.
    Regular,
    /// Random k-CNF, SAT through containers.
    Kcnf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    n_min: usize,
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    step: usize,
    /// Instances per size.
    #[arg(long, default_value_t = 3)]
    instances: usize,
    /// Degree for `regular`.
    #[arg(long, default_value_t = 8)]
    d: usize,
    /// Clause width for `kcnf`.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Clauses per variable for `kcnf`.
    #[arg(long, default_value_t = 10.0)]
    density: f64,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    instance: Value,
    path: String,
    timing_ms: f64,
    counters: Value,
    result: Value,
}

struct Outcome {
    instance: Value,
    path: String,
    counters: Value,
    result: Value,
    negative: bool,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Error> {
    dimacs::parse_graph(&read(path)?)
}

fn graph_stats(g: &Graph) -> Value {
    json!({
        "n": g.n(),
        "m": g.m(),
        "average_degree": g.average_degree(),
        "max_degree": g.max_degree(),
        "min_degree": g.min_degree(),
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn degree_ratio(g: &Graph) -> f64 {
    if g.m() == 0 {
        1.0
    } else {
        (g.max_degree() as f64 / g.average_degree()).max(1.0)
    }
}

fn low_degree(degree: f64, threshold: f64) -> (String, Value) {
    ("low-degree".into(), json!({ "low_degree": true, "degree": degree, "threshold": threshold }))
}

fn containers(a: &ContainersArgs) -> Result<Outcome, Error> {
    if let Builder::Hypergraph = a.builder {
        let h: Hypergraph = serde_json::from_str(&read(&a.input)?)
            .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        let params = HypergraphContainerParams {
            p: a.p.ok_or_else(|| Error::InvalidParameter("--p is required for hypergraph containers".into()))?,
            c: a.c.unwrap_or(1.0),
            r: h.r(),
            eps_edges: a.eps,
        };
        let coll = build_hypergraph_collection(&h, &params, HyperOptions::default())?;
        let mut result = json!({ "report": coll.report(None) });
        if a.list {
            result["containers"] = to_value(&coll.containers);
        }
        return Ok(Outcome {
            instance: json!({ "n": h.n(), "r": h.r(), "edges": h.edge_count() }),
            path: "hypergraph".into(),
            counters: json!({ "containers": coll.len(), "largest_container": coll.max_container }),
            result,
            negative: false,
        });
    }
    let g = read_graph(&a.input)?;
    let built = match a.builder {
        Builder::Regular => {
            build_regular_collection(&g, a.eps, RegularOptions { mode: a.mode.into(), ..Default::default() })?
        }
        _ => {
            let c = a.c.unwrap_or_else(|| degree_ratio(&g));
            let opts = AlmostRegularOptions { mode: a.mode.into(), ..Default::default() };
            build_almost_regular_collection(&g, a.eps, c, opts)?
        }
    };
    let (path, counters, result) = match built {
        Built::LowDegree { degree, threshold } => {
            let (p, r) = low_degree(degree, threshold);
            (p, json!({ "containers": 0 }), r)
        }
        Built::Collection(coll) => {
            let mut result = json!({ "report": coll.report(Some(&g)) });
            if a.list {
                result["containers"] = to_value(&coll.containers);
            }
            let counters = json!({
                "containers": coll.len(),
                "fingerprints": coll.fingerprints.len(),
                "largest_container": coll.max_container,
                "largest_fingerprint": coll.max_fingerprint,
            });
            (to_value(&coll.source).as_str().unwrap_or("containers").to_string(), counters, result)
        }
    };
    Ok(Outcome { instance: graph_stats(&g), path, counters, result, negative: false })
}

fn partition(a: &PartitionArgs) -> Result<Outcome, Error> {
    let g = read_graph(&a.input)?;
    let opts = PartitionOptions { mode: a.mode.into(), ..Default::default() };
    let built = match a.builder {
        Builder::Regular => build_partition_collection_regular(&g, a.k, opts)?,
        Builder::AlmostRegular => {
            build_partition_collection_almost_regular(&g, a.k, a.c.unwrap_or_else(|| degree_ratio(&g)), opts)?
        }
        Builder::Hypergraph => {
            return Err(Error::InvalidParameter("partition containers are built for graphs only".into()))
        }
    };
    let coll = match built {
        Built::LowDegree { degree, threshold } => {
            let (path, result) = low_degree(degree, threshold);
            return Ok(Outcome {
                instance: graph_stats(&g),
                path,
                counters: json!({ "containers": 0 }),
                result,
                negative: false,
            });
        }
        Built::Collection(c) => c,
    };
    let mut result = json!({ "report": coll });
    if a.samples > 0 {
        let mut r = rng(a.seed);
        let tuples: Vec<Vec<VertexSet>> = (0..a.samples)
            .map(|_| (0..a.k).map(|_| random_independent_set(&g, 0.5, &mut r)).collect())
            .collect();
        result["samples"] = json!(a.samples);
        result["worst_split_gamma"] = json!(coll.worst_split_gamma(&tuples));
    }
    Ok(Outcome {
        instance: graph_stats(&g),
        path: to_value(&coll.source).as_str().unwrap_or("partition").to_string(),
        counters: json!({ "containers": coll.len(), "maximal": coll.maximal().len(), "ceiling": coll.ceiling }),
        result,
        negative: false,
    })
}

fn extsum(input: &Path, algo: Algo) -> Result<Outcome, Error> {
    let inst = ExtSumInstance::from_json(&read(input)?)?;
    let mut counters = json!({});
    let (value, path) = match algo {
        Algo::Naive => (eval_naive(&inst, NAIVE_LIMIT)?, "naive"),
        Algo::Disjoint => (eval_disjoint(&inst)?, "disjoint"),
        Algo::K2 => {
            let (v, iterations) = eval_k2_counted(&inst)?;
            counters = json!({ "iterations": iterations });
            (v, "k2")
        }
        Algo::K3 => (eval_k3(&inst)?, "k3"),
    };
    Ok(Outcome {
        instance: json!({ "universe": inst.universe(), "k": inst.k(), "subset_sizes": inst.subsets().iter().map(Vec::len).collect::<Vec<_>>() }),
        path: path.into(),
        counters,
        result: json!({ "value": value.to_string() }),
        negative: false,
    })
}

fn color(a: &ColorArgs) -> Result<Outcome, Error> {
    let g = read_graph(&a.input)?;
    let mode = match a.mode {
        CliColorMode::Auto => ColoringMode::Auto,
        CliColorMode::Baseline => ColoringMode::Baseline,
        CliColorMode::Containers => ColoringMode::Containers,
    };
    let out = solve_kcoloring(&g, a.k, &ColoringConfig { mode, certificate: a.certificate, ..Default::default() })?;
    let mut result = json!({ "decision": out.colorable });
    if let Some(c) = &out.certificate {
        result["certificate"] = json!(c);
    }
    Ok(Outcome {
        instance: graph_stats(&g),
        path: out.stats.path.clone(),
        counters: to_value(&out.stats),
        result,
        negative: !out.colorable,
    })
}

fn mis(a: &MisArgs) -> Result<Outcome, Error> {
    let g = read_graph(&a.input)?;
    let mode = match a.mode {
        CliMisMode::Auto => MisMode::Auto,
        CliMisMode::Base => MisMode::Base,
        CliMisMode::Containers => MisMode::Containers,
    };
    let r = mis_containers(&g, &MisParams { mode, epsilon: a.eps, ..Default::default() })?;
    Ok(Outcome {
        instance: graph_stats(&g),
        path: r.stats.path.clone(),
        counters: to_value(&r.stats),
        result: json!({ "size": r.size, "set": r.best }),
        negative: false,
    })
}

fn sat(a: &SatArgs) -> Result<Outcome, Error> {
    let phi = dimacs::parse_cnf(&read(&a.input)?, None)?;
    let mode = match a.mode {
        CliSatMode::Auto => SatMode::Auto,
        CliSatMode::Dpll => SatMode::Dpll,
        CliSatMode::Containers => SatMode::Containers,
    };
    let params = StructureParams::new(a.d, a.c, a.eps);
    let out = solve_ksat_dense(&phi, &params, &SatConfig { mode, ..Default::default() })?;
    let mut result = json!({ "decision": out.satisfiable });
    if let Some(m) = &out.model {
        result["model"] = json!(m);
    }
    if let Some(s) = &out.structure {
        result["structure"] = to_value(s);
    }
    Ok(Outcome {
        instance: json!({ "variables": phi.num_vars(), "clauses": phi.clauses().len(), "k": phi.k() }),
        path: out.path.clone(),
        counters: to_value(&out.stats),
        result,
        negative: !out.satisfiable,
    })
}

fn bench(a: &BenchArgs) -> Result<Outcome, Error> {
    if a.step == 0 || a.n_min > a.n_max {
        return Err(Error::InvalidParameter("need step > 0 and n-min ≤ n-max".into()));
    }
    let mut rows = Vec::new();
    for n in (a.n_min..=a.n_max).step_by(a.step) {
        for i in 0..a.instances {
            let seed = a.seed.wrapping_add((n * 1000 + i) as u64);
            let row = match a.family {
                Family::Regular => {
                    let g = random_regular_graph(n, a.d, seed)?;
                    let forced = MisParams { mode: MisMode::Containers, epsilon: a.eps, ..Default::default() };
                    let c = mis_containers(&g, &forced)?;
                    let b = mis_base(&g);
                    json!({
                        "n": n,
                        "seed": seed,
                        "size": c.size,
                        "agrees": c.size == b.size,
                        "containers": c.stats.containers,
                        "largest_subproblem": c.stats.largest_subproblem,
                        "subproblem_fraction": c.stats.largest_subproblem as f64 / n as f64,
                        "container_nodes": c.stats.nodes,
                        "base_nodes": b.stats.nodes,
                    })
                }
                Family::Kcnf => {
                    let m = (a.density * n as f64).round() as usize;
                    let phi = random_kcnf(n, m, a.k, seed)?;
                    let params = StructureParams::new(10, 4.0, 0.3);
                    let c = solve_ksat_dense(&phi, &params, &SatConfig { mode: SatMode::Containers, ..Default::default() })?;
                    let d = solve_ksat_dense(&phi, &params, &SatConfig { mode: SatMode::Dpll, ..Default::default() })?;
                    json!({
                        "n": n,
                        "seed": seed,
                        "clauses": m,
                        "satisfiable": c.satisfiable,
                        "agrees": c.satisfiable == d.satisfiable,
                        "structure": c.structure.as_ref().map(|s| to_value(&s.status)),
                        "containers": c.stats.containers,
                        "restrictions_solved": c.stats.restrictions_solved,
                        "largest_subproblem": c.stats.largest_subproblem,
                        "container_nodes": c.stats.dpll_nodes,
                        "dpll_nodes": d.stats.dpll_nodes,
                    })
                }
            };
            rows.push(row);
        }
    }
    let disagreements = rows.iter().filter(|r| r["agrees"] == json!(false)).count();
    Ok(Outcome {
        instance: json!({ "family": match a.family { Family::Regular => "regular", Family::Kcnf => "kcnf" }, "seed": a.seed }),
        path: "bench".into(),
        counters: json!({ "runs": rows.len(), "disagreements": disagreements }),
        result: json!({ "rows": rows }),
        negative: false,
    })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::Precondition(_) => "precondition",
        Error::TooLarge { .. } => "too-large",
        Error::NotRegular { .. } => "not-regular",
        Error::Codegree { .. } => "codegree",
        Error::RefinementUnavailable => "refinement-unavailable",
        Error::Resource { .. } => "resource",
    }
}

fn print_error(kind: &str, message: &str) -> ExitCode {
    let _ = writeln!(std::io::stdout(), "{}", json!({ "error": { "kind": kind, "message": message } }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = write!(std::io::stdout(), "{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return print_error("usage", e.to_string().trim()),
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            return print_error("usage", &e.to_string());
        }
    }
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Containers(a) => containers(a),
        Command::PartitionContainers(a) => partition(a),
        Command::Extsum { command: ExtsumCommand::Eval { input, algo } } => extsum(input, *algo),
        Command::Color(a) => color(a),
        Command::Mis(a) => mis(a),
        Command::Sat(a) => sat(a),
        Command::Bench(a) => bench(a),
    };
    match outcome {
        Ok(o) => {
            let report = RunReport {
                command: argv[1..].to_vec(),
                instance: o.instance,
                path: o.path,
                timing_ms: start.elapsed().as_secs_f64() * 1e3,
                counters: o.counters,
                result: o.result,
            };
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            if o.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => print_error(error_kind(&e), &e.to_string()),
    }
}
