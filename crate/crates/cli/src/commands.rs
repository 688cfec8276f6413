use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use ppestim::bench::{
    estimate, run_bench, spectral_report, write_bench_csv, EstimateOutcome, ExperimentConfig,
    RhoPolicy,
};
use ppestim::edgelist::{from_edge_list, graph_digest, to_edge_list};
use ppestim::generators::Topology;
use ppestim::graph::TopologySummary;
use ppestim::spectral::{rho_star, RhoPlan};
use ppestim::Graph;
use serde_json::json;

use crate::args::{
    BenchArgs, Command, EstimateArgs, Format, GenArgs, GraphArg, Policy, RunArgs, SpectralArgs,
    Suite, TopologyName,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(ppestim::Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl From<ppestim::Error> for CliError {
    fn from(e: ppestim::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Spectral(a) => cmd_spectral(a),
        Command::RhoOpt(a) => cmd_rho_opt(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad integer {t:?} in {text:?}")))
        })
        .collect()
}

fn topology(name: TopologyName, n: usize, params: Option<&str>) -> Result<Topology> {
    let need = |what: &str| params.ok_or_else(|| usage(format!("{name:?} needs {what}")));
    Ok(match name {
        TopologyName::Complete => Topology::Complete(n),
        TopologyName::Star => Topology::Star(n),
        TopologyName::BinaryTree => Topology::BinaryTreePlus(n),
        TopologyName::Circulant => Topology::Circulant(n, parse_list(need("offsets")?)?),
        TopologyName::SmallWorld => {
            let second = parse_list(need("a second clique size")?)?;
            match second.as_slice() {
                [m] => Topology::SmallWorld(n, *m),
                _ => return Err(usage("small-world takes exactly one extra size")),
            }
        }
    })
}

/// A `name:n[:params]` generator spec.
fn parse_spec(spec: &str) -> Result<Topology> {
    let mut parts = spec.splitn(3, ':');
    let name = parts.next().unwrap_or_default();
    let name = <TopologyName as clap::ValueEnum>::from_str(name, true)
        .map_err(|_| usage(format!("unknown topology {name:?}")))?;
    let n = parts
        .next()
        .ok_or_else(|| usage(format!("generator spec {spec:?} lacks a size")))?
        .parse::<usize>()
        .map_err(|_| usage(format!("bad size in {spec:?}")))?;
    topology(name, n, parts.next())
}

/// Loads an edge-list file, or builds the graph from a generator spec when no
/// such file exists.
fn load_graph(source: &str) -> Result<(String, Graph)> {
    let path = Path::new(source);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .map_or_else(|| source.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok((label, from_edge_list(&text)?));
    }
    if !source.contains(':') {
        return Err(CliError::Io(io::Error::new(
            io::ErrorKind::NotFound,
            format!("no graph file {source:?}"),
        )));
    }
    let t = parse_spec(source)?;
    Ok((t.to_string(), t.build()?))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn experiment(run: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig {
        rounds: run.rounds,
        k_neg: run.kneg,
        seed: run.seed,
        noise_amplitude: run.noise,
        ..ExperimentConfig::default()
    };
    let truth = run.truth.trim();
    if let Some(step) = truth.strip_prefix("linear:") {
        cfg.truth_step = step
            .parse()
            .map_err(|_| usage(format!("bad truth step {step:?}")))?;
    } else if truth != "linear" {
        let values = truth
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| usage(format!("bad truth {truth:?}")))?;
        cfg.custom_truth = Some(values);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let t = topology(a.topology, a.n, a.params.as_deref())?;
    let g = t.build()?;
    let mut out = output(a.out.as_deref())?;
    out.write_all(to_edge_list(&g, &t.to_string()).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_spectral(a: SpectralArgs) -> Result<()> {
    let (_, g) = load_graph(&a.graph.graph)?;
    write_json(&spectral_report(&g, a.rho)?, a.graph.out.as_deref())
}

fn cmd_rho_opt(a: GraphArg) -> Result<()> {
    let (_, g) = load_graph(&a.graph)?;
    write_json(&rho_star(&g)?, a.out.as_deref())
}

fn scheme_name(policy: RhoPolicy) -> &'static str {
    match policy {
        RhoPolicy::Fixed { .. } => "fixed",
        RhoPolicy::Optimal => "rho_star",
        RhoPolicy::Sigma0 => "sigma0",
    }
}

fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn cmd_estimate(a: EstimateArgs) -> Result<()> {
    let primary = match (a.policy, a.rho) {
        (Policy::Fixed, Some(rho)) => RhoPolicy::Fixed { rho },
        (Policy::Fixed, None) => return Err(usage("--policy fixed needs --rho")),
        (_, Some(_)) => return Err(usage("--rho is only used with --policy fixed")),
        (Policy::Optimal, None) => RhoPolicy::Optimal,
        (Policy::Sigma0, None) => RhoPolicy::Sigma0,
    };
    let (label, g) = load_graph(&a.graph)?;
    let cfg = experiment(&a.run)?;

    // the tuned scheme is always reported next to the plain one
    let mut policies = vec![primary];
    if primary == RhoPolicy::Optimal {
        policies.push(RhoPolicy::Sigma0);
    }
    let outcomes = policies
        .iter()
        .map(|&p| estimate(&g, p, &cfg))
        .collect::<std::result::Result<Vec<EstimateOutcome>, _>>()?;
    let plan: Option<&RhoPlan> = outcomes[0].plan.as_ref();
    if let Some(plan) = plan {
        eprintln!(
            "rho* = {} ({:?}), predicted rate {}",
            plan.rho_star, plan.method, plan.rate
        );
    }

    let runs: Vec<_> = policies
        .iter()
        .zip(&outcomes)
        .map(|(&p, o)| {
            json!({
                "scheme": scheme_name(p),
                "rho": o.rho,
                "report": o.report,
            })
        })
        .collect();
    let summary: TopologySummary = g.summarize();
    let report = json!({
        "graph": label,
        "graph_digest": graph_digest(&g),
        "summary": summary,
        "config": cfg,
        "plan": plan,
        "runs": runs,
    });

    match a.out {
        None => write_json(&report, None),
        Some(prefix) => {
            outcomes[0]
                .measurements
                .write_csv(File::create(prefixed(&prefix, ".measurements.csv"))?)?;
            for (&p, o) in policies.iter().zip(&outcomes) {
                let name = scheme_name(p);
                o.trajectory.write_csv(File::create(prefixed(
                    &prefix,
                    &format!(".{name}.trajectory.csv"),
                ))?)?;
                write_json(
                    &o.trajectory.sidecar(&g, &o.measurements),
                    Some(&prefixed(&prefix, &format!(".{name}.trajectory.json"))),
                )?;
            }
            write_json(&report, Some(&prefixed(&prefix, ".report.json")))
        }
    }
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let cfg = experiment(&a.run)?;
    let mut entries = Vec::new();
    if a.suite == Suite::Table1 {
        for t in Topology::table1_suite() {
            entries.push((t.to_string(), t.build()?));
        }
    }
    for path in &a.graphs {
        let source = path.to_string_lossy();
        if !path.is_file() {
            return Err(CliError::Io(io::Error::new(
                io::ErrorKind::NotFound,
                format!("no graph file {source:?}"),
            )));
        }
        entries.push(load_graph(&source)?);
    }
    if entries.is_empty() {
        return Err(usage(
            "nothing to benchmark: empty suite and no --graph files",
        ));
    }
    let rows = run_bench(&entries, &cfg);
    for row in &rows {
        if let Some(e) = &row.error {
            eprintln!("warning: {}: {e}", row.topology);
        }
    }
    match a.format {
        Format::Json => write_json(&rows, a.out.as_deref()),
        Format::Csv => {
            let out = output(a.out.as_deref())?;
            write_bench_csv(&rows, out)?;
            Ok(())
        }
    }
}
