use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use rcpoly::diagnostics::{
    event_a_frequency, phase_mass_curve, write_csv, write_json, wsm_gap, Conditioning, GapMethod,
    GapMode, MassMethod, SweepRow,
};
use rcpoly::dynamics::{run_state, ChainState, Observers, UpdateStream};
use rcpoly::estimator::{
    default_radius, estimate_graph, mcmc_thermo_log_z, uniform_grid, McmcSettings, MixtureSource,
    Sampler,
};
use rcpoly::graph::{ball, components, gen_gnp, read_edge_list, write_edge_list, VertexSet};
use rcpoly::graph_diag::{kernel, treelike_excess};
use rcpoly::oracle::{exact_log_z, exact_phase_log_z};
use rcpoly::rng::{below, hash2, split};
use rcpoly::{Config, Error, Graph, Params, Phase, PhaseSpec, Result};

#[derive(Debug, Parser)]
#[command(name = "rcpoly", version, about = "Random-cluster partition functions and samplers")]
pub struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an Erdős–Rényi graph G(n, d/n).
    Gen(GenArgs),
    /// Run Glauber dynamics and report the final configuration.
    Sample(SampleArgs),
    /// Estimate ln Z.
    Estimate(EstimateArgs),
    /// Phase masses, WSM gaps and path-event frequencies over a β grid.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge list destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Metadata destination; defaults to `<out>.json`.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    /// Balls sampled for the treelikeness summary.
    #[arg(long, default_value_t = 20)]
    pub balls: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    AllIn,
    AllOut,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MixtureArg {
    Wsm,
    Mcmc,
    Oracle,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.001)]
    pub eta: f64,
    /// Degree used for the temperature thresholds; average degree when absent.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub steps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = InitArg::Auto)]
    pub init: InitArg,
    /// Report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
    /// JSONL trajectory destination.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MixtureArg::Wsm)]
    pub mixture: MixtureArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimateMethod {
    Wsm,
    Mcmc,
    Oracle,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, default_value_t = 0.001)]
    pub eta: f64,
    /// Ball radius; `⌈3 ln n / d⌉` when absent.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = EstimateMethod::Wsm)]
    pub method: EstimateMethod,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 41)]
    pub grid_points: usize,
    /// Report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Masses,
    Gap,
    EventA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagMethod {
    Exact,
    Mcmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ordered,
    Disordered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub what: What,
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 0.001)]
    pub eta: f64,
    /// Ball radius for gaps, path length for the path event.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated β values.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["beta_min", "beta_max"])]
    pub betas: Vec<f64>,
    #[arg(long, requires = "beta_max")]
    pub beta_min: Option<f64>,
    #[arg(long, requires = "beta_min")]
    pub beta_max: Option<f64>,
    #[arg(long, default_value_t = 11)]
    pub beta_points: usize,
    #[arg(long, value_enum, default_value_t = DiagMethod::Exact)]
    pub method: DiagMethod,
    #[arg(long, value_enum, default_value_t = ModeArg::Ordered)]
    pub mode: ModeArg,
    /// Condition the graph-side marginal on the whole space instead of the band.
    #[arg(long)]
    pub whole_space: bool,
    /// Edge for gaps; every edge when absent.
    #[arg(long)]
    pub edge: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub vertex: usize,
    /// Sweeps (MCMC) or configurations (path event) per grid point.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 50)]
    pub burn_in: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_graph(path: &Path) -> Result<Graph> {
    read_edge_list(&fs::read_to_string(path)?)
}

fn average_degree(g: &Graph) -> f64 {
    if g.n_vertices() == 0 {
        0.0
    } else {
        2.0 * g.n_edges() as f64 / g.n_vertices() as f64
    }
}

fn degree_or_average(d: Option<f64>, g: &Graph) -> Result<f64> {
    let d = d.unwrap_or_else(|| average_degree(g));
    if !(d > 0.0) {
        return Err(Error::Parameter(format!("degree must be positive, got {d}")));
    }
    Ok(d)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, value: &impl Serialize) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    emit(out, &bytes)
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn gen(args: &GenArgs) -> Result<()> {
    let g = gen_gnp(args.n, args.d, args.seed)?;
    emit(args.out.as_deref(), write_edge_list(&g).as_bytes())?;
    let meta_path = args
        .meta
        .clone()
        .or_else(|| args.out.as_ref().map(|p| PathBuf::from(format!("{}.json", p.display()))));
    if let Some(path) = meta_path {
        emit_json(Some(&path), &gen_metadata(&g, args)?)?;
    }
    Ok(())
}

fn gen_metadata(g: &Graph, args: &GenArgs) -> Result<Value> {
    let n = g.n_vertices();
    let comps = components(g);
    let mut sizes: Vec<usize> = comps.iter().map(|s| s.len()).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let giant = comps
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b.iter().next().cmp(&a.iter().next())))
        .map(|s| s.iter().collect::<Vec<_>>())
        .unwrap_or_default();
    let (sub, _, _) = g.induced(&giant);
    let kernel_summary = match kernel(&sub) {
        Ok(k) => json!({"vertices": k.n_vertices(), "edges": k.n_edges()}),
        Err(e) => {
            log::warn!("kernel unavailable: {e}");
            Value::Null
        }
    };
    let radius = default_radius(n, args.d);
    let mut excess = Vec::new();
    if !giant.is_empty() {
        for i in 0..args.balls {
            let v = giant[below(hash2(args.seed, 0xBA11 + i as u64), giant.len())];
            let b = ball(g, v, radius);
            excess.push(treelike_excess(g, &VertexSet::from_ids(n, b.to_parent.iter().copied())));
        }
    }
    let treelike = excess.iter().filter(|&&x| x <= 1).count();
    Ok(json!({
        "n": n,
        "d": args.d,
        "seed": args.seed,
        "edges": g.n_edges(),
        "graph_hash": g.canonical_hash(),
        "components": {"count": sizes.len(), "sizes": sizes},
        "giant_fraction": if n == 0 { 0.0 } else { giant.len() as f64 / n as f64 },
        "kernel": kernel_summary,
        "ball_radius": radius,
        "ball_excess": {
            "samples": excess.len(),
            "max": excess.iter().max(),
            "at_most_one": treelike,
            "values": excess,
        },
    }))
}

pub fn sample(args: &SampleArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let spec = PhaseSpec::new(args.eta)?;
    let p = Params::new(args.q, args.beta)?;
    let m = g.n_edges();
    let steps = if m == 0 { 0 } else { args.steps };
    if m == 0 && args.steps > 0 {
        log::info!("graph has no edges; no updates to run");
    }
    let (state, provenance) = match args.init {
        InitArg::AllIn => (ChainState::new(Config::full(&g)), None),
        InitArg::AllOut => (ChainState::new(Config::empty(&g)), None),
        InitArg::Auto => {
            let d = degree_or_average(args.d, &g)?;
            let source = match args.mixture {
                MixtureArg::Wsm => MixtureSource::Wsm {
                    r: default_radius(g.n_vertices(), d),
                    eps: 1e-3,
                },
                MixtureArg::Mcmc => MixtureSource::Mcmc {
                    points: 40,
                    settings: McmcSettings {
                        seed: split(args.seed, 2),
                        ..McmcSettings::default()
                    },
                },
                MixtureArg::Oracle => MixtureSource::Oracle,
            };
            let sampler = Sampler::prepare(&g, args.q, args.beta, d, spec, steps, &source)?;
            let (state, prov) = sampler.start(args.seed)?;
            log::info!(
                "auto init: regime {:?}, start {:?}, p_ord {:?}",
                prov.regime,
                prov.start,
                prov.p_ord
            );
            (state, Some(prov))
        }
    };
    let observers = Observers {
        stride: args.stride,
        trajectory: true,
        edge_frequencies: false,
        phase_spec: spec,
    };
    let run = run_state(state, &p, steps, Sampler::stream_seed(args.seed), &observers)?;
    let mut jsonl = Vec::new();
    run.write_jsonl(&mut jsonl)?;
    if let Some(path) = &args.trajectory {
        fs::write(path, &jsonl)?;
    }
    let mut config = run.state.config().clone();
    let report = json!({
        "graph_hash": g.canonical_hash(),
        "q": args.q,
        "beta": args.beta,
        "eta": args.eta,
        "steps": steps,
        "seed": args.seed,
        "init": args.init.to_possible_value().map(|v| v.get_name().to_owned()),
        "provenance": provenance,
        "final": config.record(),
        "in_count": config.in_count(),
        "components": config.component_count(),
        "phase": config.phase(&spec),
        "observations": run.observations,
        "mean_in_count": run.mean_in_count,
        "trajectory_hash": sha256_hex(&jsonl),
    });
    emit_json(args.out.as_deref(), &report)
}

pub fn estimate(args: &EstimateArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let report = match args.method {
        EstimateMethod::Wsm => {
            let d = degree_or_average(args.d, &g)?;
            let r = args.r.unwrap_or_else(|| default_radius(g.n_vertices(), d));
            let rep = estimate_graph(&g, args.q, args.beta, d, r, args.eps)?;
            let mut v = serde_json::to_value(rep)?;
            v["method"] = json!("wsm");
            v["q"] = json!(args.q);
            v
        }
        EstimateMethod::Oracle => {
            let p = Params::new(args.q, args.beta)?;
            let spec = PhaseSpec::new(args.eta)?;
            json!({
                "method": "oracle",
                "q": args.q,
                "beta": args.beta,
                "eta": args.eta,
                "logZ": exact_log_z(&g, &p)?,
                "logZ_ord": exact_phase_log_z(&g, &p, &spec, Phase::Ordered)?,
                "logZ_dis": exact_phase_log_z(&g, &p, &spec, Phase::Disordered)?,
            })
        }
        EstimateMethod::Mcmc => {
            let settings = McmcSettings {
                samples: args.samples,
                seed: args.seed,
                ..McmcSettings::default()
            };
            let grid = uniform_grid(0.0, args.beta, args.grid_points.max(2));
            let est = mcmc_thermo_log_z(&g, args.q, args.beta, &grid, &settings)?;
            json!({
                "method": "mcmc",
                "q": args.q,
                "beta": args.beta,
                "logZ": est.log_z,
                "stderr": est.stderr,
                "grid_points": est.grid.len(),
                "samples": args.samples,
                "seed": args.seed,
            })
        }
    };
    emit_json(args.out.as_deref(), &report)
}

fn beta_grid(args: &DiagnoseArgs) -> Result<Vec<f64>> {
    let grid = match (args.beta_min, args.beta_max) {
        (Some(lo), Some(hi)) => {
            if args.beta_points == 0 {
                Vec::new()
            } else if args.beta_points == 1 {
                vec![lo]
            } else {
                uniform_grid(lo, hi, args.beta_points)
            }
        }
        _ => args.betas.clone(),
    };
    if grid.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(Error::Parameter("beta values must be finite and non-negative".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter("beta grid must be strictly ascending".into()));
    }
    Ok(grid)
}

pub fn diagnose(args: &DiagnoseArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let spec = PhaseSpec::new(args.eta)?;
    let grid = beta_grid(args)?;
    let rows = match args.what {
        What::Masses => masses_rows(&g, &grid, spec, args)?,
        What::Gap => gap_rows(&g, &grid, spec, args)?,
        What::EventA => event_a_rows(&g, &grid, spec, args)?,
    };
    let mut bytes = Vec::new();
    match args.format {
        Format::Csv => write_csv(&rows, &mut bytes)?,
        Format::Json => write_json(&rows, &mut bytes)?,
    }
    emit(args.out.as_deref(), &bytes)
}

fn row(args: &DiagnoseArgs, quantity: &str, beta: f64, value: f64) -> SweepRow {
    SweepRow {
        quantity: quantity.to_owned(),
        seed: args.seed,
        q: args.q,
        beta,
        eta: Some(args.eta),
        r: None,
        edge: None,
        value,
        stderr: None,
    }
}

fn masses_rows(g: &Graph, grid: &[f64], spec: PhaseSpec, args: &DiagnoseArgs) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    let method = match args.method {
        DiagMethod::Exact => MassMethod::Exact,
        DiagMethod::Mcmc => MassMethod::Mcmc {
            sweeps: args.samples,
            burn_in_sweeps: args.burn_in,
            seed: args.seed,
        },
    };
    let curve = phase_mass_curve(g, args.q, spec, grid, method)?;
    let mut rows = Vec::with_capacity(3 * curve.rows.len() + 1);
    for r in &curve.rows {
        rows.push(row(args, "mass_ord", r.beta, r.mass_ord));
        rows.push(row(args, "mass_dis", r.beta, r.mass_dis));
        rows.push(row(args, "mass_mid", r.beta, r.mass_mid));
    }
    if let Some(b) = curve.crossover {
        rows.push(row(args, "crossover", b, b));
    }
    Ok(rows)
}

fn gap_rows(g: &Graph, grid: &[f64], spec: PhaseSpec, args: &DiagnoseArgs) -> Result<Vec<SweepRow>> {
    let edges: Vec<usize> = match args.edge {
        Some(e) => vec![e],
        None => (0..g.n_edges()).collect(),
    };
    let mode = match args.mode {
        ModeArg::Ordered => GapMode::Ordered,
        ModeArg::Disordered => GapMode::Disordered,
    };
    let conditioning = if args.whole_space {
        Conditioning::WholeSpace
    } else {
        Conditioning::Band(spec)
    };
    let points: Vec<(usize, f64, usize)> = grid
        .iter()
        .enumerate()
        .flat_map(|(i, &b)| edges.iter().map(move |&e| (i, b, e)))
        .collect();
    points
        .par_iter()
        .map(|&(i, beta, e)| {
            let method = match args.method {
                DiagMethod::Exact => GapMethod::Exact,
                DiagMethod::Mcmc => GapMethod::Mcmc {
                    sweeps: args.samples,
                    burn_in_sweeps: args.burn_in,
                    seed: split(args.seed, (i * g.n_edges().max(1) + e) as u64),
                },
            };
            let gap = wsm_gap(g, args.q, beta, e, args.r, mode, conditioning, method)?;
            Ok(SweepRow {
                r: Some(args.r),
                edge: Some(e),
                stderr: gap.stderr,
                ..row(args, "wsm_gap", beta, gap.value)
            })
        })
        .collect()
}

fn ordered_samples<'g>(
    g: &'g Graph,
    p: &Params,
    spec: PhaseSpec,
    count: u64,
    burn_in: u64,
    seed: u64,
) -> Result<Vec<Config<'g>>> {
    let m = g.n_edges() as u64;
    let mut state = ChainState::restricted(Config::full(g), spec, Phase::Ordered)?;
    if m == 0 {
        return Ok(vec![state.config().clone(); count as usize]);
    }
    let stream = UpdateStream::new(seed, g.n_edges());
    state.run(p, &stream, burn_in * m);
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        state.run(p, &stream, m);
        out.push(state.config().clone());
    }
    Ok(out)
}

fn event_a_rows(g: &Graph, grid: &[f64], spec: PhaseSpec, args: &DiagnoseArgs) -> Result<Vec<SweepRow>> {
    if args.method == DiagMethod::Exact && !grid.is_empty() {
        log::info!("path event frequencies are always sampled; using the ordered-band chain");
    }
    let per_beta: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &beta)| {
            let p = Params::new(args.q, beta)?;
            let samples = ordered_samples(g, &p, spec, args.samples, args.burn_in, split(args.seed, i as u64))?;
            let rep = event_a_frequency(g, &samples, args.vertex, args.r, spec)?;
            let with_r = |name: &str, v: f64| SweepRow {
                r: Some(args.r),
                ..row(args, name, beta, v)
            };
            Ok(vec![
                with_r("not_a", rep.not_a),
                with_r("large_polymer", rep.large_polymer),
                with_r("no_giant", rep.no_giant),
                with_r("not_a_prime", rep.not_a_prime),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(per_beta.into_iter().flatten().collect())
}
