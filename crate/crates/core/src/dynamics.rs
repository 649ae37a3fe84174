//! Heat-bath Glauber dynamics for the random-cluster model: the free chain,
//! the phase-restricted chain, the wired-boundary chain and the grand
//! coupling.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::model::{Config, Phase, PhaseSpec, RcParams};
use crate::rng::{below, hash3, unit_f64};
use crate::scalar::Real;

/// Shared randomness of one update: the edge to resample and a uniform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRandomness {
    pub edge: usize,
    pub u: f64,
}

/// Counter-based stream of updates keyed by `(seed, step)`.
#[derive(Clone, Copy, Debug)]
pub struct UpdateStream {
    seed: u64,
    n_edges: usize,
}

impl UpdateStream {
    pub fn new(seed: u64, n_edges: usize) -> Self {
        UpdateStream { seed, n_edges }
    }

    pub fn at(&self, step: u64) -> StepRandomness {
        StepRandomness {
            edge: below(hash3(self.seed, step, 0), self.n_edges),
            u: unit_f64(hash3(self.seed, step, 1)),
        }
    }
}

/// Scratch space for repeated connectivity queries.
#[derive(Clone, Debug, Default)]
pub struct Connectivity {
    stamp: Vec<u32>,
    side: Vec<u8>,
    epoch: u32,
    queues: [Vec<usize>; 2],
}

impl Connectivity {
    pub fn new(n: usize) -> Self {
        Connectivity {
            stamp: vec![0; n],
            side: vec![0; n],
            epoch: 0,
            queues: [Vec::new(), Vec::new()],
        }
    }

    /// Are the endpoints of `e` connected in `(V, F \ {e})`, with the
    /// config's wired set acting as one vertex? Bidirectional search, so the
    /// cost is bounded by the smaller side.
    pub fn endpoints_connected(&mut self, config: &Config<'_>, e: usize) -> bool {
        let g = config.graph();
        let (a, b) = g.edge(e);
        if self.stamp.len() < g.n_vertices() {
            *self = Connectivity::new(g.n_vertices());
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let wired = config.wiring();
        let is_wired = |v: usize| wired.binary_search(&v).is_ok();
        for q in &mut self.queues {
            q.clear();
        }
        let mut heads = [0usize; 2];
        // Mark returns true when the two searches meet.
        macro_rules! mark {
            ($v:expr, $s:expr) => {{
                let v = $v;
                if self.stamp[v] == self.epoch {
                    self.side[v] != $s
                } else {
                    self.stamp[v] = self.epoch;
                    self.side[v] = $s;
                    self.queues[$s as usize].push(v);
                    false
                }
            }};
        }
        for (s, start) in [(0u8, a), (1u8, b)] {
            if mark!(start, s) {
                return true;
            }
            if is_wired(start) {
                for &w in wired {
                    if mark!(w, s) {
                        return true;
                    }
                }
            }
        }
        loop {
            for s in 0..2u8 {
                let i = s as usize;
                if heads[i] == self.queues[i].len() {
                    return false;
                }
                let v = self.queues[i][heads[i]];
                heads[i] += 1;
                for &(u, id) in g.neighbors(v) {
                    if id == e || !config.contains(id) {
                        continue;
                    }
                    let fresh = self.stamp[u] != self.epoch;
                    if mark!(u, s) {
                        return true;
                    }
                    if fresh && is_wired(u) {
                        for &w in wired {
                            if mark!(w, s) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
}

/// True iff the endpoints of `e` are not connected in `(V, F \ {e})`.
pub fn cut_edge_check(config: &Config<'_>, e: usize) -> bool {
    let mut scratch = Connectivity::new(config.graph().n_vertices());
    !scratch.endpoints_connected(config, e)
}

/// Heat-bath inclusion probability for `e` given the rest of `F`.
pub fn inclusion_probability<S: Real>(p: &RcParams<S>, is_cut: bool) -> S {
    if is_cut {
        p.p_cut()
    } else {
        p.p_cycle()
    }
}

/// A Markov chain state: configuration, step clock, optional phase
/// restriction. Wiring is carried by the configuration.
#[derive(Clone, Debug)]
pub struct ChainState<'g> {
    config: Config<'g>,
    step: u64,
    restriction: Option<(PhaseSpec, Phase)>,
    scratch: Connectivity,
}

impl<'g> ChainState<'g> {
    pub fn new(config: Config<'g>) -> Self {
        let n = config.graph().n_vertices();
        ChainState {
            config,
            step: 0,
            restriction: None,
            scratch: Connectivity::new(n),
        }
    }

    /// A chain that ignores updates leaving the given phase band.
    pub fn restricted(config: Config<'g>, spec: PhaseSpec, phase: Phase) -> Result<Self> {
        let m = config.graph().n_edges();
        if !spec.contains(phase, config.in_count(), m) {
            return Err(Error::State(format!(
                "initial configuration with {} of {m} edges is outside the {phase:?} band",
                config.in_count()
            )));
        }
        let mut state = Self::new(config);
        state.restriction = Some((spec, phase));
        Ok(state)
    }

    pub fn config(&self) -> &Config<'g> {
        &self.config
    }

    pub fn config_mut(&mut self) -> &mut Config<'g> {
        &mut self.config
    }

    pub fn into_config(self) -> Config<'g> {
        self.config
    }

    pub fn graph(&self) -> &'g Graph {
        self.config.graph()
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn restriction(&self) -> Option<(PhaseSpec, Phase)> {
        self.restriction
    }

    pub fn in_count(&self) -> usize {
        self.config.in_count()
    }

    pub fn is_cut(&mut self, e: usize) -> bool {
        !self.scratch.endpoints_connected(&self.config, e)
    }

    /// One update. Returns whether the configuration changed; the clock
    /// advances even when a restricted update is ignored.
    pub fn step<S: Real>(&mut self, p: &RcParams<S>, r: StepRandomness) -> bool {
        self.step += 1;
        let e = r.edge;
        let prob = inclusion_probability(p, self.is_cut(e));
        let include = S::of(r.u) < prob;
        let present = self.config.contains(e);
        if include == present {
            return false;
        }
        if let Some((spec, phase)) = self.restriction {
            let m = self.config.graph().n_edges();
            let k = if include {
                self.config.in_count() + 1
            } else {
                self.config.in_count() - 1
            };
            if !spec.contains(phase, k, m) {
                return false;
            }
        }
        self.config.set(e, include);
        true
    }

    /// Runs `steps` updates from the stream, continuing the step clock.
    pub fn run<S: Real>(&mut self, p: &RcParams<S>, stream: &UpdateStream, steps: u64) {
        for _ in 0..steps {
            let r = stream.at(self.step);
            self.step(p, r);
        }
    }
}

/// The free (or wired, via the configuration's wiring) heat-bath update.
pub fn glauber_step<S: Real>(state: &mut ChainState<'_>, p: &RcParams<S>, r: StepRandomness) {
    let saved = state.restriction.take();
    state.step(p, r);
    state.restriction = saved;
}

/// Heat-bath update that is ignored if it would leave the phase band.
pub fn restricted_step<S: Real>(
    state: &mut ChainState<'_>,
    p: &RcParams<S>,
    r: StepRandomness,
    spec: PhaseSpec,
    phase: Phase,
) -> Result<()> {
    let m = state.graph().n_edges();
    if !spec.contains(phase, state.in_count(), m) {
        return Err(Error::State("configuration is outside the phase band".into()));
    }
    let saved = state.restriction.replace((spec, phase));
    state.step(p, r);
    state.restriction = saved;
    Ok(())
}

/// Heat-bath update on a ball with its boundary wired into one vertex.
pub fn wired_step<S: Real>(state: &mut ChainState<'_>, p: &RcParams<S>, r: StepRandomness) {
    glauber_step(state, p, r)
}

/// A pair `(i, j)` whose initial inclusion `F_i ⊆ F_j` broke at `step`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderViolation {
    pub step: u64,
    pub lower: usize,
    pub upper: usize,
    pub edge: usize,
}

#[derive(Debug)]
pub struct CouplingRun<'g> {
    pub states: Vec<ChainState<'g>>,
    pub violations: Vec<OrderViolation>,
}

/// Drives all chains with one shared update stream and logs every broken
/// initial inclusion.
pub fn grand_coupling_run<'g, S: Real>(
    mut states: Vec<ChainState<'g>>,
    p: &RcParams<S>,
    steps: u64,
    seed: u64,
) -> Result<CouplingRun<'g>> {
    let Some(first) = states.first() else {
        return Ok(CouplingRun {
            states,
            violations: Vec::new(),
        });
    };
    let graph = first.graph();
    if states.iter().any(|s| !std::ptr::eq(s.graph(), graph)) {
        return Err(Error::param("coupled chains must share one graph"));
    }
    let mut pairs = Vec::new();
    for i in 0..states.len() {
        for j in 0..states.len() {
            if i != j
                && states[i]
                    .config()
                    .in_edges()
                    .is_subset(states[j].config().in_edges())
            {
                pairs.push((i, j));
            }
        }
    }
    let stream = UpdateStream::new(seed, graph.n_edges());
    let mut violations = Vec::new();
    let mut broken = vec![false; pairs.len()];
    for t in 0..steps {
        let r = stream.at(t);
        for s in &mut states {
            s.step(p, r);
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if !broken[k] && states[i].config().contains(r.edge) && !states[j].config().contains(r.edge)
            {
                broken[k] = true;
                violations.push(OrderViolation {
                    step: t,
                    lower: i,
                    upper: j,
                    edge: r.edge,
                });
            }
        }
    }
    Ok(CouplingRun { states, violations })
}

/// Starting configuration.
#[derive(Clone, Debug)]
pub enum Init {
    AllIn,
    AllOut,
    Explicit(EdgeSet),
}

impl Init {
    pub fn build<'g>(&self, g: &'g Graph) -> Result<Config<'g>> {
        match self {
            Init::AllIn => Ok(Config::full(g)),
            Init::AllOut => Ok(Config::empty(g)),
            Init::Explicit(set) => Config::from_edges(g, set.clone()),
        }
    }
}

/// What to record while running.
#[derive(Clone, Copy, Debug)]
pub struct Observers {
    pub stride: u64,
    pub trajectory: bool,
    pub edge_frequencies: bool,
    pub phase_spec: PhaseSpec,
}

impl Default for Observers {
    fn default() -> Self {
        Observers {
            stride: 1,
            trajectory: false,
            edge_frequencies: false,
            phase_spec: PhaseSpec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub step: u64,
    pub in_count: usize,
    pub components: usize,
    pub phase: Phase,
}

#[derive(Debug)]
pub struct ChainRun<'g> {
    pub state: ChainState<'g>,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Per-edge fraction of observations with the edge in.
    pub edge_frequencies: Option<Vec<f64>>,
    pub observations: u64,
    pub mean_in_count: f64,
}

impl ChainRun<'_> {
    pub fn write_jsonl(&self, out: &mut impl Write) -> Result<()> {
        for point in &self.trajectory {
            serde_json::to_writer(&mut *out, point)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Runs `steps` free-chain updates; observations are taken at `step = 0`
/// and after every `stride`-th update.
pub fn run_chain<'g, S: Real>(
    g: &'g Graph,
    init: &Init,
    p: &RcParams<S>,
    steps: u64,
    seed: u64,
    observers: &Observers,
) -> Result<ChainRun<'g>> {
    let state = ChainState::new(init.build(g)?);
    run_state(state, p, steps, seed, observers)
}

/// [`run_chain`] from an existing state (restricted or wired).
pub fn run_state<'g, S: Real>(
    mut state: ChainState<'g>,
    p: &RcParams<S>,
    steps: u64,
    seed: u64,
    observers: &Observers,
) -> Result<ChainRun<'g>> {
    if observers.stride == 0 {
        return Err(Error::param("observer stride must be positive"));
    }
    let m = state.graph().n_edges();
    let stream = UpdateStream::new(seed, m);
    let mut trajectory = Vec::new();
    let mut frequencies = observers.edge_frequencies.then(|| vec![0u64; m]);
    let mut observations = 0u64;
    let mut in_total = 0u128;
    let mut observe = |state: &mut ChainState<'_>, step: u64| {
        observations += 1;
        in_total += state.in_count() as u128;
        if let Some(f) = frequencies.as_mut() {
            for e in state.config().in_edges().iter() {
                f[e] += 1;
            }
        }
        if observers.trajectory {
            let phase = state.config().phase(&observers.phase_spec);
            trajectory.push(TrajectoryPoint {
                step,
                in_count: state.in_count(),
                components: state.config_mut().component_count(),
                phase,
            });
        }
    };
    let start = state.step_count();
    observe(&mut state, 0);
    for t in 1..=steps {
        let r = stream.at(start + t - 1);
        state.step(p, r);
        if t % observers.stride == 0 {
            observe(&mut state, t);
        }
    }
    let edge_frequencies =
        frequencies.map(|f| f.iter().map(|&c| c as f64 / observations as f64).collect());
    Ok(ChainRun {
        state,
        trajectory,
        edge_frequencies,
        observations,
        mean_in_count: in_total as f64 / observations as f64,
    })
}
