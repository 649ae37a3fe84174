//! Random-cluster weights, configurations and phase bands.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{components_of, ComponentInfo, DisjointSets, EdgeSet, Graph};
use crate::scalar::Real;
use crate::Rational;

/// Model parameters `(q, β)` with the cached edge activity `x = e^β - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RcParams<S: Real> {
    q: S,
    beta: S,
    x: S,
}

impl<S: Real> RcParams<S> {
    pub fn new(q: S, beta: S) -> Result<Self> {
        if !(q > S::zero()) || !q.is_finite() {
            return Err(Error::param(format!("q must be positive, got {q:?}")));
        }
        if !(beta > S::zero()) || beta.is_nan() {
            return Err(Error::param(format!("beta must be positive, got {beta:?}")));
        }
        Ok(RcParams {
            q,
            beta,
            x: beta.exp_m1(),
        })
    }

    /// Parameters from the edge activity `x = e^β - 1`.
    pub fn from_activity(q: S, x: S) -> Result<Self> {
        if !(x > S::zero()) {
            return Err(Error::param(format!("x must be positive, got {x:?}")));
        }
        Self::new(q, x.ln_1p())
    }

    pub fn q(&self) -> S {
        self.q
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    pub fn x(&self) -> S {
        self.x
    }

    pub fn ln_q(&self) -> S {
        self.q.ln()
    }

    pub fn ln_x(&self) -> S {
        self.x.ln()
    }

    /// Heat-bath inclusion probability for an edge whose endpoints are not
    /// otherwise connected: `x / (x + q)`.
    pub fn p_cut(&self) -> S {
        self.x / (self.x + self.q)
    }

    /// Inclusion probability for an edge closing a cycle: `1 - e^{-β}`.
    pub fn p_cycle(&self) -> S {
        -(-self.beta).exp_m1()
    }
}

/// `c ln q + k ln x`.
pub fn log_weight_counts<S: Real>(components: usize, in_count: usize, p: &RcParams<S>) -> S {
    S::of(components as f64) * p.ln_q() + S::of(in_count as f64) * p.ln_x()
}

/// `q^c x^k` in exact arithmetic.
pub fn exact_weight(components: usize, in_count: usize, q: &Rational, x: &Rational) -> Rational {
    num_traits::pow(q.clone(), components) * num_traits::pow(x.clone(), in_count)
}

/// An edge subset `F` of a graph. Optional wiring identifies a vertex set
/// into a single component for all counting.
#[derive(Clone, Debug)]
pub struct Config<'g> {
    graph: &'g Graph,
    in_edges: EdgeSet,
    wired: Vec<usize>,
    cache: Option<DisjointSets>,
}

impl<'g> Config<'g> {
    pub fn empty(graph: &'g Graph) -> Self {
        Self::with_edges_unchecked(graph, EdgeSet::new(graph.n_edges()))
    }

    pub fn full(graph: &'g Graph) -> Self {
        Self::with_edges_unchecked(graph, EdgeSet::full(graph.n_edges()))
    }

    pub fn from_edges(graph: &'g Graph, in_edges: EdgeSet) -> Result<Self> {
        if in_edges.capacity() != graph.n_edges() {
            return Err(Error::param(format!(
                "edge set over {} ids for a graph with {} edges",
                in_edges.capacity(),
                graph.n_edges()
            )));
        }
        Ok(Self::with_edges_unchecked(graph, in_edges))
    }

    pub fn from_ids(graph: &'g Graph, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let m = graph.n_edges();
        let mut set = EdgeSet::new(m);
        for id in ids {
            if id >= m {
                return Err(Error::param(format!("edge id {id} out of range (m = {m})")));
            }
            set.insert(id);
        }
        Ok(Self::with_edges_unchecked(graph, set))
    }

    fn with_edges_unchecked(graph: &'g Graph, in_edges: EdgeSet) -> Self {
        Config {
            graph,
            in_edges,
            wired: Vec::new(),
            cache: None,
        }
    }

    /// Identify `vertices` into one super-vertex (stored sorted). Sets of size
    /// < 2 are a no-op.
    pub fn wired(mut self, vertices: &[usize]) -> Result<Self> {
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.graph.n_vertices()) {
            return Err(Error::param(format!("wired vertex {v} out of range")));
        }
        let mut wired = vertices.to_vec();
        wired.sort_unstable();
        wired.dedup();
        if wired.len() < 2 {
            wired.clear();
        }
        self.wired = wired;
        self.cache = None;
        Ok(self)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn in_edges(&self) -> &EdgeSet {
        &self.in_edges
    }

    pub fn wiring(&self) -> &[usize] {
        &self.wired
    }

    pub fn in_count(&self) -> usize {
        self.in_edges.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.in_edges.contains(e)
    }

    pub fn insert(&mut self, e: usize) {
        if self.in_edges.insert(e) {
            if let Some(sets) = self.cache.as_mut() {
                let (a, b) = self.graph.edge(e);
                sets.union(a, b);
            }
        }
    }

    /// Deletions invalidate the component cache; it is rebuilt lazily.
    pub fn remove(&mut self, e: usize) {
        if self.in_edges.remove(e) {
            self.cache = None;
        }
    }

    pub fn set(&mut self, e: usize, present: bool) {
        if present {
            self.insert(e)
        } else {
            self.remove(e)
        }
    }

    fn sets(&mut self) -> &DisjointSets {
        if self.cache.is_none() {
            let mut sets = DisjointSets::new(self.graph.n_vertices());
            for e in self.in_edges.iter() {
                let (a, b) = self.graph.edge(e);
                sets.union(a, b);
            }
            for pair in self.wired.windows(2) {
                sets.union(pair[0], pair[1]);
            }
            self.cache = Some(sets);
        }
        self.cache.as_ref().unwrap()
    }

    /// `c(F)`, counting isolated vertices and the wired set once.
    pub fn component_count(&mut self) -> usize {
        self.sets().count()
    }

    /// From-scratch component structure (ordered by total degree).
    pub fn components(&self) -> ComponentInfo {
        components_of(self.graph, |e| self.in_edges.contains(e), None, &self.wired)
    }

    pub fn log_weight<S: Real>(&mut self, p: &RcParams<S>) -> S {
        let c = self.component_count();
        log_weight_counts(c, self.in_count(), p)
    }

    pub fn exact_weight(&mut self, q: &Rational, x: &Rational) -> Rational {
        let c = self.component_count();
        exact_weight(c, self.in_count(), q, x)
    }

    pub fn phase(&self, spec: &PhaseSpec) -> Phase {
        spec.classify(self.in_count(), self.graph.n_edges())
    }

    /// Checks the cached component count against a recomputation.
    pub fn validate(&mut self) -> Result<()> {
        let fresh = self.components().count();
        if self.component_count() != fresh {
            return Err(Error::State("component cache is stale".into()));
        }
        Ok(())
    }

    pub fn record(&self) -> ConfigRecord {
        ConfigRecord {
            graph_hash: self.graph.canonical_hash(),
            in_edges: self.in_edges.iter().collect(),
        }
    }
}

impl PartialEq for Config<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph)
            && self.in_edges == other.in_edges
            && self.wired == other.wired
    }
}

/// JSON form of a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub graph_hash: String,
    pub in_edges: Vec<usize>,
}

impl ConfigRecord {
    pub fn restore<'g>(&self, graph: &'g Graph) -> Result<Config<'g>> {
        if graph.canonical_hash() != self.graph_hash {
            return Err(Error::param("configuration belongs to a different graph"));
        }
        Config::from_ids(graph, self.in_edges.iter().copied())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Ordered,
    Disordered,
    Middle,
}

/// Phase bands: ordered iff `|F| ≥ (1-η)m`, disordered iff `|F| ≤ ηm`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpec {
    eta: f64,
}

impl Default for PhaseSpec {
    fn default() -> Self {
        PhaseSpec { eta: 1.0 / 1000.0 }
    }
}

impl PhaseSpec {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 0.5) {
            return Err(Error::param(format!("eta must lie in (0, 1/2), got {eta}")));
        }
        Ok(PhaseSpec { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn within(&self, count: usize, m: usize) -> bool {
        let band = self.eta * m as f64;
        count as f64 <= band + 1e-9 * (1.0 + band)
    }

    /// Ordered wins when `m = 0` (both bands contain the empty set).
    pub fn classify(&self, in_count: usize, m: usize) -> Phase {
        if self.within(m - in_count, m) {
            Phase::Ordered
        } else if self.within(in_count, m) {
            Phase::Disordered
        } else {
            Phase::Middle
        }
    }

    pub fn contains(&self, phase: Phase, in_count: usize, m: usize) -> bool {
        self.classify(in_count, m) == phase
    }
}

pub const DEFAULT_THRESHOLD_OFFSET: f64 = 0.1;

/// `(β₀, β₁)` with `e^{β₀} - 1 = q^{(2-τ)/d}` and `e^{β₁} - 1 = q^{(2+τ)/d}`.
pub fn beta_thresholds(q: f64, d: f64) -> Result<(f64, f64)> {
    beta_thresholds_with_offset(q, d, DEFAULT_THRESHOLD_OFFSET)
}

pub fn beta_thresholds_with_offset(q: f64, d: f64, offset: f64) -> Result<(f64, f64)> {
    if !(q > 1.0) {
        return Err(Error::param(format!("thresholds need q > 1, got {q}")));
    }
    if !(d > 0.0) {
        return Err(Error::param(format!("d must be positive, got {d}")));
    }
    if !(offset > 0.0 && offset < 2.0) {
        return Err(Error::param(format!("offset must lie in (0, 2), got {offset}")));
    }
    let ln_q = q.ln();
    let at = |exponent: f64| (exponent * ln_q / d).exp().ln_1p();
    Ok((at(2.0 - offset), at(2.0 + offset)))
}

/// Exact rational `x` nearest a float (for the exact-arithmetic checkers).
pub fn rational_from_f64(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(Rational::zero)
}
