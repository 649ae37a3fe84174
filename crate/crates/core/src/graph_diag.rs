//! Structural diagnostics: treelikeness, kernels, expansion, and giant
//! components after edge removal.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{components_of, cut_and_degree, DisjointSets, EdgeSet, Graph, VertexSet};
use crate::rng::split;

/// Minimum number of edge deletions that turn `g[s]` into a forest.
pub fn treelike_excess(g: &Graph, s: &VertexSet) -> usize {
    let mut sets = DisjointSets::new(g.n_vertices());
    let mut internal = 0;
    for &(a, b) in g.edges() {
        if s.contains(a) && s.contains(b) {
            internal += 1;
            sets.union(a, b);
        }
    }
    let mut roots: Vec<usize> = s.iter().map(|v| sets.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    internal + roots.len() - s.len()
}

/// Excess of the whole graph.
pub fn graph_excess(g: &Graph) -> usize {
    treelike_excess(g, &VertexSet::full(g.n_vertices()))
}

/// Edge of a kernel multigraph: a contracted maximal path of the 2-core.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelEdge {
    pub a: usize,
    pub b: usize,
    /// Parent edge ids along the path, from `a` to `b`.
    pub path: Vec<usize>,
    /// Interior parent vertices along the path.
    pub interior: Vec<usize>,
}

impl KernelEdge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }
}

/// Kernel multigraph with parent provenance.
#[derive(Clone, Debug, Serialize)]
pub struct Kernel {
    /// Parent id of each kernel vertex.
    pub vertices: Vec<usize>,
    pub edges: Vec<KernelEdge>,
    /// For every parent vertex, the 2-core vertex its hanging tree attaches
    /// to (`usize::MAX` when the 2-core is empty).
    anchor: Vec<usize>,
    /// For every parent vertex interior to a kernel edge, that edge's index.
    interior_of: Vec<usize>,
    /// Kernel index of each parent vertex, or `usize::MAX`.
    kernel_index: Vec<usize>,
}

impl Kernel {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Kernel degree; a self-loop counts twice.
    pub fn degree(&self, k: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.a == k) + usize::from(e.b == k))
            .sum()
    }

    /// Distinct endpoint pairs `(a ≤ b)` with their multiplicities.
    pub fn multiplicities(&self) -> Vec<((usize, usize), usize)> {
        let mut pairs: Vec<(usize, usize)> =
            self.edges.iter().map(|e| (e.a.min(e.b), e.a.max(e.b))).collect();
        pairs.sort_unstable();
        let mut out: Vec<((usize, usize), usize)> = Vec::new();
        for p in pairs {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// The kernel as a simple graph, if it has no loops or parallel edges.
    pub fn to_simple_graph(&self) -> Option<Graph> {
        let m = self.multiplicities();
        if m.iter().any(|&((a, b), c)| a == b || c > 1) {
            return None;
        }
        Graph::new(self.n_vertices(), m.into_iter().map(|(p, _)| p)).ok()
    }

    /// Kernel vertex index of a parent vertex.
    pub fn index_of(&self, parent: usize) -> Option<usize> {
        self.kernel_index
            .get(parent)
            .copied()
            .filter(|&k| k != usize::MAX)
    }

    /// Parent vertex set corresponding to a kernel vertex set: kernel
    /// vertices, interiors of kernel edges with both ends inside, and every
    /// tree hanging off those.
    pub fn lift(&self, s: &[usize]) -> VertexSet {
        let n = self.anchor.len();
        let mut inside = vec![false; self.n_vertices()];
        for &k in s {
            inside[k] = true;
        }
        let mut out = VertexSet::new(n);
        for v in 0..n {
            let anchor = self.anchor[v];
            if anchor == usize::MAX {
                continue;
            }
            let keep = match self.kernel_index[anchor] {
                usize::MAX => {
                    let e = &self.edges[self.interior_of[anchor]];
                    inside[e.a] && inside[e.b]
                }
                k => inside[k],
            };
            if keep {
                out.insert(v);
            }
        }
        out
    }

    /// Number of non-loop kernel edges with exactly one endpoint in `s`.
    pub fn cut_size(&self, s: &[usize]) -> usize {
        let mut inside = vec![false; self.n_vertices()];
        for &k in s {
            inside[k] = true;
        }
        self.edges.iter().filter(|e| inside[e.a] != inside[e.b]).count()
    }
}

/// 2-core of `g` as a membership mask.
pub fn two_core(g: &Graph) -> Vec<bool> {
    let n = g.n_vertices();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &(u, _) in g.neighbors(v) {
            if alive[u] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    queue.push_back(u);
                }
            }
        }
    }
    alive
}

/// Kernel of a connected graph: the 2-core with maximal degree-2 paths
/// contracted. Trees give an empty kernel; a unicyclic graph gives one vertex
/// with a self-loop.
pub fn kernel(c: &Graph) -> Result<Kernel> {
    let n = c.n_vertices();
    if n > 0 && components_of(c, |_| true, None, &[]).count() != 1 {
        return Err(Error::param("kernel requires a connected graph"));
    }
    let core = two_core(c);
    let core_degree = |v: usize| c.neighbors(v).iter().filter(|&&(u, _)| core[u]).count();
    let mut kernel_index = vec![usize::MAX; n];
    let mut vertices: Vec<usize> = (0..n).filter(|&v| core[v] && core_degree(v) != 2).collect();
    if vertices.is_empty() {
        if let Some(v) = (0..n).find(|&v| core[v]) {
            vertices.push(v);
        }
    }
    for (k, &v) in vertices.iter().enumerate() {
        kernel_index[v] = k;
    }

    let mut used = vec![false; c.n_edges()];
    let mut interior_of = vec![usize::MAX; n];
    let mut edges = Vec::new();
    for (k, &start) in vertices.iter().enumerate() {
        for &(first, first_edge) in c.neighbors(start) {
            if !core[first] || used[first_edge] {
                continue;
            }
            used[first_edge] = true;
            let mut path = vec![first_edge];
            let mut interior = Vec::new();
            let (mut prev_edge, mut at) = (first_edge, first);
            while kernel_index[at] == usize::MAX {
                interior_of[at] = edges.len();
                interior.push(at);
                let &(next, e) = c
                    .neighbors(at)
                    .iter()
                    .find(|&&(u, e)| core[u] && e != prev_edge)
                    .expect("2-core vertex has two core neighbors");
                used[e] = true;
                path.push(e);
                prev_edge = e;
                at = next;
            }
            edges.push(KernelEdge {
                a: k,
                b: kernel_index[at],
                path,
                interior,
            });
        }
    }

    let mut anchor = vec![usize::MAX; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| core[v]).collect();
    for &v in &queue {
        anchor[v] = v;
    }
    while let Some(v) = queue.pop_front() {
        for &(u, _) in c.neighbors(v) {
            if anchor[u] == usize::MAX {
                anchor[u] = anchor[v];
                queue.push_back(u);
            }
        }
    }
    Ok(Kernel {
        vertices,
        edges,
        anchor,
        interior_of,
        kernel_index,
    })
}

/// One sampled connected set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionSample {
    pub size: usize,
    pub degree: usize,
    pub cut: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub samples: Vec<ExpansionSample>,
    pub min_ratio: f64,
    pub median_ratio: f64,
    pub violations: Vec<ExpansionSample>,
}

/// Expansion ratio below which a small set counts as a violation.
pub const EXPANSION_RATIO: f64 = 0.6;

/// `⌈3 ln n / d⌉`, at least 1.
pub fn default_size_lo(n: usize, d: f64) -> usize {
    ((3.0 * (n.max(1) as f64).ln() / d).ceil() as usize).max(1)
}

/// Samples connected sets by random BFS growth (uniform choice among the
/// current frontier; not uniform over connected sets) and reports the ratio
/// `e(S) / deg(S)`. Sets with `deg(S) ≤ deg(V)/10` and ratio below 3/5 are
/// violations.
pub fn expansion_report(
    c: &Graph,
    sample_count: usize,
    size_lo: usize,
    size_hi: usize,
    seed: u64,
) -> Result<ExpansionReport> {
    let n = c.n_vertices();
    if size_lo == 0 || size_lo > n {
        return Err(Error::param(format!(
            "size_lo = {size_lo} must lie in [1, {n}]"
        )));
    }
    if size_hi < size_lo {
        return Err(Error::param("size_hi < size_lo"));
    }
    let size_hi = size_hi.min(n);
    let total = c.total_degree();
    let samples: Vec<ExpansionSample> = (0..sample_count as u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(split(seed, i));
            let target = rng.random_range(size_lo..=size_hi);
            let set = grow_connected(c, rng.random_range(0..n), target, &mut rng);
            let stats = cut_and_degree(c, &set);
            (stats.degree > 0).then(|| ExpansionSample {
                size: set.len(),
                degree: stats.degree,
                cut: stats.cut,
                ratio: stats.cut as f64 / stats.degree as f64,
            })
        })
        .collect();
    let mut ratios: Vec<f64> = samples.iter().map(|s| s.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let min_ratio = ratios.first().copied().unwrap_or(f64::NAN);
    let median_ratio = ratios.get(ratios.len() / 2).copied().unwrap_or(f64::NAN);
    let violations = samples
        .iter()
        .filter(|s| 10 * s.degree <= total && s.ratio < EXPANSION_RATIO)
        .cloned()
        .collect();
    Ok(ExpansionReport {
        samples,
        min_ratio,
        median_ratio,
        violations,
    })
}

fn grow_connected(c: &Graph, start: usize, target: usize, rng: &mut impl Rng) -> VertexSet {
    let mut set = VertexSet::new(c.n_vertices());
    let mut in_frontier = VertexSet::new(c.n_vertices());
    let mut frontier = vec![start];
    in_frontier.insert(start);
    while set.len() < target && !frontier.is_empty() {
        let i = rng.random_range(0..frontier.len());
        let v = frontier.swap_remove(i);
        set.insert(v);
        for &(u, _) in c.neighbors(v) {
            if !set.contains(u) && in_frontier.insert(u) {
                frontier.push(u);
            }
        }
    }
    set
}

/// Components of `(V_C, E_C \ removed)` as `(members, total degree in c)`,
/// by degree descending.
pub fn giant_after_removal(c: &Graph, removed: &EdgeSet) -> Vec<(Vec<usize>, usize)> {
    let info = components_of(c, |e| !removed.contains(e), None, &[]);
    info.members.into_iter().zip(info.total_degree).collect()
}
