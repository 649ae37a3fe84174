//! Ordered and disordered polymer decompositions of a configuration.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{components_of, Graph};
use crate::model::{Config, RcParams};
use crate::scalar::Real;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolymerKind {
    NonSingleton,
    Singleton,
}

/// An ordered polymer with its weight data `(c′, e_out)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderedPolymer {
    pub kind: PolymerKind,
    /// Endpoints of `edges`.
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub inner_vertices: Vec<usize>,
    pub out_edges: Vec<usize>,
    pub e_out: usize,
    pub c_prime: usize,
}

/// A connected component of `(V_C, F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisorderedPolymer {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolymerSet<P> {
    pub anchor: Option<usize>,
    pub polymers: Vec<P>,
    pub config_hash: String,
}

fn config_hash(f: &Config<'_>) -> String {
    let record = f.record();
    let mut h = Sha256::new();
    h.update(record.graph_hash.as_bytes());
    for e in &record.in_edges {
        h.update(e.to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn require_connected(c: &Graph) -> Result<()> {
    if c.n_vertices() == 0 || components_of(c, |_| true, None, &[]).count() != 1 {
        return Err(Error::param("polymers are defined on a connected graph"));
    }
    Ok(())
}

fn require_same_graph(c: &Graph, f: &Config<'_>) -> Result<()> {
    if !std::ptr::eq(c, f.graph()) && c.edges() != f.graph().edges() {
        return Err(Error::param("configuration belongs to a different graph"));
    }
    Ok(())
}

/// `deg_G(H_v(F, w))` for every `w`.
fn h_degrees(c: &Graph, f: &Config<'_>, v: usize) -> Vec<usize> {
    let without_v = components_of(c, |e| f.contains(e), Some(v), &[]);
    let with_v = components_of(c, |e| f.contains(e), None, &[]);
    (0..c.n_vertices())
        .map(|w| {
            if w == v {
                with_v.total_degree[with_v.label[v]]
            } else {
                without_v.total_degree[without_v.label[w]]
            }
        })
        .collect()
}

/// Number of components of `(V_C, E_C \ out)` with total degree at most
/// half of `deg(V_C)`.
fn small_components_without(c: &Graph, out: &[usize]) -> usize {
    let total = c.total_degree();
    let mut removed = vec![false; c.n_edges()];
    for &e in out {
        removed[e] = true;
    }
    components_of(c, |e| !removed[e], None, &[])
        .total_degree
        .iter()
        .filter(|&&d| 2 * d <= total)
        .count()
}

/// `𝒱(F, v) = {w : deg(H_v(F, w)) ≤ deg(V_C)/2}`.
pub fn small_set(c: &Graph, f: &Config<'_>, v: usize) -> Vec<bool> {
    let total = c.total_degree();
    h_degrees(c, f, v).into_iter().map(|d| 2 * d <= total).collect()
}

/// Ordered polymers of `F` with respect to `v`: components of `C[𝒱(F,v)]`
/// with all incident edges, plus one singleton per remaining out-edge.
pub fn ordered_polymers(c: &Graph, f: &Config<'_>, v: usize) -> Result<PolymerSet<OrderedPolymer>> {
    require_connected(c)?;
    require_same_graph(c, f)?;
    if v >= c.n_vertices() {
        return Err(Error::param(format!("anchor vertex {v} out of range")));
    }
    let small = small_set(c, f, v);
    let groups = components_of(c, |e| {
        let (a, b) = c.edge(e);
        small[a] && small[b]
    }, None, &[]);
    let mut covered = vec![false; c.n_edges()];
    let mut polymers = Vec::new();
    let mut seen_group = vec![false; groups.count()];
    for w in 0..c.n_vertices() {
        if !small[w] || seen_group[groups.label[w]] {
            continue;
        }
        seen_group[groups.label[w]] = true;
        let inner = groups.members[groups.label[w]].clone();
        let mut edges: Vec<usize> = inner
            .iter()
            .flat_map(|&u| c.neighbors(u).iter().map(|&(_, e)| e))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut vertices: Vec<usize> = edges
            .iter()
            .flat_map(|&e| {
                let (a, b) = c.edge(e);
                [a, b]
            })
            .chain(inner.iter().copied())
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        let out_edges: Vec<usize> = edges.iter().copied().filter(|&e| !f.contains(e)).collect();
        for &e in &out_edges {
            covered[e] = true;
        }
        polymers.push(OrderedPolymer {
            kind: PolymerKind::NonSingleton,
            vertices,
            edges,
            inner_vertices: inner,
            e_out: out_edges.len(),
            c_prime: 0,
            out_edges,
        });
    }
    for e in 0..c.n_edges() {
        if !f.contains(e) && !covered[e] {
            let (a, b) = c.edge(e);
            polymers.push(OrderedPolymer {
                kind: PolymerKind::Singleton,
                vertices: vec![a, b],
                edges: vec![e],
                inner_vertices: Vec::new(),
                out_edges: vec![e],
                e_out: 1,
                c_prime: 0,
            });
        }
    }
    for p in &mut polymers {
        p.c_prime = small_components_without(c, &p.out_edges);
    }
    Ok(PolymerSet {
        anchor: Some(v),
        polymers,
        config_hash: config_hash(f),
    })
}

/// `ln w^ord(γ) = c′ ln q − e_out ln x`.
pub fn ordered_weight<S: Real>(gamma: &OrderedPolymer, p: &RcParams<S>) -> S {
    S::of(gamma.c_prime as f64) * p.ln_q() - S::of(gamma.e_out as f64) * p.ln_x()
}

fn require_giant(c: &Graph, f: &Config<'_>) -> Result<()> {
    let info = f.components();
    info.giant(c.total_degree())
        .map(|_| ())
        .ok_or(Error::NoGiantComponent)
}

/// `|ln w_C(F) − [ln q + |E_C| ln x + Σ ln w^ord(γ)]|`.
pub fn check_ordered_factorization<S: Real>(
    c: &Graph,
    f: &Config<'_>,
    v: usize,
    p: &RcParams<S>,
) -> Result<S> {
    require_giant(c, f)?;
    let set = ordered_polymers(c, f, v)?;
    let mut f = f.clone();
    let lhs: S = f.log_weight(p);
    let rhs = set
        .polymers
        .iter()
        .fold(p.ln_q() + S::of(c.n_edges() as f64) * p.ln_x(), |acc, g| {
            acc + ordered_weight(g, p)
        });
    Ok((lhs - rhs).abs())
}

/// Exact-arithmetic form of [`check_ordered_factorization`].
pub fn check_ordered_factorization_exact(
    c: &Graph,
    f: &Config<'_>,
    v: usize,
    q: &Rational,
    x: &Rational,
) -> Result<bool> {
    require_giant(c, f)?;
    let set = ordered_polymers(c, f, v)?;
    let mut f = f.clone();
    let lhs = f.exact_weight(q, x);
    let mut rhs = q * num_traits::pow(x.clone(), c.n_edges());
    for g in &set.polymers {
        rhs = rhs * num_traits::pow(q.clone(), g.c_prime) / num_traits::pow(x.clone(), g.e_out);
    }
    Ok(lhs == rhs)
}

/// Components of `(V_C, F)`; isolated vertices are weight-1 polymers.
pub fn disordered_polymers(c: &Graph, f: &Config<'_>) -> Result<PolymerSet<DisorderedPolymer>> {
    require_same_graph(c, f)?;
    let info = components_of(c, |e| f.contains(e), None, &[]);
    let mut edges = vec![Vec::new(); info.count()];
    for e in f.in_edges().iter() {
        let (a, _) = c.edge(e);
        edges[info.label[a]].push(e);
    }
    let polymers = info
        .members
        .into_iter()
        .zip(edges)
        .map(|(vertices, edges)| DisorderedPolymer { vertices, edges })
        .collect();
    Ok(PolymerSet {
        anchor: None,
        polymers,
        config_hash: config_hash(f),
    })
}

/// `ln w^dis(γ) = (1 − |U|) ln q + |B| ln x`.
pub fn disordered_weight<S: Real>(gamma: &DisorderedPolymer, p: &RcParams<S>) -> S {
    S::of(1.0 - gamma.vertices.len() as f64) * p.ln_q() + S::of(gamma.edges.len() as f64) * p.ln_x()
}

/// `|ln w_C(F) − [n ln q + Σ ln w^dis(γ)]|`.
pub fn check_disordered_factorization<S: Real>(
    c: &Graph,
    f: &Config<'_>,
    p: &RcParams<S>,
) -> Result<S> {
    let set = disordered_polymers(c, f)?;
    let mut f = f.clone();
    let lhs: S = f.log_weight(p);
    let rhs = set
        .polymers
        .iter()
        .fold(S::of(c.n_vertices() as f64) * p.ln_q(), |acc, g| {
            acc + disordered_weight(g, p)
        });
    Ok((lhs - rhs).abs())
}

/// Exact-arithmetic form of [`check_disordered_factorization`].
pub fn check_disordered_factorization_exact(
    c: &Graph,
    f: &Config<'_>,
    q: &Rational,
    x: &Rational,
) -> Result<bool> {
    let set = disordered_polymers(c, f)?;
    let mut f = f.clone();
    let lhs = f.exact_weight(q, x);
    let mut rhs = num_traits::pow(q.clone(), c.n_vertices());
    for g in &set.polymers {
        rhs = rhs * num_traits::pow(x.clone(), g.edges.len()) / num_traits::pow(q.clone(), g.vertices.len() - 1);
    }
    Ok(lhs == rhs)
}

/// `E_out(γ) ⊇ E(V_γ, complement) \ E(v, V_γ)` for a non-singleton polymer.
pub fn out_edges_contain_boundary(c: &Graph, gamma: &OrderedPolymer, v: usize) -> bool {
    let inner = |u: usize| gamma.inner_vertices.binary_search(&u).is_ok();
    gamma.edges.iter().all(|&e| {
        let (a, b) = c.edge(e);
        let crossing = inner(a) != inner(b);
        let touches_v = a == v || b == v;
        !crossing || touches_v || gamma.out_edges.contains(&e)
    })
}

/// `|E(V_γ, complement)| − |E(v, V_γ)|` for a polymer.
pub fn boundary_excess(c: &Graph, gamma: &OrderedPolymer, v: usize) -> isize {
    let inner = |u: usize| gamma.inner_vertices.binary_search(&u).is_ok();
    let mut cut = 0isize;
    let mut to_v = 0isize;
    for &e in &gamma.edges {
        let (a, b) = c.edge(e);
        if inner(a) != inner(b) {
            cut += 1;
        }
        if (a == v && inner(b)) || (b == v && inner(a)) {
            to_v += 1;
        }
    }
    cut - to_v
}

/// If every path vertex after `v` avoids the largest component of
/// `(V_C, F) \ v`, some polymer's `V_γ` must contain them all.
pub fn path_witness_check(c: &Graph, f: &Config<'_>, v: usize, path: &[usize]) -> Result<bool> {
    if path.first() != Some(&v) {
        return Err(Error::param("path must start at the anchor vertex"));
    }
    let mut seen = vec![false; c.n_vertices()];
    for (i, &u) in path.iter().enumerate() {
        if u >= c.n_vertices() || std::mem::replace(&mut seen[u], true) {
            return Err(Error::param("path must be simple and in range"));
        }
        if i > 0 && c.edge_id(path[i - 1], u).is_none() {
            return Err(Error::param("consecutive path vertices must be adjacent"));
        }
    }
    let rest = &path[1..];
    let without_v = components_of(c, |e| f.contains(e), Some(v), &[]);
    if rest.is_empty() || rest.iter().any(|&u| without_v.label[u] == 0) {
        return Ok(true);
    }
    let set = ordered_polymers(c, f, v)?;
    Ok(set.polymers.iter().any(|g| {
        rest.iter()
            .all(|u| g.inner_vertices.binary_search(u).is_ok())
    }))
}

/// Which decomposition to measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeMeasure {
    /// Largest `|V_γ|` among ordered polymers anchored at the vertex.
    Ordered(usize),
    /// Largest `|U|` among disordered polymers.
    Disordered,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeStats {
    pub max_sizes: Vec<usize>,
    /// `tail[s]` = fraction of samples whose largest polymer has size ≥ s.
    pub tail: Vec<f64>,
}

pub fn max_polymer_size(c: &Graph, f: &Config<'_>, measure: SizeMeasure) -> Result<usize> {
    Ok(match measure {
        SizeMeasure::Ordered(v) => ordered_polymers(c, f, v)?
            .polymers
            .iter()
            .map(|g| g.inner_vertices.len())
            .max()
            .unwrap_or(0),
        SizeMeasure::Disordered => disordered_polymers(c, f)?
            .polymers
            .iter()
            .map(|g| g.vertices.len())
            .max()
            .unwrap_or(0),
    })
}

/// Empirical tail of the largest polymer size over samples.
pub fn polymer_size_stats<'a, 'g: 'a>(
    c: &Graph,
    samples: impl IntoIterator<Item = &'a Config<'g>>,
    measure: SizeMeasure,
) -> Result<SizeStats> {
    let max_sizes = samples
        .into_iter()
        .map(|f| max_polymer_size(c, f, measure))
        .collect::<Result<Vec<_>>>()?;
    let top = max_sizes.iter().copied().max().unwrap_or(0);
    let n = max_sizes.len().max(1) as f64;
    let tail = (0..=top + 1)
        .map(|s| max_sizes.iter().filter(|&&m| m >= s).count() as f64 / n)
        .collect();
    Ok(SizeStats { max_sizes, tail })
}

#[derive(Serialize)]
struct DumpEntry<'a> {
    kind: PolymerKind,
    inner_vertices: &'a [usize],
    e_out: usize,
    c_prime: usize,
    log_weight: f64,
}

/// JSON dump of an ordered polymer set.
pub fn ordered_dump(set: &PolymerSet<OrderedPolymer>, p: &RcParams<f64>) -> serde_json::Value {
    let entries: Vec<DumpEntry<'_>> = set
        .polymers
        .iter()
        .map(|g| DumpEntry {
            kind: g.kind,
            inner_vertices: &g.inner_vertices,
            e_out: g.e_out,
            c_prime: g.c_prime,
            log_weight: ordered_weight(g, p),
        })
        .collect();
    serde_json::json!({
        "anchor": set.anchor,
        "config_hash": set.config_hash,
        "polymers": entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rational_from_f64, PhaseSpec};
    use crate::poly::{rational, rational_int};
    use proptest::prelude::*;

    /// C4 on v=0, a=1, b=2, c=3.
    fn c4_example(g: &Graph) -> Config<'_> {
        let ids = [(0, 1), (2, 3), (0, 3)].map(|(a, b)| g.edge_id(a, b).unwrap());
        Config::from_ids(g, ids).unwrap()
    }

    #[test]
    fn c4_ordered_example() {
        let g = Graph::cycle(4);
        let f = c4_example(&g);
        let set = ordered_polymers(&g, &f, 0).unwrap();
        assert_eq!(set.polymers.len(), 1);
        let gamma = &set.polymers[0];
        assert_eq!(gamma.kind, PolymerKind::NonSingleton);
        assert_eq!(gamma.inner_vertices, vec![1, 2, 3]);
        assert_eq!(gamma.edges.len(), 4);
        assert_eq!(gamma.out_edges, vec![g.edge_id(1, 2).unwrap()]);
        assert_eq!((gamma.e_out, gamma.c_prime), (1, 0));
        let p = RcParams::from_activity(2.0, 2.0).unwrap();
        let w: f64 = ordered_weight(gamma, &p);
        assert!((w + 2f64.ln()).abs() < 1e-15);
        let r: f64 = check_ordered_factorization(&g, &f, 0, &p).unwrap();
        assert!(r < 1e-12);
        assert!(check_ordered_factorization_exact(&g, &f, 0, &rational_int(2), &rational_int(2)).unwrap());
        assert!(path_witness_check(&g, &f, 0, &[0, 1, 2]).unwrap());
        let dump = ordered_dump(&set, &p);
        assert_eq!(dump["polymers"][0]["kind"], "non_singleton");
    }

    #[test]
    fn all_in_has_no_polymers() {
        let g = Graph::complete(5);
        let f = Config::full(&g);
        let set = ordered_polymers(&g, &f, 2).unwrap();
        assert!(set.polymers.is_empty());
        let p = RcParams::new(3.0, 1.0).unwrap();
        let r: f64 = check_ordered_factorization(&g, &f, 2, &p).unwrap();
        assert!(r < 1e-12);
        assert!(path_witness_check(&g, &f, 2, &[2, 0, 1]).unwrap());
        assert_eq!(max_polymer_size(&g, &f, SizeMeasure::Ordered(2)).unwrap(), 0);
    }

    #[test]
    fn singleton_polymer() {
        // Two triangles 0-1-2 and 3-4-5 joined by 2-3 and 0-5; remove 0-5.
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3), (0, 5)])
            .unwrap();
        let out = g.edge_id(0, 5).unwrap();
        let f = Config::from_ids(&g, (0..8).filter(|&e| e != out)).unwrap();
        let set = ordered_polymers(&g, &f, 1).unwrap();
        assert_eq!(set.polymers.len(), 1);
        assert_eq!(set.polymers[0].kind, PolymerKind::Singleton);
        assert_eq!(set.polymers[0].c_prime, 0);
        let p = RcParams::from_activity(3.0, 1.5).unwrap();
        let w: f64 = ordered_weight(&set.polymers[0], &p);
        assert!((w + 1.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn no_giant_is_reported() {
        let g = Graph::cycle(6);
        let f = Config::from_ids(&g, [0, 3]).unwrap();
        let p = RcParams::new(2.0, 1.0).unwrap();
        assert!(matches!(
            check_ordered_factorization::<f64>(&g, &f, 0, &p),
            Err(Error::NoGiantComponent)
        ));
        assert!(ordered_polymers(&Graph::empty(2), &Config::empty(&Graph::empty(2)), 0).is_err());
    }

    #[test]
    fn disordered_examples() {
        let g = Graph::path(3);
        let f = Config::from_ids(&g, [g.edge_id(0, 1).unwrap()]).unwrap();
        let set = disordered_polymers(&g, &f).unwrap();
        assert_eq!(set.polymers.len(), 2);
        let p = RcParams::from_activity(3.0, 0.5).unwrap();
        let weights: Vec<f64> = set.polymers.iter().map(|g| disordered_weight(g, &p)).collect();
        assert!((weights[0] - (0.5f64 / 3.0).ln()).abs() < 1e-15);
        assert_eq!(weights[1], 0.0);
        let r: f64 = check_disordered_factorization(&g, &f, &p).unwrap();
        assert!(r < 1e-12);
        let empty = Config::empty(&g);
        assert_eq!(disordered_polymers(&g, &empty).unwrap().polymers.len(), 3);
        assert_eq!(max_polymer_size(&g, &empty, SizeMeasure::Disordered).unwrap(), 1);
    }

    #[test]
    fn size_stats_tail() {
        let g = Graph::cycle(5);
        let samples = [Config::empty(&g), Config::full(&g)];
        let stats = polymer_size_stats(&g, samples.iter(), SizeMeasure::Disordered).unwrap();
        assert_eq!(stats.max_sizes, vec![1, 5]);
        assert_eq!(stats.tail[1], 1.0);
        assert_eq!(stats.tail[2], 0.5);
        assert_eq!(stats.tail[6], 0.0);
    }

    /// Connected graph with at most 14 edges, a configuration and an anchor.
    fn instance(ordered: bool) -> impl Strategy<Value = (Graph, Vec<usize>, usize)> {
        (3usize..9)
            .prop_flat_map(|n| {
                let parents = (1..n).map(|v| 0..v).collect::<Vec<_>>();
                let extra = proptest::collection::vec((0..n, 0..n), 0..8);
                (parents, extra, any::<u64>(), 0..n)
            })
            .prop_filter_map("edge budget", move |(parents, extra, bits, v)| {
                let n = parents.len() + 1;
                let mut edges: Vec<(usize, usize)> =
                    parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
                for (a, b) in extra {
                    if a != b {
                        edges.push((a.min(b), a.max(b)));
                    }
                }
                edges.sort_unstable();
                edges.dedup();
                if edges.len() > 14 {
                    return None;
                }
                let g = Graph::new(n, edges).unwrap();
                let m = g.n_edges();
                let removed: Vec<usize> = if ordered {
                    // Ordered band with η = 0.2: drop at most ⌊0.2 m⌋ edges.
                    let k = (bits as usize) % (m / 5 + 1);
                    (0..k).map(|i| (bits.rotate_left(7 * i as u32) as usize) % m).collect()
                } else {
                    (0..m).filter(|e| bits & (1 << e) == 0).collect()
                };
                let f: Vec<usize> = (0..m).filter(|e| !removed.contains(e)).collect();
                Some((g, f, v))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn ordered_factorization_with_giant((g, ids, v) in instance(true), x in 0.2f64..4.0, q in 1.1f64..6.0) {
            let f = Config::from_ids(&g, ids).unwrap();
            prop_assert!(PhaseSpec::new(0.2).unwrap().contains(crate::model::Phase::Ordered, f.in_count(), g.n_edges()));
            let p = RcParams::from_activity(q, x).unwrap();
            match check_ordered_factorization::<f64>(&g, &f, v, &p) {
                Ok(r) => {
                    prop_assert!(r <= 1e-10, "residual {r}");
                    let exact = check_ordered_factorization_exact(
                        &g, &f, v, &rational_from_f64(q), &rational_from_f64(x)).unwrap();
                    prop_assert!(exact);
                }
                Err(Error::NoGiantComponent) => prop_assert!(f.components().giant(g.total_degree()).is_none()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }

        #[test]
        fn ordered_structure((g, ids, v) in instance(false)) {
            let f = Config::from_ids(&g, ids).unwrap();
            let set = ordered_polymers(&g, &f, v).unwrap();
            // Every out-edge is in exactly one polymer's E_out.
            let mut hits = vec![0; g.n_edges()];
            for gamma in &set.polymers {
                for &e in &gamma.out_edges {
                    hits[e] += 1;
                }
            }
            for e in 0..g.n_edges() {
                prop_assert_eq!(hits[e], usize::from(!f.contains(e)));
            }
            let mut inner_seen = vec![false; g.n_vertices()];
            for gamma in set.polymers.iter().filter(|g| g.kind == PolymerKind::NonSingleton) {
                for &u in &gamma.inner_vertices {
                    prop_assert!(!std::mem::replace(&mut inner_seen[u], true));
                }
                prop_assert!(out_edges_contain_boundary(&g, gamma, v));
                prop_assert!(gamma.e_out as isize >= boundary_excess(&g, gamma, v));
                if f.components().giant(g.total_degree()).is_some() {
                    prop_assert!(gamma.c_prime <= gamma.inner_vertices.len());
                }
            }
        }

        #[test]
        fn disordered_factorization((g, ids, _v) in instance(false), x in 0.2f64..4.0, q in 0.5f64..6.0) {
            let f = Config::from_ids(&g, ids).unwrap();
            let p = RcParams::from_activity(q, x).unwrap();
            let r: f64 = check_disordered_factorization(&g, &f, &p).unwrap();
            prop_assert!(r <= 1e-10);
            let set = disordered_polymers(&g, &f).unwrap();
            let internal: usize = set.polymers.iter().map(|g| g.edges.len()).sum();
            prop_assert_eq!(internal, f.in_count());
        }

        #[test]
        fn path_witness((g, ids, v) in instance(false), walk in proptest::collection::vec(any::<usize>(), 0..6)) {
            let f = Config::from_ids(&g, ids).unwrap();
            let mut path = vec![v];
            for choice in walk {
                let at = *path.last().unwrap();
                let options: Vec<usize> = g.neighbors(at).iter().map(|&(u, _)| u)
                    .filter(|u| !path.contains(u)).collect();
                if options.is_empty() {
                    break;
                }
                path.push(options[choice % options.len()]);
            }
            prop_assert!(path_witness_check(&g, &f, v, &path).unwrap());
        }
    }

    #[test]
    fn exact_rational_weights() {
        let g = Graph::cycle(4);
        let f = c4_example(&g);
        assert!(check_ordered_factorization_exact(&g, &f, 0, &rational(7, 3), &rational(2, 5)).unwrap());
    }
}
