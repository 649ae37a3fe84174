use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::{Graph, VertexSet};

/// Union-find with a live count of disjoint sets.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    inner: UnionFind<usize>,
    count: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            inner: UnionFind::new(n),
            count: n,
        }
    }

    pub fn find(&self, x: usize) -> usize {
        self.inner.find(x)
    }

    /// Returns `true` if two distinct sets were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let merged = self.inner.union(a, b);
        if merged {
            self.count -= 1;
        }
        merged
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.inner.equiv(a, b)
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Components of a spanning subgraph, ordered by total degree (measured in
/// the parent graph) descending, ties broken by smallest member id.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentInfo {
    /// Component index per vertex; `usize::MAX` for a removed vertex.
    pub label: Vec<usize>,
    /// Sorted member lists.
    pub members: Vec<Vec<usize>>,
    pub total_degree: Vec<usize>,
}

impl ComponentInfo {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    /// Index of the component whose total degree exceeds half of `total`.
    pub fn giant(&self, total: usize) -> Option<usize> {
        match self.total_degree.first() {
            Some(&d) if 2 * d > total => Some(0),
            _ => None,
        }
    }
}

/// Components of `(V, {e : keep(e)})`, optionally with vertex `skip` deleted
/// and with the vertices of `wired` identified into one component.
pub fn components_of(
    g: &Graph,
    keep: impl Fn(usize) -> bool,
    skip: Option<usize>,
    wired: &[usize],
) -> ComponentInfo {
    let n = g.n_vertices();
    let mut sets = DisjointSets::new(n);
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        if Some(a) == skip || Some(b) == skip || !keep(id) {
            continue;
        }
        sets.union(a, b);
    }
    for pair in wired.windows(2) {
        sets.union(pair[0], pair[1]);
    }
    let mut root_index = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if Some(v) == skip {
            continue;
        }
        let root = sets.find(v);
        if root_index[root] == usize::MAX {
            root_index[root] = members.len();
            members.push(Vec::new());
        }
        members[root_index[root]].push(v);
    }
    let mut order: Vec<(usize, Vec<usize>)> = members
        .into_iter()
        .map(|m| (g.degree_of(m.iter().copied()), m))
        .collect();
    order.sort_by(|(da, ma), (db, mb)| db.cmp(da).then(ma[0].cmp(&mb[0])));
    let mut label = vec![usize::MAX; n];
    for (i, (_, m)) in order.iter().enumerate() {
        for &v in m {
            label[v] = i;
        }
    }
    let (total_degree, members) = order.into_iter().unzip();
    ComponentInfo {
        label,
        members,
        total_degree,
    }
}

/// Connected components of `g`, by total degree descending.
pub fn components(g: &Graph) -> Vec<VertexSet> {
    let n = g.n_vertices();
    components_of(g, |_| true, None, &[])
        .members
        .into_iter()
        .map(|m| VertexSet::from_ids(n, m))
        .collect()
}

/// Induced subgraph on the component with the largest total degree, with
/// its new-to-parent vertex map.
pub fn largest_component(g: &Graph) -> (Graph, Vec<usize>) {
    assert!(g.n_vertices() > 0, "largest_component of an empty graph");
    let info = components_of(g, |_| true, None, &[]);
    let (sub, map, _) = g.induced(&info.members[0]);
    (sub, map)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CutStats {
    /// `e_G(S)`: edges with exactly one endpoint in `S`.
    pub cut: usize,
    /// `deg_G(S)`: sum of degrees over `S`.
    pub degree: usize,
    /// Edges with both endpoints in `S`.
    pub internal: usize,
}

pub fn cut_and_degree(g: &Graph, s: &VertexSet) -> CutStats {
    let degree = g.degree_of(s.iter());
    let (mut cut, mut internal) = (0, 0);
    for &(a, b) in g.edges() {
        match (s.contains(a), s.contains(b)) {
            (true, true) => internal += 1,
            (true, false) | (false, true) => cut += 1,
            _ => {}
        }
    }
    CutStats {
        cut,
        degree,
        internal,
    }
}
