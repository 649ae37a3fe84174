//! Simple undirected graphs, components, balls and the edge-list format.

mod ball;
mod components;
mod gen;
mod io;
mod set;

use std::collections::HashSet;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use ball::{ball, Ball};
pub use components::{
    components, components_of, cut_and_degree, largest_component, ComponentInfo, CutStats,
    DisjointSets,
};
pub use gen::{gen_gnp, PAIRWISE_LIMIT};
pub use io::{read_edge_list, write_edge_list};
pub use set::{EdgeSet, IdSet, VertexSet};

/// Immutable simple undirected graph. Edge ids are dense in `0..m` and
/// each edge is stored with its smaller endpoint first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::param(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::param(format!("self-loop at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::param(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            list.push(e);
        }
        Ok(Self::from_checked(n, list))
    }

    pub(crate) fn from_checked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for (id, &(a, b)) in edges.iter().enumerate() {
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
        }
        Graph {
            n,
            edges,
            adjacency,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_checked(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::from_checked(n, edges)
    }

    /// Path on `n` vertices `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_checked(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Self::from_checked(n, edges)
    }

    /// Star with center `0` and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Self::from_checked(leaves + 1, (1..=leaves).map(|i| (0, i)).collect())
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(neighbor, edge id)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn total_degree(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn degree_of(&self, vertices: impl IntoIterator<Item = usize>) -> usize {
        vertices.into_iter().map(|v| self.degree(v)).sum()
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        let (from, to) = if self.degree(a) <= self.degree(b) {
            (a, b)
        } else {
            (b, a)
        };
        self.adjacency[from]
            .iter()
            .find(|&&(w, _)| w == to)
            .map(|&(_, id)| id)
    }

    /// Induced subgraph on `vertices` (in the given order). Returns the
    /// subgraph, the new-to-parent vertex map and the new-to-parent edge map.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (id, &(a, b)) in self.edges.iter().enumerate() {
            let (la, lb) = (local[a], local[b]);
            if la != usize::MAX && lb != usize::MAX {
                edges.push((la.min(lb), la.max(lb)));
                edge_map.push(id);
            }
        }
        (Self::from_checked(vertices.len(), edges), vertices.to_vec(), edge_map)
    }

    /// Same vertex set, edge `e` removed; later edge ids shift down by one.
    pub fn without_edge(&self, e: usize) -> Graph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(id, _)| id != e)
            .map(|(_, &p)| p)
            .collect();
        Self::from_checked(self.n, edges)
    }

    /// Hex SHA-256 of the canonical edge-list text.
    pub fn canonical_hash(&self) -> String {
        hex::encode(Sha256::digest(write_edge_list(self).as_bytes()))
    }

    /// Checks the adjacency/edge-list cross invariants.
    pub fn validate(&self) -> Result<()> {
        let mut count = vec![0usize; self.edges.len()];
        for (v, list) in self.adjacency.iter().enumerate() {
            for &(w, id) in list {
                let (a, b) = self.edges[id];
                if !((a == v && b == w) || (a == w && b == v)) {
                    return Err(Error::structure(format!("adjacency of {v} lists wrong edge {id}")));
                }
                count[id] += 1;
            }
        }
        if count.iter().any(|&c| c != 2) {
            return Err(Error::structure("edge not listed in exactly two adjacency lists"));
        }
        let degree_sum: usize = (0..self.n).map(|v| self.degree(v)).sum();
        if degree_sum != 2 * self.edges.len() {
            return Err(Error::structure("degree sum differs from 2m"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        let g = Graph::new(3, [(2, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge(0), (0, 2));
        g.validate().unwrap();
    }

    #[test]
    fn fixtures_are_consistent() {
        for g in [Graph::complete(5), Graph::path(4), Graph::cycle(6), Graph::star(5)] {
            g.validate().unwrap();
        }
        assert_eq!(Graph::complete(4).n_edges(), 6);
        assert_eq!(Graph::star(3).degree(0), 3);
    }

    #[test]
    fn induced_and_edge_lookup() {
        let g = Graph::complete(4);
        let (h, map, emap) = g.induced(&[3, 1, 2]);
        assert_eq!(h.n_vertices(), 3);
        assert_eq!(h.n_edges(), 3);
        assert_eq!(map, vec![3, 1, 2]);
        for (local, &parent) in emap.iter().enumerate() {
            let (a, b) = h.edge(local);
            let (pa, pb) = g.edge(parent);
            assert_eq!((map[a].min(map[b]), map[a].max(map[b])), (pa, pb));
        }
        assert_eq!(g.edge_id(2, 0), Some(1));
        assert_eq!(Graph::path(3).edge_id(0, 2), None);
        assert_eq!(g.without_edge(0).n_edges(), 5);
    }
}
