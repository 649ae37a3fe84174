use std::collections::VecDeque;

use serde::Serialize;

use super::Graph;

/// Induced ball `B_r(v)`. Vertex `0` of `subgraph` is the center and the
/// vertices are listed in BFS order.
#[derive(Clone, Debug, Serialize)]
pub struct Ball {
    pub center: usize,
    pub radius: usize,
    pub subgraph: Graph,
    /// Subgraph ids at distance exactly `radius`; `{center}` when `radius == 0`.
    pub boundary: Vec<usize>,
    pub to_parent: Vec<usize>,
    pub edge_to_parent: Vec<usize>,
    /// Distance from the center, per subgraph vertex.
    pub distance: Vec<usize>,
}

impl Ball {
    pub fn local_edge(&self, parent_edge: usize) -> Option<usize> {
        self.edge_to_parent.iter().position(|&e| e == parent_edge)
    }
}

pub fn ball(g: &Graph, v: usize, r: usize) -> Ball {
    let mut dist = vec![usize::MAX; g.n_vertices()];
    let mut order = vec![v];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == r {
            continue;
        }
        for &(w, _) in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let (subgraph, to_parent, edge_to_parent) = g.induced(&order);
    let distance: Vec<usize> = order.iter().map(|&u| dist[u]).collect();
    let boundary = (0..order.len()).filter(|&i| distance[i] == r).collect();
    Ball {
        center: v,
        radius: r,
        subgraph,
        boundary,
        to_parent,
        edge_to_parent,
        distance,
    }
}
