//! Exact edge marginals on trees and unicyclic balls with free or wired
//! boundary, as rational functions of `x` for a fixed rational `q`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{components_of, Ball, Graph};
use crate::graph_diag::{graph_excess, two_core};
use crate::poly::{Poly, RationalFn};
use crate::Rational;

type ExactPoly = Poly<Rational>;

/// Polynomial degree past which a warning is logged.
pub const DEGREE_WARNING: usize = 200;
/// Largest supported ball radius.
pub const MAX_RADIUS: usize = 12;

/// Boundary condition of a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Free,
    Wired,
}

/// Subtree sums at a root `u`: `z0` over configurations whose root cluster
/// avoids the boundary (root cluster credited with `q`), `z1` over those
/// reaching it (the boundary class is credited once, at the top).
#[derive(Clone, Debug, PartialEq)]
pub struct WiredPair {
    pub z0: ExactPoly,
    pub z1: ExactPoly,
}

impl WiredPair {
    /// Partition function of the whole tree.
    pub fn total(&self, q: &Rational, has_boundary: bool) -> ExactPoly {
        if has_boundary {
            (&self.z0 + &self.z1).scale(q)
        } else {
            self.z0.clone()
        }
    }
}

fn x_poly() -> ExactPoly {
    Poly::x()
}

/// Post-order DP over the tree hanging from `root`, ignoring `blocked`
/// edges. `forced` edges are restricted to be in.
fn tree_dp(
    g: &Graph,
    root: usize,
    blocked: &[bool],
    boundary: &[bool],
    forced: Option<usize>,
    q: &Rational,
) -> WiredPair {
    let inv_q = Rational::one() / q;
    let n = g.n_vertices();
    let mut parent_edge = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    let mut order = vec![root];
    visited[root] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &(w, e) in g.neighbors(u) {
            if !blocked[e] && !visited[w] {
                visited[w] = true;
                parent_edge[w] = e;
                order.push(w);
            }
        }
    }
    let mut pairs: Vec<Option<WiredPair>> = vec![None; n];
    let x = x_poly();
    for &u in order.iter().rev() {
        let mut prod_nc = ExactPoly::one();
        let mut prod_all = ExactPoly::one();
        for &(w, e) in g.neighbors(u) {
            if blocked[e] || parent_edge[w] != e {
                continue;
            }
            let child = pairs[w].take().expect("child processed first");
            let merged = (&x * &child.z0).scale(&inv_q);
            let joined = &x * &child.z1;
            let nc = if forced == Some(e) {
                merged
            } else {
                &(&child.z0 + &child.z1) + &merged
            };
            let c = joined;
            prod_all = &prod_all * &(&nc + &c);
            prod_nc = &prod_nc * &nc;
        }
        pairs[u] = Some(if boundary[u] {
            WiredPair {
                z0: ExactPoly::zero(),
                z1: prod_all,
            }
        } else {
            WiredPair {
                z0: prod_nc.scale(q),
                z1: &prod_all - &prod_nc,
            }
        });
    }
    pairs[root].take().unwrap()
}

fn boundary_mask(n: usize, boundary: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &v in boundary {
        if v >= n {
            return Err(Error::param(format!("boundary vertex {v} out of range")));
        }
        mask[v] = true;
    }
    Ok(mask)
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.n_vertices() == 0 || components_of(g, |_| true, None, &[]).count() != 1 {
        return Err(Error::param("ball graph must be connected"));
    }
    Ok(())
}

fn require_q(q: &Rational) -> Result<()> {
    if *q <= Rational::zero() {
        return Err(Error::param("q must be positive"));
    }
    Ok(())
}

/// `(Z0, Z1)` for a tree rooted at `root` with the listed vertices wired.
/// An empty boundary gives the free-boundary sums (`Z1 = 0`).
pub fn wired_tree_z(g: &Graph, root: usize, boundary: &[usize], q: &Rational) -> Result<WiredPair> {
    require_q(q)?;
    require_connected(g)?;
    if g.n_edges() + 1 != g.n_vertices() {
        return Err(Error::structure("graph is not a tree"));
    }
    if root >= g.n_vertices() {
        return Err(Error::param("root out of range"));
    }
    let mask = boundary_mask(g.n_vertices(), boundary)?;
    Ok(tree_dp(g, root, &vec![false; g.n_edges()], &mask, None, q))
}

/// The unique cycle of a connected unicyclic graph, as vertices in order and
/// the edge from each to the next.
fn unique_cycle(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    let core = two_core(g);
    let start = (0..g.n_vertices()).find(|&v| core[v]).expect("unicyclic");
    let mut vertices = vec![start];
    let mut edges = Vec::new();
    let mut prev_edge = usize::MAX;
    let mut at = start;
    loop {
        let &(next, e) = g
            .neighbors(at)
            .iter()
            .find(|&&(w, e)| core[w] && e != prev_edge)
            .expect("cycle vertex has two cycle neighbors");
        edges.push(e);
        if next == start {
            break;
        }
        vertices.push(next);
        prev_edge = e;
        at = next;
    }
    (vertices, edges)
}

type Matrix = [[ExactPoly; 2]; 2];

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let entry = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// Partition polynomial of a connected graph with excess ≤ 1, with the
/// boundary wired and `forced` restricted to be in.
fn partition_poly(g: &Graph, boundary: &[bool], forced: Option<usize>, q: &Rational) -> ExactPoly {
    let has_boundary = boundary.iter().any(|&b| b);
    if g.n_edges() + 1 == g.n_vertices() {
        let pair = tree_dp(g, 0, &vec![false; g.n_edges()], boundary, forced, q);
        return pair.total(q, has_boundary);
    }
    let (cycle, cycle_edges) = unique_cycle(g);
    let mut blocked = vec![false; g.n_edges()];
    for &e in &cycle_edges {
        blocked[e] = true;
    }
    let inv_q = Rational::one() / q;
    let x = x_poly();
    let q_minus_one = q - Rational::one();
    // States: 0 = cluster may reach the boundary (weight A + B),
    //         1 = cluster avoids it (weight A, group factor q − 1).
    let mut product: Option<Matrix> = None;
    let mut all_in_avoid = ExactPoly::one();
    for (i, &v) in cycle.iter().enumerate() {
        let pair = tree_dp(g, v, &blocked, boundary, forced, q);
        let a = pair.z0.scale(&inv_q);
        let ab = &a + &pair.z1;
        all_in_avoid = &all_in_avoid * &a;
        let e = cycle_edges[i];
        let fresh = |state: usize| {
            if state == 0 {
                ExactPoly::one()
            } else {
                Poly::constant(q_minus_one.clone())
            }
        };
        let edge_term = |from: usize, to: usize| {
            let open = if forced == Some(e) { ExactPoly::zero() } else { fresh(to) };
            if from == to {
                &x + &open
            } else {
                open
            }
        };
        let diag = [ab, a];
        let step: Matrix = [
            [&diag[0] * &edge_term(0, 0), &diag[0] * &edge_term(0, 1)],
            [&diag[1] * &edge_term(1, 0), &diag[1] * &edge_term(1, 1)],
        ];
        product = Some(match product {
            None => step,
            Some(acc) => mat_mul(&acc, &step),
        });
    }
    let product = product.expect("cycle is nonempty");
    let trace = &product[0][0] + &product[1][1];
    // With every cycle edge in there is a single group and no group start;
    // the trace credits its avoid-state with 1 instead of q − 1.
    let k = cycle_edges.len();
    let correction = all_in_avoid
        .shift(k)
        .scale(&(q - Rational::from_integer(2.into())));
    let total = &trace + &correction;
    if has_boundary {
        total.scale(q)
    } else {
        total
    }
}

/// `π(e ∈ F)` on a connected graph with excess ≤ 1, boundary vertices wired.
pub fn marginal_fn(g: &Graph, e: usize, boundary: &[usize], q: &Rational) -> Result<RationalFn<Rational>> {
    require_q(q)?;
    require_connected(g)?;
    if e >= g.n_edges() {
        return Err(Error::param(format!("edge {e} out of range")));
    }
    let excess = graph_excess(g);
    if excess > 1 {
        return Err(Error::structure(format!(
            "ball has treelike excess {excess}; only trees and unicyclic balls are supported"
        )));
    }
    let mask = boundary_mask(g.n_vertices(), boundary)?;
    let numerator = partition_poly(g, &mask, Some(e), q);
    let denominator = partition_poly(g, &mask, None, q);
    if denominator.degree().unwrap_or(0) > DEGREE_WARNING {
        log::warn!(
            "ball marginal has degree {} (> {DEGREE_WARNING})",
            denominator.degree().unwrap_or(0)
        );
    }
    RationalFn::new(numerator, denominator)
}

/// Marginal of a ball edge (local id) under the given boundary condition.
pub fn ball_marginal_fn(
    b: &Ball,
    local_edge: usize,
    q: &Rational,
    kind: BoundaryKind,
) -> Result<RationalFn<Rational>> {
    if b.radius > MAX_RADIUS {
        return Err(Error::param(format!(
            "ball radius {} exceeds the supported maximum {MAX_RADIUS}",
            b.radius
        )));
    }
    let boundary: &[usize] = match kind {
        BoundaryKind::Free => &[],
        BoundaryKind::Wired => &b.boundary,
    };
    marginal_fn(&b.subgraph, local_edge, boundary, q)
}
