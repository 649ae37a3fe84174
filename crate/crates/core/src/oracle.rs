//! Brute-force exact computations on small graphs.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{DisjointSets, Graph};
use crate::model::{Phase, PhaseSpec, RcParams};
use crate::poly::{Poly, RationalFn};
use crate::scalar::{log_sum_exp, Real};
use crate::Rational;

/// Maximum edge count for subset enumeration.
pub const EDGE_BUDGET: usize = 25;
/// Maximum edge count for a full distribution table.
pub const DISTRIBUTION_BUDGET: usize = 16;
/// Maximum number of Potts colorings.
pub const POTTS_BUDGET: u128 = 10_000_000;

/// Conditioning for exact marginals and distributions.
#[derive(Clone, Debug, PartialEq)]
pub enum Boundary {
    Free,
    /// The listed vertices are identified into one component.
    Wired(Vec<usize>),
    /// Restricted to a phase band.
    Phase(PhaseSpec, Phase),
}

impl Boundary {
    fn wiring(&self) -> &[usize] {
        match self {
            Boundary::Wired(w) => w,
            _ => &[],
        }
    }

    fn admits(&self, in_count: usize, m: usize) -> bool {
        match self {
            Boundary::Phase(spec, phase) => spec.contains(*phase, in_count, m),
            _ => true,
        }
    }
}

fn check_budget(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::Budget {
            what,
            actual: actual as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

/// Number of edge subsets with each `(c(F), |F|)`, optionally restricted to
/// subsets containing a tracked edge.
#[derive(Clone, Debug)]
pub struct Census {
    n_edges: usize,
    max_components: usize,
    counts: Vec<u64>,
    tracked: Option<Vec<u64>>,
}

impl Census {
    fn index(&self, c: usize, k: usize) -> usize {
        c * (self.n_edges + 1) + k
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn count(&self, c: usize, k: usize) -> u64 {
        self.counts[self.index(c, k)]
    }

    pub fn tracked_count(&self, c: usize, k: usize) -> Option<u64> {
        self.tracked.as_ref().map(|t| t[self.index(c, k)])
    }

    /// Nonzero `(c, k, total, tracked)` cells.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u64, u64)> + '_ {
        (0..=self.max_components).flat_map(move |c| {
            (0..=self.n_edges).filter_map(move |k| {
                let i = self.index(c, k);
                let total = self.counts[i];
                (total > 0).then(|| (c, k, total, self.tracked.as_ref().map_or(0, |t| t[i])))
            })
        })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Exact polynomial in `x` for a fixed `q`, over subsets passing `keep`.
    fn poly(&self, q: &Rational, tracked: bool, keep: impl Fn(usize) -> bool) -> Poly<Rational> {
        let mut coeffs = vec![Rational::zero(); self.n_edges + 1];
        let mut q_pow = Rational::one();
        for c in 0..=self.max_components {
            for (k, coeff) in coeffs.iter_mut().enumerate() {
                if !keep(k) {
                    continue;
                }
                let i = self.index(c, k);
                let n = if tracked {
                    self.tracked.as_ref().expect("tracked census")[i]
                } else {
                    self.counts[i]
                };
                if n > 0 {
                    *coeff += Rational::from_integer(BigInt::from(n)) * &q_pow;
                }
            }
            q_pow *= q;
        }
        Poly::new(coeffs)
    }

    fn log_sum<S: Real>(&self, p: &RcParams<S>, tracked: bool, keep: impl Fn(usize) -> bool) -> S {
        log_sum_exp(self.cells().filter(|&(_, k, _, _)| keep(k)).filter_map(
            |(c, k, total, with)| {
                let n = if tracked { with } else { total };
                (n > 0).then(|| {
                    S::of((n as f64).ln())
                        + S::of(c as f64) * p.ln_q()
                        + S::of(k as f64) * p.ln_x()
                })
            },
        ))
    }
}

/// Connectivity of `a` and `b` using the edges in `mask`, with `wired` acting
/// as one vertex. Vertices are local indices below 128.
fn connected(ends: &[(u8, u8)], mask: u32, wired: u128, a: u8, b: u8) -> bool {
    let bit = |v: u8| 1u128 << v;
    let mut reach = bit(a);
    if reach & wired != 0 {
        reach |= wired;
    }
    loop {
        if reach & bit(b) != 0 {
            return true;
        }
        let mut grown = reach;
        for (e, &(u, v)) in ends.iter().enumerate() {
            if mask & (1 << e) == 0 {
                continue;
            }
            let (iu, iv) = (grown & bit(u) != 0, grown & bit(v) != 0);
            if iu != iv {
                grown |= bit(u) | bit(v);
                if grown & wired != 0 {
                    grown |= wired;
                }
            }
        }
        if grown == reach {
            return false;
        }
        reach = grown;
    }
}

/// Enumerates all `2^m` edge subsets in Gray-code order, maintaining `c(F)`
/// incrementally.
pub fn census(g: &Graph, wired: &[usize], tracked_edge: Option<usize>) -> Result<Census> {
    let m = g.n_edges();
    check_budget("edge count", m, EDGE_BUDGET)?;
    let n = g.n_vertices();
    let mut wired: Vec<usize> = wired.to_vec();
    wired.sort_unstable();
    wired.dedup();
    if let Some(&v) = wired.iter().find(|&&v| v >= n) {
        return Err(Error::param(format!("wired vertex {v} out of range")));
    }
    if let Some(e) = tracked_edge.filter(|&e| e >= m) {
        return Err(Error::param(format!("edge {e} out of range")));
    }

    let mut local = vec![usize::MAX; n];
    let mut next = 0usize;
    let mut label = |v: usize, local: &mut Vec<usize>| {
        if local[v] == usize::MAX {
            local[v] = next;
            next += 1;
        }
        local[v] as u8
    };
    let ends: Vec<(u8, u8)> = g
        .edges()
        .iter()
        .map(|&(a, b)| (label(a, &mut local), label(b, &mut local)))
        .collect();
    let mut wired_mask = 0u128;
    for &v in &wired {
        wired_mask |= 1u128 << label(v, &mut local);
    }
    check_budget("active vertex count", next, 128)?;

    let empty_components = n - wired.len().saturating_sub(1);
    let max_components = empty_components;
    let width = m + 1;
    let mut counts = vec![0u64; (max_components + 1) * width];
    let mut tracked = tracked_edge.map(|_| vec![0u64; (max_components + 1) * width]);
    let track_bit = tracked_edge.map_or(0, |e| 1u32 << e);

    let mut mask = 0u32;
    let mut c = empty_components;
    let mut k = 0usize;
    counts[c * width] += 1;
    if let Some(t) = tracked.as_mut() {
        if track_bit == 0 {
            t[c * width] += 1;
        }
    }
    for step in 1u64..(1u64 << m) {
        let e = step.trailing_zeros() as usize;
        let bit = 1u32 << e;
        let (a, b) = ends[e];
        if mask & bit == 0 {
            if !connected(&ends, mask, wired_mask, a, b) {
                c -= 1;
            }
            mask |= bit;
            k += 1;
        } else {
            mask &= !bit;
            k -= 1;
            if !connected(&ends, mask, wired_mask, a, b) {
                c += 1;
            }
        }
        counts[c * width + k] += 1;
        if let Some(t) = tracked.as_mut() {
            if mask & track_bit != 0 {
                t[c * width + k] += 1;
            }
        }
    }
    Ok(Census {
        n_edges: m,
        max_components,
        counts,
        tracked,
    })
}

/// `Z(x) = Σ_F q^{c(F)} x^{|F|}` as an exact polynomial.
pub fn exact_z(g: &Graph, q: &Rational) -> Result<Poly<Rational>> {
    Ok(census(g, &[], None)?.poly(q, false, |_| true))
}

/// Exact partition polynomial with the listed vertices wired together.
pub fn exact_z_wired(g: &Graph, q: &Rational, wired: &[usize]) -> Result<Poly<Rational>> {
    Ok(census(g, wired, None)?.poly(q, false, |_| true))
}

/// `ln Z`.
pub fn exact_log_z<S: Real>(g: &Graph, p: &RcParams<S>) -> Result<S> {
    Ok(census(g, &[], None)?.log_sum(p, false, |_| true))
}

/// `ln Z` restricted to one phase band.
pub fn exact_phase_log_z<S: Real>(
    g: &Graph,
    p: &RcParams<S>,
    spec: &PhaseSpec,
    phase: Phase,
) -> Result<S> {
    let m = g.n_edges();
    Ok(census(g, &[], None)?.log_sum(p, false, |k| spec.contains(phase, k, m)))
}

/// `π(e ∈ F)` under the given conditioning.
pub fn exact_edge_marginal<S: Real>(
    g: &Graph,
    p: &RcParams<S>,
    e: usize,
    boundary: &Boundary,
) -> Result<S> {
    let m = g.n_edges();
    let census = census(g, boundary.wiring(), Some(e))?;
    let keep = |k| boundary.admits(k, m);
    let num = census.log_sum(p, true, keep);
    let den = census.log_sum(p, false, keep);
    if den == S::neg_infinity() {
        return Err(Error::param("conditioning event is empty"));
    }
    Ok((num - den).exp())
}

/// `π(e ∈ F)` as an exact rational function of `x` for a fixed `q`,
/// optionally with a wired vertex set.
pub fn exact_marginal_fn(
    g: &Graph,
    q: &Rational,
    e: usize,
    wired: &[usize],
) -> Result<RationalFn<Rational>> {
    exact_conditioned_marginal_fn(g, q, e, &Boundary::Wired(wired.to_vec()))
}

/// `π(e ∈ F)` as an exact rational function of `x` under any conditioning.
pub fn exact_conditioned_marginal_fn(
    g: &Graph,
    q: &Rational,
    e: usize,
    boundary: &Boundary,
) -> Result<RationalFn<Rational>> {
    let m = g.n_edges();
    let census = census(g, boundary.wiring(), Some(e))?;
    let keep = |k| boundary.admits(k, m);
    RationalFn::new(census.poly(q, true, keep), census.poly(q, false, keep))
}

/// `ln Σ_σ e^{β m(σ)}` over all `q^n` Potts colorings, where `m(σ)` counts
/// monochromatic edges.
pub fn exact_potts_log_z(g: &Graph, q: u32, beta: f64) -> Result<f64> {
    if q < 1 {
        return Err(Error::param("Potts model needs q ≥ 1"));
    }
    let n = g.n_vertices();
    let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > POTTS_BUDGET {
        return Err(Error::Budget {
            what: "Potts coloring count",
            actual: total,
            limit: POTTS_BUDGET,
        });
    }
    let mut histogram = vec![0u64; g.n_edges() + 1];
    let mut colors = vec![0u32; n];
    loop {
        let mono = g
            .edges()
            .iter()
            .filter(|&&(a, b)| colors[a] == colors[b])
            .count();
        histogram[mono] += 1;
        let mut i = 0;
        while i < n {
            colors[i] += 1;
            if colors[i] < q {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(log_sum_exp(
        histogram
            .iter()
            .enumerate()
            .filter(|(_, &h)| h > 0)
            .map(|(k, &h)| (h as f64).ln() + beta * k as f64),
    ))
}

/// Normalized Gibbs probabilities indexed by edge mask (bit `e` set iff
/// `e ∈ F`).
pub fn exact_distribution<S: Real>(
    g: &Graph,
    p: &RcParams<S>,
    boundary: &Boundary,
) -> Result<Vec<S>> {
    let m = g.n_edges();
    check_budget("edge count", m, DISTRIBUTION_BUDGET)?;
    let n = g.n_vertices();
    let wired = boundary.wiring();
    if wired.iter().any(|&v| v >= n) {
        return Err(Error::param("wired vertex out of range"));
    }
    let log_weights: Vec<S> = (0u32..1 << m)
        .map(|mask| {
            let k = mask.count_ones() as usize;
            if !boundary.admits(k, m) {
                return S::neg_infinity();
            }
            let mut sets = DisjointSets::new(n);
            for w in wired.windows(2) {
                sets.union(w[0], w[1]);
            }
            for (e, &(a, b)) in g.edges().iter().enumerate() {
                if mask & (1 << e) != 0 {
                    sets.union(a, b);
                }
            }
            crate::model::log_weight_counts(sets.count(), k, p)
        })
        .collect();
    let log_z = log_sum_exp(log_weights.iter().copied());
    if log_z == S::neg_infinity() {
        return Err(Error::param("conditioning event is empty"));
    }
    Ok(log_weights.into_iter().map(|w| (w - log_z).exp()).collect())
}
