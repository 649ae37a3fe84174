//! Measurable checks of the structural claims on small fixtures: WSM gaps,
//! phase masses, and the path event behind the WSM bound.

use std::io::Write;

use serde::Serialize;

use crate::dynamics::{ChainState, UpdateStream};
use crate::error::{Error, Result};
use crate::estimator::{batch_means, edge_ball_marginal};
use crate::graph::{ball, components_of, Graph};
use crate::model::{rational_from_f64, Config, Phase, PhaseSpec, RcParams};
use crate::oracle::{census, exact_conditioned_marginal_fn, Boundary, Census};
use crate::poly::Coefficient;
use crate::polymers::ordered_polymers;
use crate::rng::split;
use crate::scalar::log_sum_exp;
use crate::treeball::BoundaryKind;

/// Which phase (and matching ball boundary) a WSM gap refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMode {
    /// Ordered band against the wired ball.
    Ordered,
    /// Disordered band against the free ball.
    Disordered,
}

impl GapMode {
    fn phase(self) -> Phase {
        match self {
            GapMode::Ordered => Phase::Ordered,
            GapMode::Disordered => Phase::Disordered,
        }
    }

    fn boundary(self) -> BoundaryKind {
        match self {
            GapMode::Ordered => BoundaryKind::Wired,
            GapMode::Disordered => BoundaryKind::Free,
        }
    }
}

/// The measure the graph-side marginal is taken under.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conditioning {
    /// Restricted to the mode's phase band.
    Band(PhaseSpec),
    /// The full configuration space.
    WholeSpace,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMethod {
    /// Exact rational arithmetic at the nearest rational `q` and `x`.
    Exact,
    /// Chain average; observations once per sweep.
    Mcmc { sweeps: u64, burn_in_sweeps: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapValue {
    pub value: f64,
    pub stderr: Option<f64>,
    pub phase_marginal: f64,
    pub ball_marginal: f64,
}

/// `|π_C(1_e) - π_{B_r(v)}(1_e)|` with `v` the smaller endpoint of `e`.
#[allow(clippy::too_many_arguments)]
pub fn wsm_gap(
    c: &Graph,
    q: f64,
    beta: f64,
    e: usize,
    r: usize,
    mode: GapMode,
    conditioning: Conditioning,
    method: GapMethod,
) -> Result<GapValue> {
    if e >= c.n_edges() {
        return Err(Error::param(format!("edge {e} out of range")));
    }
    let p = RcParams::new(q, beta)?;
    let qr = rational_from_f64(q);
    let xr = rational_from_f64(p.x());
    let ball_fn = edge_ball_marginal(c, e, r, &qr, mode.boundary())?;
    let ball_exact = ball_fn.eval(&xr)?;
    let ball_marginal = ball_exact.to_f64_lossy();
    match method {
        GapMethod::Exact => {
            let boundary = match conditioning {
                Conditioning::Band(spec) => Boundary::Phase(spec, mode.phase()),
                Conditioning::WholeSpace => Boundary::Free,
            };
            let phase_exact = exact_conditioned_marginal_fn(c, &qr, e, &boundary)?.eval(&xr)?;
            let diff = &phase_exact - &ball_exact;
            Ok(GapValue {
                value: diff.ln_abs().exp(),
                stderr: None,
                phase_marginal: phase_exact.to_f64_lossy(),
                ball_marginal,
            })
        }
        GapMethod::Mcmc {
            sweeps,
            burn_in_sweeps,
            seed,
        } => {
            let init = match mode {
                GapMode::Ordered => Config::full(c),
                GapMode::Disordered => Config::empty(c),
            };
            let mut state = match conditioning {
                Conditioning::Band(spec) => ChainState::restricted(init, spec, mode.phase())?,
                Conditioning::WholeSpace => ChainState::new(init),
            };
            let m = c.n_edges() as u64;
            let stream = UpdateStream::new(split(seed, 0), c.n_edges());
            state.run(&p, &stream, burn_in_sweeps * m);
            let mut hits = Vec::with_capacity(sweeps as usize);
            for _ in 0..sweeps {
                state.run(&p, &stream, m);
                hits.push(if state.config().contains(e) { 1.0 } else { 0.0 });
            }
            let (mean, se) = batch_means(&hits);
            Ok(GapValue {
                value: (mean - ball_marginal).abs(),
                stderr: Some(se),
                phase_marginal: mean,
                ball_marginal,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MassMethod {
    Exact,
    /// Unrestricted chain from all-out, warm-started along the grid.
    Mcmc { sweeps: u64, burn_in_sweeps: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MassRow {
    pub beta: f64,
    pub mass_ord: f64,
    pub mass_dis: f64,
    pub mass_mid: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassCurve {
    pub rows: Vec<MassRow>,
    /// First grid crossing of `mass_ord = mass_dis`, refined by bisection
    /// for the exact method and by linear interpolation otherwise.
    pub crossover: Option<f64>,
}

struct BandSums {
    census: Census,
    spec: PhaseSpec,
}

impl BandSums {
    fn new(c: &Graph, spec: PhaseSpec) -> Result<Self> {
        Ok(BandSums {
            census: census(c, &[], None)?,
            spec,
        })
    }

    /// `ln Z` restricted to each band, in the order ordered, disordered, middle.
    fn log_sums(&self, p: &RcParams<f64>) -> [f64; 3] {
        let m = self.census.n_edges();
        let mut parts: [Vec<f64>; 3] = Default::default();
        for (cc, k, total, _) in self.census.cells() {
            let w = (total as f64).ln() + cc as f64 * p.ln_q() + k as f64 * p.ln_x();
            let slot = match self.spec.classify(k, m) {
                Phase::Ordered => 0,
                Phase::Disordered => 1,
                Phase::Middle => 2,
            };
            parts[slot].push(w);
        }
        parts.map(log_sum_exp)
    }

    fn row(&self, q: f64, beta: f64) -> Result<MassRow> {
        let p = RcParams::new(q, beta)?;
        let [o, d, mid] = self.log_sums(&p);
        let all = log_sum_exp([o, d, mid]);
        Ok(MassRow {
            beta,
            mass_ord: (o - all).exp(),
            mass_dis: (d - all).exp(),
            mass_mid: (mid - all).exp(),
        })
    }

    fn log_ratio(&self, q: f64, beta: f64) -> Result<f64> {
        let p = RcParams::new(q, beta)?;
        let [o, d, _] = self.log_sums(&p);
        Ok(o - d)
    }
}

/// Exact band masses at one temperature.
pub fn phase_masses(c: &Graph, q: f64, spec: PhaseSpec, beta: f64) -> Result<MassRow> {
    BandSums::new(c, spec)?.row(q, beta)
}

/// The `β` in `[lo, hi]` where the ordered and disordered bands carry equal
/// mass, by bisection on `ln Z^ord - ln Z^dis` (increasing in `β`).
pub fn crossover_beta(c: &Graph, q: f64, spec: PhaseSpec, lo: f64, hi: f64) -> Result<f64> {
    let sums = BandSums::new(c, spec)?;
    bisect(&sums, q, lo, hi)
}

fn bisect(sums: &BandSums, q: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (flo, fhi) = (sums.log_ratio(q, lo)?, sums.log_ratio(q, hi)?);
    if !(flo <= 0.0 && fhi >= 0.0) {
        return Err(Error::param(format!(
            "no crossover in [{lo}, {hi}] (log ratios {flo}, {fhi})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sums.log_ratio(q, mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Band masses over an ascending `β` grid.
pub fn phase_mass_curve(
    c: &Graph,
    q: f64,
    spec: PhaseSpec,
    grid: &[f64],
    method: MassMethod,
) -> Result<MassCurve> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("beta grid must be strictly ascending"));
    }
    let rows = match method {
        MassMethod::Exact => {
            let sums = BandSums::new(c, spec)?;
            let rows: Vec<MassRow> = grid.iter().map(|&b| sums.row(q, b)).collect::<Result<_>>()?;
            let crossover = first_crossing(&rows)
                .map(|i| bisect(&sums, q, rows[i].beta, rows[i + 1].beta))
                .transpose()?;
            return Ok(MassCurve { rows, crossover });
        }
        MassMethod::Mcmc {
            sweeps,
            burn_in_sweeps,
            seed,
        } => {
            let m = c.n_edges();
            let stream = UpdateStream::new(split(seed, 0), m);
            let mut state = ChainState::new(Config::empty(c));
            let mut rows = Vec::with_capacity(grid.len());
            for &beta in grid {
                let p = RcParams::new(q, beta)?;
                state.run(&p, &stream, burn_in_sweeps * m as u64);
                let mut tally = [0u64; 3];
                for _ in 0..sweeps {
                    state.run(&p, &stream, m as u64);
                    let slot = match state.config().phase(&spec) {
                        Phase::Ordered => 0,
                        Phase::Disordered => 1,
                        Phase::Middle => 2,
                    };
                    tally[slot] += 1;
                }
                let n = sweeps.max(1) as f64;
                rows.push(MassRow {
                    beta,
                    mass_ord: tally[0] as f64 / n,
                    mass_dis: tally[1] as f64 / n,
                    mass_mid: tally[2] as f64 / n,
                });
            }
            rows
        }
    };
    let crossover = first_crossing(&rows).map(|i| {
        let (a, b) = (&rows[i], &rows[i + 1]);
        let (fa, fb) = (a.mass_ord - a.mass_dis, b.mass_ord - b.mass_dis);
        if fb == fa {
            a.beta
        } else {
            a.beta + (b.beta - a.beta) * (-fa) / (fb - fa)
        }
    });
    Ok(MassCurve { rows, crossover })
}

fn first_crossing(rows: &[MassRow]) -> Option<usize> {
    rows.windows(2).position(|w| {
        w[0].mass_ord - w[0].mass_dis <= 0.0 && w[1].mass_ord - w[1].mass_dis >= 0.0
    })
}

/// Whether some simple path of length `r` from `v` has every vertex after
/// `v` outside the largest component of `(V_C, F) \ v`.
pub fn not_a(c: &Graph, f: &Config<'_>, v: usize, r: usize) -> bool {
    let info = components_of(c, |e| f.contains(e), Some(v), &[]);
    let avoid: Vec<bool> = (0..c.n_vertices())
        .map(|u| u != v && info.label[u] != 0)
        .collect();
    let mut on_path = vec![false; c.n_vertices()];
    on_path[v] = true;
    long_path(c, &avoid, &mut on_path, v, r)
}

fn long_path(c: &Graph, avoid: &[bool], on_path: &mut [bool], at: usize, left: usize) -> bool {
    if left == 0 {
        return true;
    }
    for &(w, _) in c.neighbors(at) {
        if avoid[w] && !on_path[w] {
            on_path[w] = true;
            let found = long_path(c, avoid, on_path, w, left - 1);
            on_path[w] = false;
            if found {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EventAReport {
    pub samples: usize,
    /// Frequency of `¬A_{v,r}`.
    pub not_a: f64,
    /// Frequency of an ordered polymer with at least `r` inner vertices,
    /// counting configurations without a giant component.
    pub large_polymer: f64,
    pub no_giant: f64,
    /// Frequency of `¬A'_{v,r}`: fewer than `(1-η)|E_C|` in-edges outside
    /// the ball.
    pub not_a_prime: f64,
    /// `not_a ≤ large_polymer + not_a_prime` on this data.
    pub consistent: bool,
}

/// Event frequencies over ordered-phase samples.
pub fn event_a_frequency(
    c: &Graph,
    samples: &[Config<'_>],
    v: usize,
    r: usize,
    spec: PhaseSpec,
) -> Result<EventAReport> {
    if v >= c.n_vertices() {
        return Err(Error::param(format!("vertex {v} out of range")));
    }
    if r == 0 {
        return Err(Error::param("path length must be at least 1"));
    }
    let bl = ball(c, v, r);
    let inside: Vec<bool> = {
        let mut mask = vec![false; c.n_edges()];
        for &e in &bl.edge_to_parent {
            mask[e] = true;
        }
        mask
    };
    let m = c.n_edges() as f64;
    let (mut na, mut large, mut no_giant, mut nap) = (0usize, 0usize, 0usize, 0usize);
    for f in samples {
        if not_a(c, f, v, r) {
            na += 1;
        }
        match ordered_polymers(c, f, v) {
            Ok(set) => {
                if set.polymers.iter().any(|g| g.inner_vertices.len() >= r) {
                    large += 1;
                }
            }
            Err(Error::NoGiantComponent) => {
                no_giant += 1;
                large += 1;
            }
            Err(err) => return Err(err),
        }
        let outside = f.in_edges().iter().filter(|&e| !inside[e]).count() as f64;
        let need = (1.0 - spec.eta()) * m;
        if outside + 1e-9 * (1.0 + need) < need {
            nap += 1;
        }
    }
    let n = samples.len();
    let freq = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
    Ok(EventAReport {
        samples: n,
        not_a: freq(na),
        large_polymer: freq(large),
        no_giant: freq(no_giant),
        not_a_prime: freq(nap),
        consistent: na <= large + nap,
    })
}

/// One line of a sweep table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub quantity: String,
    pub seed: u64,
    pub q: f64,
    pub beta: f64,
    pub eta: Option<f64>,
    pub r: Option<usize>,
    pub edge: Option<usize>,
    pub value: f64,
    pub stderr: Option<f64>,
}

pub fn write_csv(rows: &[SweepRow], out: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["quantity", "seed", "q", "beta", "eta", "r", "edge", "value", "stderr"])
        .map_err(csv_error)?;
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(rows: &[SweepRow], mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}
