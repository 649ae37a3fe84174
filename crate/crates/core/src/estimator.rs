//! Partition-function estimation by marginal integration, MCMC
//! thermodynamic integration, and the phase-mixture sampler.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{ChainState, UpdateStream};
use crate::error::{Error, Result};
use crate::graph::{ball, components_of, Graph};
use crate::integrator::integrate_marginal_over_x;
use crate::model::{beta_thresholds, rational_from_f64, Config, Phase, PhaseSpec, RcParams};
use crate::oracle::{exact_log_z, exact_marginal_fn, exact_phase_log_z, EDGE_BUDGET};
use crate::poly::RationalFn;
use crate::rng::{hash2, split, unit_f64};
use crate::scalar::{log_sum_exp, Real};
use crate::treeball::{ball_marginal_fn, BoundaryKind};
use crate::Rational;

/// `ln(q·(e^β - 1)^m)`.
pub fn z_at_beta_infinity<S: Real>(q: S, m: usize, beta: S) -> S {
    if m == 0 {
        return q.ln();
    }
    q.ln() + S::of(m as f64) * beta.exp_m1().ln()
}

/// `g_C(β) = e^β/(e^β - 1) · Σ_e π(1_e)`.
pub fn gc_from_marginals<S: Real>(marginals: &[S], beta: S) -> S {
    let sum = marginals.iter().fold(S::zero(), |acc, &p| acc + p);
    if sum == S::zero() {
        return sum;
    }
    sum * beta.exp() / beta.exp_m1()
}

/// Default WSM radius `⌈3 ln n / d⌉`, at least 1.
pub fn default_radius(n: usize, d: f64) -> usize {
    if n < 2 || !(d > 0.0) {
        return 1;
    }
    ((3.0 * (n as f64).ln() / d).ceil() as usize).max(1)
}

/// Activity where the ordered anchor `q·x^m` is trusted: `2mq/eps`.
pub fn default_x_cap(q: f64, m: usize, eps: f64) -> f64 {
    2.0 * m.max(1) as f64 * q / eps
}

fn check_common(q: f64, beta: f64, r: usize, eps: f64) -> Result<()> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::param(format!("q must be positive, got {q}")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::param(format!("beta must be positive, got {beta}")));
    }
    if r == 0 {
        return Err(Error::param("ball radius must be at least 1"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::param(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Marginal of `e` on the ball of radius `r` around its smaller endpoint.
/// Balls that are not 1-treelike go to the census oracle when small enough.
pub fn edge_ball_marginal(
    c: &Graph,
    e: usize,
    r: usize,
    q: &Rational,
    kind: BoundaryKind,
) -> Result<RationalFn<Rational>> {
    if r == 0 {
        return Err(Error::param("ball radius must be at least 1"));
    }
    let (a, b) = c.edge(e);
    let mut bl = ball(c, a.min(b), r.min(c.n_vertices()));
    if bl.boundary.is_empty() {
        bl.radius = bl.distance.iter().copied().max().unwrap_or(0) + 1;
    }
    let local = bl
        .local_edge(e)
        .expect("an edge at its own endpoint lies in every ball of radius ≥ 1");
    match ball_marginal_fn(&bl, local, q, kind) {
        Err(Error::Structure(msg)) => {
            if bl.subgraph.n_edges() > EDGE_BUDGET {
                return Err(Error::Structure(msg));
            }
            log::debug!("edge {e}: {msg}; using the census oracle");
            let wired: &[usize] = match kind {
                BoundaryKind::Free => &[],
                BoundaryKind::Wired => &bl.boundary,
            };
            exact_marginal_fn(&bl.subgraph, q, local, wired)
        }
        other => other,
    }
}

/// One branch of the marginal-integration estimator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchEstimate {
    pub log_z: f64,
    /// Per-edge `∫ g_e(x)/x dx`, by edge id.
    pub integrals: Vec<f64>,
    /// Anchor temperature for the ordered branch.
    pub beta_infinity: Option<f64>,
}

fn per_edge_integrals(
    c: &Graph,
    q: f64,
    r: usize,
    kind: BoundaryKind,
    lo: f64,
    hi: f64,
    eps: f64,
) -> Result<Vec<f64>> {
    let q = rational_from_f64(q);
    (0..c.n_edges())
        .into_par_iter()
        .map(|e| {
            let g = edge_ball_marginal(c, e, r, &q, kind)?;
            integrate_marginal_over_x(&g, lo, hi, eps)
        })
        .collect()
}

/// Ordered branch with the default anchor [`default_x_cap`].
pub fn estimate_log_z_ordered(
    c: &Graph,
    q: f64,
    beta_star: f64,
    r: usize,
    eps: f64,
) -> Result<BranchEstimate> {
    estimate_log_z_ordered_with_cap(c, q, beta_star, r, eps, None)
}

/// `ln q + m ln x∞ - Σ_e ∫_{x*}^{x∞} g⁺_e(x)/x dx` with wired-boundary ball
/// marginals; `x∞ = max(x*, x_cap)`.
pub fn estimate_log_z_ordered_with_cap(
    c: &Graph,
    q: f64,
    beta_star: f64,
    r: usize,
    eps: f64,
    x_cap: Option<f64>,
) -> Result<BranchEstimate> {
    check_common(q, beta_star, r, eps)?;
    let m = c.n_edges();
    let x_star = beta_star.exp_m1();
    let cap = x_cap.unwrap_or_else(|| default_x_cap(q, m, eps));
    if !(cap > 0.0) {
        return Err(Error::param(format!("x cap must be positive, got {cap}")));
    }
    let x_inf = x_star.max(cap);
    let beta_inf = x_inf.ln_1p();
    let anchor = z_at_beta_infinity(q, m, beta_inf);
    if x_inf == x_star || m == 0 {
        return Ok(BranchEstimate {
            log_z: anchor,
            integrals: vec![0.0; m],
            beta_infinity: Some(beta_inf),
        });
    }
    let integrals = per_edge_integrals(
        c,
        q,
        r,
        BoundaryKind::Wired,
        x_star,
        x_inf,
        eps / (2.0 * m as f64),
    )?;
    Ok(BranchEstimate {
        log_z: anchor - integrals.iter().sum::<f64>(),
        integrals,
        beta_infinity: Some(beta_inf),
    })
}

/// `n ln q + Σ_e ∫_0^{x*} g⁻_e(x)/x dx` with free-boundary ball marginals.
pub fn estimate_log_z_disordered(
    c: &Graph,
    q: f64,
    beta_star: f64,
    r: usize,
    eps: f64,
) -> Result<BranchEstimate> {
    check_common(q, beta_star, r, eps)?;
    let m = c.n_edges();
    let anchor = c.n_vertices() as f64 * q.ln();
    if m == 0 {
        return Ok(BranchEstimate {
            log_z: anchor,
            integrals: Vec::new(),
            beta_infinity: None,
        });
    }
    let x_star = beta_star.exp_m1();
    let integrals = per_edge_integrals(
        c,
        q,
        r,
        BoundaryKind::Free,
        0.0,
        x_star,
        eps / m as f64,
    )?;
    Ok(BranchEstimate {
        log_z: anchor + integrals.iter().sum::<f64>(),
        integrals,
        beta_infinity: None,
    })
}

/// Which estimate `ln Ẑ` reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Ordered,
    Disordered,
    /// Log-sum of both, inside `[β₀, β₁]`.
    Both,
    /// No edges to estimate.
    Trivial,
}

/// Which branch applies at `beta`. Without a phase transition (`q ≤ 1`) the
/// disordered branch is always used.
pub fn select_branch(q: f64, beta: f64, d: f64) -> Result<Branch> {
    if q <= 1.0 {
        return Ok(Branch::Disordered);
    }
    let (beta0, beta1) = beta_thresholds(q, d)?;
    Ok(if beta < beta0 {
        Branch::Disordered
    } else if beta > beta1 {
        Branch::Ordered
    } else {
        Branch::Both
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentEstimate {
    pub branch: Branch,
    pub ordered: Option<BranchEstimate>,
    pub disordered: Option<BranchEstimate>,
    pub log_z: f64,
}

impl ComponentEstimate {
    /// SHA-256 over the bit patterns of every per-edge integral, ordered
    /// branch first.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for part in [&self.ordered, &self.disordered].into_iter().flatten() {
            for v in &part.integrals {
                h.update(v.to_bits().to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }
}

/// Dispatches between the branches by the thresholds for average degree `d`.
pub fn estimate_log_z(c: &Graph, q: f64, beta: f64, d: f64, r: usize, eps: f64) -> Result<ComponentEstimate> {
    let branch = select_branch(q, beta, d)?;
    let ordered = match branch {
        Branch::Ordered | Branch::Both => Some(estimate_log_z_ordered(c, q, beta, r, eps)?),
        _ => None,
    };
    let disordered = match branch {
        Branch::Disordered | Branch::Both => Some(estimate_log_z_disordered(c, q, beta, r, eps)?),
        _ => None,
    };
    let log_z = log_sum_exp(
        [&ordered, &disordered]
            .into_iter()
            .flatten()
            .map(|b| b.log_z),
    );
    Ok(ComponentEstimate {
        branch,
        ordered,
        disordered,
        log_z,
    })
}

/// The estimate report for a whole input graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub beta: f64,
    pub branch: Branch,
    #[serde(rename = "logZ_ord")]
    pub log_z_ord: Option<f64>,
    #[serde(rename = "logZ_dis")]
    pub log_z_dis: Option<f64>,
    #[serde(rename = "logZ")]
    pub log_z: f64,
    pub per_edge_integrals_checksum: String,
    pub eps: f64,
    pub r: usize,
}

/// Splits `g` into components; the largest (by total degree) is estimated,
/// the rest are computed exactly when within the oracle budget.
pub fn estimate_graph(g: &Graph, q: f64, beta: f64, d: f64, r: usize, eps: f64) -> Result<EstimateReport> {
    if !(q > 0.0) {
        return Err(Error::param(format!("q must be positive, got {q}")));
    }
    let info = components_of(g, |_| true, None, &[]);
    let p = RcParams::new(q, beta)?;
    let mut total = 0.0;
    let mut main: Option<ComponentEstimate> = None;
    for (i, members) in info.members.iter().enumerate() {
        let (sub, _, _) = g.induced(members);
        if sub.n_edges() == 0 {
            total += sub.n_vertices() as f64 * q.ln();
            continue;
        }
        if i > 0 && sub.n_edges() <= EDGE_BUDGET {
            total += exact_log_z(&sub, &p)?;
            continue;
        }
        let est = estimate_log_z(&sub, q, beta, d, r, eps)?;
        total += est.log_z;
        if i == 0 {
            main = Some(est);
        }
    }
    let checksum = main.as_ref().map(|m| m.checksum()).unwrap_or_else(|| {
        hex::encode(Sha256::digest([]))
    });
    Ok(EstimateReport {
        beta,
        branch: main.as_ref().map_or(Branch::Trivial, |m| m.branch),
        log_z_ord: main.as_ref().and_then(|m| m.ordered.as_ref()).map(|b| b.log_z),
        log_z_dis: main.as_ref().and_then(|m| m.disordered.as_ref()).map(|b| b.log_z),
        log_z: total,
        per_edge_integrals_checksum: checksum,
        eps,
        r,
    })
}

/// Chain budget for thermodynamic integration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McmcSettings {
    /// Observations per grid point.
    pub samples: usize,
    /// Steps between observations; 0 means one sweep (`m` steps).
    pub thin: u64,
    /// Steps discarded at each grid point, in sweeps.
    pub burn_in_sweeps: u64,
    pub seed: u64,
}

impl Default for McmcSettings {
    fn default() -> Self {
        McmcSettings {
            samples: 2000,
            thin: 0,
            burn_in_sweeps: 50,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McmcEstimate {
    pub log_z: f64,
    pub stderr: f64,
    pub grid: Vec<f64>,
    /// `g_C` estimate per grid point.
    pub derivative: Vec<f64>,
}

/// Number of batches for batch-means standard errors.
pub const BATCHES: usize = 20;

/// Sample mean and batch-means standard error.
pub fn batch_means(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let batches = BATCHES.min(n);
    let size = n / batches;
    if batches < 2 {
        return (mean, 0.0);
    }
    let means: Vec<f64> = (0..batches)
        .map(|b| values[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let bm = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|v| (v - bm).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![hi],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn derivative_scale(beta: f64) -> f64 {
    beta.exp() / beta.exp_m1()
}

/// Runs one chain through the grid in the given order and returns
/// `(g_C, stderr)` per visited point.
fn sweep_grid(
    mut state: ChainState<'_>,
    q: f64,
    betas: &[f64],
    settings: &McmcSettings,
) -> Result<Vec<(f64, f64)>> {
    let m = state.graph().n_edges();
    let stream = UpdateStream::new(split(settings.seed, 0), m);
    let thin = if settings.thin == 0 { m.max(1) as u64 } else { settings.thin };
    let burn = settings.burn_in_sweeps * m.max(1) as u64;
    let mut out = Vec::with_capacity(betas.len());
    for &beta in betas {
        let p = RcParams::new(q, beta)?;
        state.run(&p, &stream, burn);
        let mut counts = Vec::with_capacity(settings.samples);
        for _ in 0..settings.samples {
            state.run(&p, &stream, thin);
            counts.push(state.in_count() as f64);
        }
        let (mean, se) = batch_means(&counts);
        let s = derivative_scale(beta);
        out.push((mean * s, se * s));
    }
    Ok(out)
}

fn trapezoid(grid: &[f64], values: &[(f64, f64)]) -> (f64, f64) {
    let mut integral = 0.0;
    let mut weights = vec![0.0; grid.len()];
    for k in 1..grid.len() {
        let h = grid[k] - grid[k - 1];
        integral += 0.5 * h * (values[k - 1].0 + values[k].0);
        weights[k - 1] += 0.5 * h;
        weights[k] += 0.5 * h;
    }
    let var: f64 = weights
        .iter()
        .zip(values)
        .map(|(w, (_, se))| (w * se).powi(2))
        .sum();
    (integral, var.sqrt())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(Error::param("grid points must be finite and non-negative"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("grid must be strictly ascending"));
    }
    Ok(())
}

/// `g_C` at `β = 0`: `m/q` when the band allows a single edge, else 0.
fn derivative_at_zero(m: usize, q: f64, admits_one: bool) -> f64 {
    if admits_one {
        m as f64 / q
    } else {
        0.0
    }
}

/// Thermodynamic integration of `g_C` from `β = 0` (anchor `n ln q`) over an
/// ascending grid ending at `beta_target`, with the unrestricted chain.
pub fn mcmc_thermo_log_z(
    c: &Graph,
    q: f64,
    beta_target: f64,
    grid: &[f64],
    settings: &McmcSettings,
) -> Result<McmcEstimate> {
    thermo_up(c, q, beta_target, grid, settings, None)
}

fn thermo_up(
    c: &Graph,
    q: f64,
    beta_target: f64,
    grid: &[f64],
    settings: &McmcSettings,
    band: Option<PhaseSpec>,
) -> Result<McmcEstimate> {
    if !(q > 0.0) {
        return Err(Error::param(format!("q must be positive, got {q}")));
    }
    check_grid(grid)?;
    let m = c.n_edges();
    let anchor = c.n_vertices() as f64 * q.ln();
    let mut points: Vec<f64> = grid.iter().copied().filter(|&b| b > 0.0 && b < beta_target).collect();
    if beta_target > 0.0 {
        points.push(beta_target);
    }
    if points.is_empty() || m == 0 {
        return Ok(McmcEstimate {
            log_z: anchor,
            stderr: 0.0,
            grid: vec![0.0],
            derivative: vec![derivative_at_zero(m, q, m > 0)],
        });
    }
    let state = match band {
        None => ChainState::new(Config::empty(c)),
        Some(spec) => ChainState::restricted(Config::empty(c), spec, Phase::Disordered)?,
    };
    let admits_one = band.map_or(true, |s| s.contains(Phase::Disordered, 1, m));
    let mut values = vec![(derivative_at_zero(m, q, admits_one), 0.0)];
    values.extend(sweep_grid(state, q, &points, settings)?);
    let mut full_grid = vec![0.0];
    full_grid.extend(points);
    let (integral, stderr) = trapezoid(&full_grid, &values);
    Ok(McmcEstimate {
        log_z: anchor + integral,
        stderr,
        derivative: values.iter().map(|v| v.0).collect(),
        grid: full_grid,
    })
}

/// Phase-restricted thermodynamic integration. The disordered band is
/// integrated up from `β = 0`; the ordered band down from `β∞` with anchor
/// `ln q + m ln x∞`. `points` grid points are used on the integration range.
pub fn mcmc_phase_log_z(
    c: &Graph,
    q: f64,
    beta: f64,
    spec: PhaseSpec,
    phase: Phase,
    points: usize,
    x_cap: f64,
    settings: &McmcSettings,
) -> Result<McmcEstimate> {
    if points < 2 {
        return Err(Error::param("phase integration needs at least two grid points"));
    }
    match phase {
        Phase::Disordered => {
            let grid = uniform_grid(0.0, beta, points);
            thermo_up(c, q, beta, &grid, settings, Some(spec))
        }
        Phase::Ordered => {
            if !(q > 0.0 && beta > 0.0) {
                return Err(Error::param("q and beta must be positive"));
            }
            let m = c.n_edges();
            let beta_inf = beta.max(x_cap.ln_1p());
            let anchor = z_at_beta_infinity(q, m, beta_inf);
            if beta_inf == beta || m == 0 {
                return Ok(McmcEstimate {
                    log_z: anchor,
                    stderr: 0.0,
                    grid: vec![beta_inf],
                    derivative: vec![m as f64 * derivative_scale(beta_inf)],
                });
            }
            let grid = uniform_grid(beta, beta_inf, points);
            let descending: Vec<f64> = grid.iter().rev().copied().collect();
            let state = ChainState::restricted(Config::full(c), spec, Phase::Ordered)?;
            let mut values = sweep_grid(state, q, &descending, settings)?;
            values.reverse();
            let (integral, stderr) = trapezoid(&grid, &values);
            Ok(McmcEstimate {
                log_z: anchor - integral,
                stderr,
                derivative: values.iter().map(|v| v.0).collect(),
                grid,
            })
        }
        Phase::Middle => Err(Error::param("the middle band has no anchor")),
    }
}

/// Where the mixture weight `P(ordered start)` comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixtureSource {
    Wsm { r: usize, eps: f64 },
    Mcmc { points: usize, settings: McmcSettings },
    Oracle,
    Given(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Disordered,
    Ordered,
    Window,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Start {
    AllIn,
    AllOut,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub regime: Regime,
    pub start: Start,
    /// Chosen band when the chain is restricted.
    pub phase: Option<Phase>,
    /// Probability of the ordered start.
    pub p_ord: Option<f64>,
    pub steps: u64,
}

#[derive(Debug)]
pub struct Sample<'g> {
    pub config: Config<'g>,
    pub provenance: Provenance,
}

/// Mixture sampler: the expensive mixture weight is computed once by
/// [`Sampler::prepare`], then each [`Sampler::sample`] runs one chain.
#[derive(Clone, Debug)]
pub struct Sampler<'g> {
    c: &'g Graph,
    params: RcParams<f64>,
    spec: PhaseSpec,
    regime: Regime,
    p_ord: Option<f64>,
    steps: u64,
}

impl<'g> Sampler<'g> {
    #[allow(clippy::too_many_arguments)]
    pub fn prepare(
        c: &'g Graph,
        q: f64,
        beta: f64,
        d: f64,
        spec: PhaseSpec,
        steps: u64,
        source: &MixtureSource,
    ) -> Result<Self> {
        let params = RcParams::new(q, beta)?;
        let regime = if q <= 1.0 {
            Regime::Disordered
        } else {
            let (beta0, beta1) = beta_thresholds(q, d)?;
            if beta <= beta0 {
                Regime::Disordered
            } else if beta >= beta1 {
                Regime::Ordered
            } else {
                Regime::Window
            }
        };
        let p_ord = match regime {
            Regime::Window => Some(mixture_weight(c, &params, spec, source)?),
            _ => None,
        };
        Ok(Sampler {
            c,
            params,
            spec,
            regime,
            p_ord,
            steps,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn p_ord(&self) -> Option<f64> {
        self.p_ord
    }

    /// Seed of the update stream [`Sampler::sample`] uses for `seed`.
    pub fn stream_seed(seed: u64) -> u64 {
        split(seed, 1)
    }

    /// The initial chain state and provenance for one sample.
    pub fn start(&self, seed: u64) -> Result<(ChainState<'g>, Provenance)> {
        let (start, phase) = match (self.regime, self.p_ord) {
            (Regime::Disordered, _) => (Start::AllOut, None),
            (Regime::Ordered, _) => (Start::AllIn, None),
            (Regime::Window, p) => {
                let u = unit_f64(hash2(seed, 0xC014));
                if u < p.unwrap_or(0.5) {
                    (Start::AllIn, Some(Phase::Ordered))
                } else {
                    (Start::AllOut, Some(Phase::Disordered))
                }
            }
        };
        let init = match start {
            Start::AllIn => Config::full(self.c),
            Start::AllOut => Config::empty(self.c),
        };
        let state = match phase {
            Some(ph) => ChainState::restricted(init, self.spec, ph)?,
            None => ChainState::new(init),
        };
        let provenance = Provenance {
            regime: self.regime,
            start,
            phase,
            p_ord: self.p_ord,
            steps: self.steps,
        };
        Ok((state, provenance))
    }

    pub fn params(&self) -> &RcParams<f64> {
        &self.params
    }

    pub fn sample(&self, seed: u64) -> Result<Sample<'g>> {
        let (mut state, provenance) = self.start(seed)?;
        let stream = UpdateStream::new(Self::stream_seed(seed), self.c.n_edges());
        if self.c.n_edges() > 0 {
            state.run(&self.params, &stream, self.steps);
        }
        Ok(Sample {
            config: state.into_config(),
            provenance,
        })
    }
}

fn logistic(diff: f64) -> f64 {
    if diff >= 0.0 {
        1.0 / (1.0 + (-diff).exp())
    } else {
        let e = diff.exp();
        e / (1.0 + e)
    }
}

/// `Ẑ^ord / (Ẑ^ord + Ẑ^dis)` from the chosen source.
pub fn mixture_weight(c: &Graph, p: &RcParams<f64>, spec: PhaseSpec, source: &MixtureSource) -> Result<f64> {
    let (q, beta) = (p.q(), p.beta());
    let (ord, dis) = match source {
        MixtureSource::Given(w) => {
            if !(0.0..=1.0).contains(w) {
                return Err(Error::param(format!("mixture weight {w} outside [0, 1]")));
            }
            return Ok(*w);
        }
        MixtureSource::Oracle => (
            exact_phase_log_z(c, p, &spec, Phase::Ordered)?,
            exact_phase_log_z(c, p, &spec, Phase::Disordered)?,
        ),
        MixtureSource::Wsm { r, eps } => (
            estimate_log_z_ordered(c, q, beta, *r, *eps)?.log_z,
            estimate_log_z_disordered(c, q, beta, *r, *eps)?.log_z,
        ),
        MixtureSource::Mcmc { points, settings } => {
            let cap = default_x_cap(q, c.n_edges(), 1e-3);
            let ord = mcmc_phase_log_z(c, q, beta, spec, Phase::Ordered, *points, cap, settings)?;
            let dis_settings = McmcSettings {
                seed: split(settings.seed, 7),
                ..*settings
            };
            let dis = mcmc_phase_log_z(c, q, beta, spec, Phase::Disordered, *points, cap, &dis_settings)?;
            (ord.log_z, dis.log_z)
        }
    };
    Ok(logistic(ord - dis))
}

/// One sample with the WSM mixture source at the default radius.
pub fn sample_rc<'g>(
    c: &'g Graph,
    q: f64,
    beta: f64,
    d: f64,
    spec: PhaseSpec,
    steps: u64,
    seed: u64,
) -> Result<Sample<'g>> {
    let source = MixtureSource::Wsm {
        r: default_radius(c.n_vertices(), d),
        eps: 1e-3,
    };
    Sampler::prepare(c, q, beta, d, spec, steps, &source)?.sample(seed)
}
