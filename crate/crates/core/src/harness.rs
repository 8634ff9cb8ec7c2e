//! Seeded Monte Carlo experiments.
//!
//! Replica `r` of an experiment with seed `s` draws from
//! [`stream_rng`]`(s, r, purpose)`, so results do not depend on how replicas
//! are scheduled across threads. Replicas run on the ambient rayon pool and
//! are aggregated in index order.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::degseq::{check_probability, delete_and_reprofile, ClassifyParams, DegreeSequence, Regime};
use crate::error::{invalid, Error, Result};
use crate::exploration::{explore, ExploreConfig};
use crate::graph::{default_steps, havel_hakimi_degrees, sample_uniform, sample_uniform_degrees, LabeledGraph};
use crate::percolation::{coupled_l1_sweep, percolate};
use crate::rng::{stream_rng, Stream};
use crate::stats::{mean, proportion, quantile};

/// Share of replicas that must clear the giant level at a supercritical probe.
pub const SUPERCRITICAL_PASS_SHARE: f64 = 0.9;
/// Standard errors allowed above the bound in the model-separation check.
pub const SEPARATION_SE_MULTIPLIER: f64 = 3.0;
/// Minimum estimate of the edge probability on the percolated-sequence model.
pub const SEPARATION_MIN_B: f64 = 0.9;

/// `points` evenly spaced values from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    check_probability(min)?;
    check_probability(max)?;
    if points == 0 || min > max || (points == 1 && min != max) {
        return Err(invalid(format!("cannot build {points} grid points on [{min}, {max}]")));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    // Rounded to 12 decimals so that e.g. 0.2 + 0.02 * 5 prints as 0.3.
    let at = |i: usize| ((min + (max - min) * i as f64 / (points - 1) as f64) * 1e12).round() / 1e12;
    Ok((0..points).map(at).collect())
}

fn check_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.is_empty() {
        return Err(invalid("empty p grid"));
    }
    for &p in p_grid {
        check_probability(p)?;
    }
    if p_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid("p grid must be sorted ascending"));
    }
    Ok(())
}

fn check_replicas(replicas: usize) -> Result<()> {
    if replicas == 0 {
        return Err(invalid("replicas must be at least 1"));
    }
    Ok(())
}

fn check_level(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(invalid(format!("{name} must lie in (0, 1), got {x}")));
    }
    Ok(())
}

fn sample_graph(d: &DegreeSequence, steps: Option<u64>, seed: u64, replica: u64) -> Result<LabeledGraph> {
    let steps = steps.unwrap_or_else(|| default_steps((d.sigma() / 2) as usize));
    sample_uniform(d, steps, &mut stream_rng(seed, replica, Stream::Graph))
}

fn require_graphical(d: &DegreeSequence) -> Result<()> {
    if d.is_graphical() {
        Ok(())
    } else {
        Err(Error::NotGraphical)
    }
}

/// Largest-component size at every grid level for each replica, with a fresh
/// graph per replica and a coupled percolation sweep on it.
fn coupled_replicas(
    d: &DegreeSequence,
    p_grid: &[f64],
    replicas: usize,
    seed: u64,
    steps: Option<u64>,
) -> Result<Vec<Vec<u32>>> {
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let g = sample_graph(d, steps, seed, r)?;
            coupled_l1_sweep(&g, p_grid, &mut stream_rng(seed, r, Stream::Percolation))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub p_grid: Vec<f64>,
    pub replicas: usize,
    pub rho: f64,
    pub seed: u64,
    /// Switch-chain steps per graph; `None` means [`default_steps`].
    pub steps: Option<u64>,
    /// Cutoff used for the reported theoretical threshold.
    pub c2: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridPoint {
    pub p: f64,
    pub mean: f64,
    pub q10: f64,
    pub q50: f64,
    pub q90: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub config: SweepConfig,
    pub n: usize,
    pub p_theory: f64,
    pub points: Vec<GridPoint>,
    /// Smallest `p` at which the median giant fraction exceeds `rho`,
    /// interpolated inside the final bisection bracket.
    pub p_hat: Option<f64>,
    /// Grid brackets `[p_lo, p_hi]` visited by the bisection.
    pub brackets: Vec<[f64; 2]>,
    /// Replica/level pairs where the largest component shrank as `p` grew.
    pub monotone_violations: usize,
    /// Largest component size per replica and grid level.
    pub replica_l1: Vec<Vec<u32>>,
}

impl ThresholdReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,mean,q10,q50,q90\n");
        for pt in &self.points {
            let _ = writeln!(out, "{},{},{},{},{}", pt.p, pt.mean, pt.q10, pt.q50, pt.q90);
        }
        out
    }

    pub fn medians(&self) -> Vec<f64> {
        self.points.iter().map(|pt| pt.q50).collect()
    }
}

/// Count of consecutive grid levels where a replica's value decreases.
pub fn monotone_violations(curves: &[Vec<u32>]) -> usize {
    curves.iter().map(|c| c.windows(2).filter(|w| w[1] < w[0]).count()).sum()
}

/// Bisection over grid indices for the first level whose value exceeds
/// `rho`, assuming `values` is non-decreasing. Returns the interpolated
/// crossing and the sequence of brackets, or `None` when the crossing lies
/// outside the grid.
pub fn bisect_threshold(p_grid: &[f64], values: &[f64], rho: f64) -> (Option<f64>, Vec<[f64; 2]>) {
    let k = p_grid.len();
    if k < 2 || values[0] > rho || values[k - 1] <= rho {
        return (None, Vec::new());
    }
    let (mut lo, mut hi) = (0, k - 1);
    let mut brackets = vec![[p_grid[lo], p_grid[hi]]];
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if values[mid] > rho {
            hi = mid;
        } else {
            lo = mid;
        }
        brackets.push([p_grid[lo], p_grid[hi]]);
    }
    let (v0, v1) = (values[lo], values[hi]);
    let frac = (rho - v0) / (v1 - v0);
    (Some(p_grid[lo] + frac * (p_grid[hi] - p_grid[lo])), brackets)
}

pub fn sweep(d: &DegreeSequence, cfg: &SweepConfig) -> Result<ThresholdReport> {
    check_grid(&cfg.p_grid)?;
    check_replicas(cfg.replicas)?;
    check_level("rho", cfg.rho)?;
    require_graphical(d)?;
    let n = d.n();
    let curves = coupled_replicas(d, &cfg.p_grid, cfg.replicas, cfg.seed, cfg.steps)?;
    let points = cfg
        .p_grid
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut f: Vec<f64> = curves.iter().map(|c| f64::from(c[i]) / n as f64).collect();
            f.sort_by(f64::total_cmp);
            GridPoint {
                p,
                mean: mean(&f),
                q10: quantile(&f, 0.1),
                q50: quantile(&f, 0.5),
                q90: quantile(&f, 0.9),
                min: f[0],
                max: f[f.len() - 1],
            }
        })
        .collect::<Vec<_>>();
    let medians: Vec<f64> = points.iter().map(|pt| pt.q50).collect();
    let (p_hat, brackets) = bisect_threshold(&cfg.p_grid, &medians, cfg.rho);
    Ok(ThresholdReport {
        config: cfg.clone(),
        n,
        p_theory: d.p_crit(cfg.c2)?,
        points,
        p_hat,
        brackets,
        monotone_violations: monotone_violations(&curves),
        replica_l1: curves,
    })
}

fn mismatch(expected: &str, found: &Regime) -> Error {
    Error::ClassificationMismatch { expected: expected.into(), found: found.name().into() }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThinTailConfig {
    pub classify: ClassifyParams,
    /// Giant level the supercritical probe must exceed.
    pub rho: f64,
    /// Level the subcritical probe must stay below.
    pub level: f64,
    pub replicas: usize,
    pub seed: u64,
    pub steps: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeResult {
    pub p: f64,
    pub fractions: Vec<f64>,
    pub max_fraction: f64,
    /// Replicas whose largest component exceeds the giant level.
    pub above_rho: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThinTailVerdict {
    pub config: ThinTailConfig,
    pub p_crit: f64,
    pub supercritical_claim: bool,
    pub subcritical: ProbeResult,
    /// Absent when `(1 + eps) p_crit > 1`.
    pub supercritical: Option<ProbeResult>,
    pub subcritical_pass: bool,
    pub supercritical_pass: Option<bool>,
    pub required_share: f64,
    pub pass: bool,
}

fn probe(p: f64, curves: &[Vec<u32>], idx: usize, n: usize, rho: f64) -> ProbeResult {
    let fractions: Vec<f64> = curves.iter().map(|c| f64::from(c[idx]) / n as f64).collect();
    ProbeResult {
        p,
        max_fraction: fractions.iter().copied().fold(0.0, f64::max),
        above_rho: fractions.iter().filter(|&&f| f > rho).count(),
        fractions,
    }
}

/// Probes `(1 - eps) p_crit` and `(1 + eps) p_crit`. The subcritical probe
/// passes when no replica reaches `level`; the supercritical probe passes when
/// at least [`SUPERCRITICAL_PASS_SHARE`] of replicas exceed `rho`. The
/// supercritical probe only gates the verdict when the mid-range condition
/// supports a giant component.
pub fn validate_thin_tail(d: &DegreeSequence, cfg: &ThinTailConfig) -> Result<ThinTailVerdict> {
    check_replicas(cfg.replicas)?;
    check_level("rho", cfg.rho)?;
    check_level("level", cfg.level)?;
    require_graphical(d)?;
    let class = d.classify(&cfg.classify)?;
    let (p_crit, claim) = match class.regime {
        Regime::ThinTail { p_crit, supercritical_claim } => (p_crit, supercritical_claim),
        ref other => return Err(mismatch("thin_tail", other)),
    };
    let eps = cfg.classify.eps;
    let p_sub = (1.0 - eps) * p_crit;
    let p_sup = (1.0 + eps) * p_crit;
    let grid = if p_sup <= 1.0 { vec![p_sub, p_sup] } else { vec![p_sub] };
    let curves = coupled_replicas(d, &grid, cfg.replicas, cfg.seed, cfg.steps)?;
    let n = d.n();
    let subcritical = probe(p_sub, &curves, 0, n, cfg.rho);
    let supercritical = (grid.len() == 2).then(|| probe(p_sup, &curves, 1, n, cfg.rho));
    let subcritical_pass = subcritical.max_fraction < cfg.level;
    let supercritical_pass =
        supercritical.as_ref().map(|s| s.above_rho as f64 >= SUPERCRITICAL_PASS_SHARE * cfg.replicas as f64);
    let pass = subcritical_pass && (!claim || supercritical_pass.unwrap_or(true));
    Ok(ThinTailVerdict {
        config: cfg.clone(),
        p_crit,
        supercritical_claim: claim,
        subcritical,
        supercritical,
        subcritical_pass,
        supercritical_pass,
        required_share: SUPERCRITICAL_PASS_SHARE,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RobustConfig {
    pub classify: ClassifyParams,
    pub p_list: Vec<f64>,
    pub rho: f64,
    /// Tolerated failure probability.
    pub delta: f64,
    pub replicas: usize,
    pub seed: u64,
    pub steps: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RobustPoint {
    pub p: f64,
    pub successes: usize,
    pub trials: usize,
    pub fraction: f64,
    pub se: f64,
    pub failure_rate: f64,
    /// Only levels `p >= 0.1` gate the verdict.
    pub gated: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RobustVerdict {
    pub config: RobustConfig,
    pub points: Vec<RobustPoint>,
    pub pass: bool,
}

/// Lowest level at which the robust verdict is gated.
pub const ROBUST_MIN_GATED_P: f64 = 0.1;

/// At each level, the share of replicas whose largest component exceeds
/// `rho n`; passes when that share is at least `1 - delta` wherever
/// `p >= 0.1`.
pub fn validate_robust(d: &DegreeSequence, cfg: &RobustConfig) -> Result<RobustVerdict> {
    check_grid(&cfg.p_list)?;
    check_replicas(cfg.replicas)?;
    check_level("rho", cfg.rho)?;
    check_level("delta", cfg.delta)?;
    require_graphical(d)?;
    let class = d.classify(&cfg.classify)?;
    if class.regime != Regime::Robust {
        return Err(mismatch("robust", &class.regime));
    }
    let curves = coupled_replicas(d, &cfg.p_list, cfg.replicas, cfg.seed, cfg.steps)?;
    let n = d.n() as f64;
    let points: Vec<RobustPoint> = cfg
        .p_list
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let successes = curves.iter().filter(|c| f64::from(c[i]) / n > cfg.rho).count();
            let (fraction, se) = proportion(successes, cfg.replicas);
            let gated = p >= ROBUST_MIN_GATED_P;
            RobustPoint {
                p,
                successes,
                trials: cfg.replicas,
                fraction,
                se,
                failure_rate: 1.0 - fraction,
                gated,
                pass: fraction >= 1.0 - cfg.delta,
            }
        })
        .collect();
    let pass = points.iter().filter(|pt| pt.gated).all(|pt| pt.pass);
    Ok(RobustVerdict { config: cfg.clone(), points, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationConfig {
    pub n: usize,
    pub p: f64,
    pub replicas: usize,
    pub seed: u64,
    pub steps: Option<u64>,
    /// Attempts at an even, graphical percolated sequence per replica.
    pub max_retries: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub successes: usize,
    pub trials: usize,
    pub phat: f64,
    pub se: f64,
    pub ci95: [f64; 2],
}

impl Estimate {
    fn new(successes: usize, trials: usize) -> Self {
        let (phat, se) = proportion(successes, trials);
        Self { successes, trials, phat, se, ci95: [phat - 1.96 * se, phat + 1.96 * se] }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    pub config: SeparationConfig,
    /// Hub-hub edge retained after percolating a uniform graph on `D`.
    pub percolated_graph: Estimate,
    /// Hub-hub edge present in a uniform graph on the percolated sequence.
    pub percolated_sequence: Estimate,
    /// Replicas with no even graphical percolated sequence within the retry cap.
    pub infeasible: usize,
    /// Parity or graphicality rejections across all replicas.
    pub resamples: usize,
    pub bound_a: f64,
    pub pass_a: bool,
    pub min_b: f64,
    pub pass_b: bool,
    pub pass: bool,
}

/// Two hubs of degree `n - 1` followed by `n - 2` vertices of degree 3, with
/// the hubs stored last (ascending order).
pub fn separation_degrees(n: usize) -> Vec<u32> {
    let mut d = vec![3u32; n - 2];
    d.extend([n as u32 - 1; 2]);
    d
}

/// Retains each semi-edge count independently per vertex, resampling the
/// whole vector until the sum is even and the vector graphical.
pub fn percolate_degrees<R: Rng + ?Sized>(
    degrees: &[u32],
    p: f64,
    max_retries: usize,
    rng: &mut R,
) -> Result<(Option<Vec<u32>>, usize)> {
    let dists: Vec<Binomial> = degrees
        .iter()
        .map(|&k| Binomial::new(u64::from(k), p).map_err(|e| invalid(e.to_string())))
        .collect::<Result<_>>()?;
    for attempt in 0..max_retries {
        let dp: Vec<u32> = dists.iter().map(|b| b.sample(rng) as u32).collect();
        let sum: u64 = dp.iter().map(|&k| u64::from(k)).sum();
        if sum.is_multiple_of(2) && (sum == 0 || crate::degseq::is_graphical_degrees(&dp)?) {
            return Ok((Some(dp), attempt));
        }
    }
    Ok((None, max_retries))
}

pub fn model_separation(cfg: &SeparationConfig) -> Result<SeparationReport> {
    check_probability(cfg.p)?;
    check_replicas(cfg.replicas)?;
    if cfg.n < 100 || cfg.n % 2 == 1 {
        return Err(invalid(format!("model separation needs an even n >= 100, got {}", cfg.n)));
    }
    let degrees = separation_degrees(cfg.n);
    let (h1, h2) = (cfg.n as u32 - 2, cfg.n as u32 - 1);
    let steps_for = |m: usize| cfg.steps.unwrap_or_else(|| default_steps(m));
    let per_replica: Vec<(bool, Option<bool>, usize)> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| {
            let m = degrees.iter().map(|&k| k as usize).sum::<usize>() / 2;
            let g = sample_uniform_degrees(&degrees, steps_for(m), &mut stream_rng(cfg.seed, r, Stream::Graph))?;
            let s = percolate(&g, cfg.p, &mut stream_rng(cfg.seed, r, Stream::Percolation))?;
            let a = s.surviving_edges(&g).binary_search(&(h1, h2)).is_ok();
            let (dp, resamples) =
                percolate_degrees(&degrees, cfg.p, cfg.max_retries, &mut stream_rng(cfg.seed, r, Stream::Degrees))?;
            let b = match dp {
                Some(dp) => {
                    let m = dp.iter().map(|&k| k as usize).sum::<usize>() / 2;
                    let gp =
                        sample_uniform_degrees(&dp, steps_for(m), &mut stream_rng(cfg.seed, r, Stream::Structure))?;
                    Some(gp.has_edge(h1, h2))
                }
                None => None,
            };
            Ok((a, b, resamples))
        })
        .collect::<Result<_>>()?;
    let a_hits = per_replica.iter().filter(|r| r.0).count();
    let feasible: Vec<bool> = per_replica.iter().filter_map(|r| r.1).collect();
    let infeasible = cfg.replicas - feasible.len();
    let percolated_graph = Estimate::new(a_hits, cfg.replicas);
    let percolated_sequence = Estimate::new(feasible.iter().filter(|&&b| b).count(), feasible.len());
    let pass_a = percolated_graph.phat <= cfg.p + SEPARATION_SE_MULTIPLIER * percolated_graph.se;
    let pass_b = !feasible.is_empty() && percolated_sequence.phat >= SEPARATION_MIN_B;
    Ok(SeparationReport {
        config: cfg.clone(),
        percolated_graph,
        percolated_sequence,
        infeasible,
        resamples: per_replica.iter().map(|r| r.2).sum(),
        bound_a: cfg.p,
        pass_a,
        min_b: SEPARATION_MIN_B,
        pass_b,
        pass: pass_a && pass_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StartPolicy {
    Empty,
    /// The `k` vertices of largest degree.
    TopDegree {
        k: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceConfig {
    pub p: f64,
    pub start: StartPolicy,
    pub replicas: usize,
    pub seed: u64,
    pub steps: Option<u64>,
    /// A replica "has a linear component" when `L1 / n` exceeds this.
    pub giant_level: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftSign {
    Negative,
    Critical,
    Positive,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub config: TraceConfig,
    pub n: usize,
    /// `sum d(u) (p (d(u) - 1) - 1)` over vertices outside `N[S]`, averaged
    /// over replicas.
    pub drift: f64,
    pub drift_sign: DriftSign,
    /// Mean of `X_t` over the replicas still running at step `t`.
    pub mean_x: Vec<f64>,
    pub l1_fractions: Vec<f64>,
    pub max_l1_fraction: f64,
    pub linear_share: f64,
}

/// `sum d(u) (p (d(u) - 1) - 1)` over `u` outside the closed neighbourhood of
/// `s`.
pub fn drift_outside(g: &LabeledGraph, s: &[u32], p: f64) -> f64 {
    let mut closed = vec![false; g.n()];
    for &v in s {
        closed[v as usize] = true;
        for w in g.neighbors(v) {
            closed[w as usize] = true;
        }
    }
    (0..g.n() as u32)
        .filter(|&u| !closed[u as usize])
        .map(|u| {
            let k = f64::from(g.degree(u));
            k * (p * (k - 1.0) - 1.0)
        })
        .sum()
}

fn start_set(d: &DegreeSequence, policy: StartPolicy) -> Vec<u32> {
    match policy {
        StartPolicy::Empty => Vec::new(),
        StartPolicy::TopDegree { k } => {
            let n = d.n();
            (n.saturating_sub(k)..n).map(|v| v as u32).collect()
        }
    }
}

pub fn trace_ensemble(d: &DegreeSequence, cfg: &TraceConfig) -> Result<TraceReport> {
    check_probability(cfg.p)?;
    check_replicas(cfg.replicas)?;
    check_level("giant_level", cfg.giant_level)?;
    require_graphical(d)?;
    let s0 = start_set(d, cfg.start);
    let n = d.n();
    let runs: Vec<(f64, Vec<u64>, u32)> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| {
            let g = sample_graph(d, cfg.steps, cfg.seed, r)?;
            let ecfg = ExploreConfig { s0: s0.clone(), ..ExploreConfig::new(cfg.p) };
            let ex = explore(
                &g,
                &ecfg,
                &mut stream_rng(cfg.seed, r, Stream::Structure),
                &mut stream_rng(cfg.seed, r, Stream::Percolation),
            )?;
            Ok((drift_outside(&g, &s0, cfg.p), ex.trace.x_series().collect(), ex.sample.l1))
        })
        .collect::<Result<_>>()?;
    let drift = runs.iter().map(|r| r.0).sum::<f64>() / runs.len() as f64;
    let drift_sign = if drift.abs() <= 1e-9 * n as f64 {
        DriftSign::Critical
    } else if drift < 0.0 {
        DriftSign::Negative
    } else {
        DriftSign::Positive
    };
    let len = runs.iter().map(|r| r.1.len()).max().unwrap_or(0);
    let mean_x = (0..len)
        .map(|t| {
            let xs: Vec<f64> = runs.iter().filter_map(|r| r.1.get(t)).map(|&x| x as f64).collect();
            mean(&xs)
        })
        .collect();
    let l1_fractions: Vec<f64> = runs.iter().map(|r| f64::from(r.2) / n as f64).collect();
    Ok(TraceReport {
        config: cfg.clone(),
        n,
        drift,
        drift_sign,
        mean_x,
        max_l1_fraction: l1_fractions.iter().copied().fold(0.0, f64::max),
        linear_share: l1_fractions.iter().filter(|&&f| f > cfg.giant_level).count() as f64 / l1_fractions.len() as f64,
        l1_fractions,
    })
}

/// Smallest `mu * n` at which the deletion bound is exercised. Below it the
/// additive constants of the large-hub case outweigh the `mu / 50` margin.
pub const DELETION_MIN_MASS: f64 = 800.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeFamily {
    Regular,
    Uniform,
    HeavyTail,
    Hubs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalRule {
    /// Largest degrees first.
    Top,
    /// Uniformly random vertices.
    Random,
    /// Smallest degrees among the vertices counted by `R^D_p`.
    ThinTail,
    /// A vertex and then its neighbours.
    Neighbourhood,
}

/// One instance of the deletion bound: a graph with `R^D_p >= mu n`, a set of
/// total degree at most `nu n` with `400 nu = mu`, and the reduced profile.
#[derive(Debug, Clone, Serialize)]
pub struct DeletionCase {
    pub family: DegreeFamily,
    pub rule: RemovalRule,
    pub n: usize,
    pub p: f64,
    pub r_p: f64,
    pub mu: f64,
    pub nu: f64,
    pub removed: usize,
    pub removed_degree: u64,
    pub n_after: usize,
    pub r_p_after: f64,
    pub size_holds: bool,
    pub mass_holds: bool,
}

impl DeletionCase {
    pub fn holds(&self) -> bool {
        self.size_holds && self.mass_holds
    }
}

fn draw_degrees<R: Rng + ?Sized>(family: DegreeFamily, n: usize, rng: &mut R) -> Vec<u32> {
    let cap = (n / 5) as u32;
    let mut d: Vec<u32> = match family {
        DegreeFamily::Regular => vec![rng.random_range(3..=8); n],
        DegreeFamily::Uniform => {
            let top = rng.random_range(3..=12);
            (0..n).map(|_| rng.random_range(1..=top)).collect()
        }
        DegreeFamily::HeavyTail => {
            let gamma: f64 = rng.random_range(2.1..3.5);
            (0..n)
                .map(|_| {
                    let u = crate::rng::unit_open_closed(rng);
                    (u.powf(-1.0 / (gamma - 1.0)).floor() as u32).clamp(1, cap)
                })
                .collect()
        }
        DegreeFamily::Hubs => {
            let hubs = rng.random_range(1..=3);
            let mut d: Vec<u32> = (0..n - hubs).map(|_| rng.random_range(1..=4)).collect();
            d.extend((0..hubs).map(|_| rng.random_range(n as u32 / 20..=n as u32 / 4)));
            d
        }
    };
    if d.iter().map(|&k| u64::from(k)).sum::<u64>() % 2 == 1 {
        d[0] += 1;
    }
    d.sort_unstable();
    d
}

fn removal_set<R: Rng + ?Sized>(
    g: &LabeledGraph,
    rule: RemovalRule,
    tail_from: usize,
    budget: u64,
    rng: &mut R,
) -> Vec<u32> {
    let n = g.n() as u32;
    let candidates: Vec<u32> = match rule {
        RemovalRule::Top => {
            let mut v: Vec<u32> = (0..n).collect();
            v.sort_by_key(|&u| std::cmp::Reverse(g.degree(u)));
            v
        }
        RemovalRule::Random => {
            let mut v: Vec<u32> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(v.as_mut_slice(), rng);
            v
        }
        RemovalRule::ThinTail => (tail_from as u32..n).collect(),
        RemovalRule::Neighbourhood => {
            let centre = rng.random_range(tail_from as u32..n);
            std::iter::once(centre).chain(g.neighbors(centre)).collect()
        }
    };
    let mut used = 0u64;
    let mut s = Vec::new();
    for v in candidates {
        let k = u64::from(g.degree(v));
        if used + k <= budget {
            used += k;
            s.push(v);
        }
    }
    s
}

/// Draws one instance, or `None` when the drawn sequence is not graphical or
/// its `R^D_p` is below [`DELETION_MIN_MASS`].
pub fn deletion_case<R: Rng + ?Sized>(rng: &mut R) -> Result<Option<DeletionCase>> {
    const FAMILIES: [DegreeFamily; 4] =
        [DegreeFamily::Regular, DegreeFamily::Uniform, DegreeFamily::HeavyTail, DegreeFamily::Hubs];
    const RULES: [RemovalRule; 4] =
        [RemovalRule::Top, RemovalRule::Random, RemovalRule::ThinTail, RemovalRule::Neighbourhood];
    let family = FAMILIES[rng.random_range(0..FAMILIES.len())];
    let rule = RULES[rng.random_range(0..RULES.len())];
    let n = rng.random_range(1000..=4000);
    let p = rng.random_range(0.15..=1.0);
    let degrees = draw_degrees(family, n, rng);
    if !crate::degseq::is_graphical_degrees(&degrees)? {
        return Ok(None);
    }
    let d = DegreeSequence::new(degrees.iter().copied())?;
    let profile = d.critical_profile(p)?;
    let mu = (profile.r_p / n as f64).min(1.0);
    if mu * (n as f64) < DELETION_MIN_MASS {
        return Ok(None);
    }
    let nu = mu / 400.0;
    let mut g = havel_hakimi_degrees(&degrees)?;
    g.run_switch_chain(2 * g.m() as u64, rng);
    let budget = (nu * n as f64).floor() as u64;
    // Vertex i of the Havel-Hakimi graph has the i-th smallest degree.
    let s = removal_set(&g, rule, profile.j_p - 1, budget, rng);
    let removed_degree = s.iter().map(|&v| u64::from(g.degree(v))).sum();
    let (reduced, after) = delete_and_reprofile(&d, &g, &s, p)?;
    let n_after = reduced.n();
    Ok(Some(DeletionCase {
        family,
        rule,
        n,
        p,
        r_p: profile.r_p,
        mu,
        nu,
        removed: s.len(),
        removed_degree,
        n_after,
        r_p_after: after.r_p,
        size_holds: n_after as f64 >= (1.0 - 2.0 * nu) * n as f64,
        mass_holds: after.r_p >= mu / 50.0 * n_after as f64,
    }))
}

/// `count` accepted instances; attempt `a` draws from stream
/// `(seed, a, Degrees)`.
pub fn deletion_trials(count: usize, seed: u64) -> Result<Vec<DeletionCase>> {
    let mut out = Vec::with_capacity(count);
    let mut attempt = 0u64;
    while out.len() < count {
        if let Some(case) = deletion_case(&mut stream_rng(seed, attempt, Stream::Degrees))? {
            out.push(case);
        }
        attempt += 1;
    }
    Ok(out)
}
