//! Sequential exploration of the components of a percolated graph.
//!
//! The process keeps an explored set `S`, the graph `H = G[S]` (fully
//! exposed), and the set `F` of exposed boundary edges that failed to
//! percolate. A vertex's free degree is its number of unexposed semi-edges
//! outside `H` and `F`; `X` sums free degrees over `S` and `M` over the rest.
//!
//! Each step takes the smallest vertex `v` of `S` with positive free degree
//! and the unexposed edge `vw` whose label comes first in `v`'s permutation.
//! If `vw` survives, `w` joins `S` and its remaining edges into `S` (back
//! edges) are exposed and percolated; otherwise `vw` joins `F`. When `X = 0`
//! a new start vertex is drawn with probability proportional to free degree.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::degseq::{check_probability, DegreeSequence};
use crate::error::{invalid, Result};
use crate::graph::LabeledGraph;
use crate::percolation::{Partition, PercolationSample};
use crate::rng::unit_open_closed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    /// Exposure of `G[S_0]` at `t = 0`.
    Start,
    /// A new component started from a vertex outside `S`.
    Seed,
    Success,
    Failure,
}

impl Event {
    pub fn as_str(&self) -> &'static str {
        match self {
            Event::Start => "start",
            Event::Seed => "seed",
            Event::Success => "success",
            Event::Failure => "failure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub t: u64,
    pub x: u64,
    pub m: u64,
    pub s_size: u32,
    pub event: Event,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExplorationTrace {
    pub rows: Vec<TraceRow>,
    /// Vertices added per episode in discovery order, followed by the
    /// never-explored vertices as singletons.
    pub component_sizes: Vec<u32>,
    pub steps: u64,
}

impl ExplorationTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,X_t,M_t,S_size,event\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.t, r.x, r.m, r.s_size, r.event.as_str());
        }
        out
    }

    pub fn x_series(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().map(|r| r.x)
    }
}

/// What a completed step looked like, as needed by [`x_increment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    pub survived: bool,
    /// Free degree of `w` before the step.
    pub free_w: u32,
    /// Backward degree of `w`.
    pub back_w: u32,
    pub x_was_zero: bool,
}

/// Change of `X` over one step.
pub fn x_increment(r: StepRecord) -> i64 {
    if r.x_was_zero {
        return i64::from(r.free_w);
    }
    if r.survived {
        i64::from(r.free_w) - 2 - 2 * i64::from(r.back_w)
    } else {
        -1
    }
}

/// Per-vertex semi-edge permutations.
#[derive(Debug, Clone, Default)]
pub enum Sigma {
    /// Drawn on demand from the structure stream.
    #[default]
    Lazy,
    /// `sigma[v][l - 1]` is the rank of label `l` at `v`; each row must be a
    /// permutation of `1..=d(v)`.
    Explicit(Vec<Vec<u32>>),
}

#[derive(Debug, Clone)]
pub struct ExploreConfig {
    pub p: f64,
    pub s0: Vec<u32>,
    pub sigma: Sigma,
    /// Recompute all bookkeeping from scratch after every step.
    pub audit: bool,
}

impl ExploreConfig {
    pub fn new(p: f64) -> Self {
        Self { p, s0: Vec::new(), sigma: Sigma::Lazy, audit: false }
    }
}

#[derive(Debug, Clone)]
pub struct Exploration {
    pub trace: ExplorationTrace,
    /// Percolation sample assembled from every verdict the process issued.
    pub sample: PercolationSample,
    /// Episode index per vertex; the first episode is `G[S_0]`'s when
    /// `S_0` is non-empty.
    pub episode_of: Vec<u32>,
    /// Start vertices drawn when `X` hit zero, in order.
    pub seeds: Vec<u32>,
}

impl Exploration {
    /// The partition into episodes. With `S_0 = {}` this is the component
    /// partition of the percolated graph; otherwise the first part is a union
    /// of components.
    pub fn partition(&self) -> Partition {
        Partition::from_part_ids(&self.episode_of)
    }
}

const UNEXPOSED: u8 = 0;
const KEPT: u8 = 1;
/// Exposed inside `S` and removed by percolation.
const DROPPED: u8 = 2;
/// Failed while crossing the boundary; in `F` as long as one end is outside.
const FAILED: u8 = 3;

/// Prefix sums over vertex weights with weighted sampling.
struct Fenwick {
    tree: Vec<u64>,
}

impl Fenwick {
    fn new(weights: &[u32]) -> Self {
        let n = weights.len();
        let mut tree = vec![0u64; n + 1];
        for (i, &w) in weights.iter().enumerate() {
            tree[i + 1] += u64::from(w);
            let j = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if j <= n {
                tree[j] += tree[i + 1];
            }
        }
        Self { tree }
    }

    fn sub(&mut self, i: usize, delta: u64) {
        let mut k = i + 1;
        while k < self.tree.len() {
            self.tree[k] -= delta;
            k += k & k.wrapping_neg();
        }
    }

    /// Smallest index whose inclusive prefix sum exceeds `r`.
    fn find(&self, mut r: u64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= r {
                pos = next;
                r -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

struct Explorer<'a, RS: ?Sized, RP: ?Sized> {
    g: &'a LabeledGraph,
    p: f64,
    structure: &'a mut RS,
    perc: &'a mut RP,
    explicit: Option<Vec<Vec<u32>>>,
    orders: Vec<Option<Vec<u32>>>,
    cursor: Vec<u32>,
    status: Vec<u8>,
    free: Vec<u32>,
    in_s: Vec<bool>,
    active: BTreeSet<u32>,
    outside: Fenwick,
    x: u64,
    m: u64,
    h_edges: u64,
    f_edges: u64,
    s_size: u32,
    episode_of: Vec<u32>,
    episode: u32,
    next_episode: u32,
    seeds: Vec<u32>,
}

impl<RS: Rng + ?Sized, RP: Rng + ?Sized> Explorer<'_, RS, RP> {
    fn verdict(&mut self) -> bool {
        unit_open_closed(self.perc) <= self.p
    }

    fn set_active(&mut self, v: u32) {
        if self.free[v as usize] > 0 {
            self.active.insert(v);
        } else {
            self.active.remove(&v);
        }
    }

    /// Next unexposed edge at `v` in its permutation order.
    fn next_edge(&mut self, v: u32) -> u32 {
        let vi = v as usize;
        if self.orders[vi].is_none() {
            let order = match &self.explicit {
                Some(orders) => orders[vi].clone(),
                None => {
                    let mut es: Vec<u32> =
                        self.g.incident(v).iter().copied().filter(|&e| self.status[e as usize] == UNEXPOSED).collect();
                    es.shuffle(self.structure);
                    es
                }
            };
            self.orders[vi] = Some(order);
        }
        let order = self.orders[vi].as_ref().expect("order built above");
        let mut c = self.cursor[vi] as usize;
        while self.status[order[c] as usize] != UNEXPOSED {
            c += 1;
        }
        self.cursor[vi] = c as u32;
        order[c]
    }

    /// Moves `w` from outside into `S`, returning its free degree on arrival.
    fn admit(&mut self, w: u32) -> u32 {
        let wi = w as usize;
        let f = self.free[wi];
        self.outside.sub(wi, u64::from(f));
        self.m -= u64::from(f);
        self.in_s[wi] = true;
        self.s_size += 1;
        self.episode_of[wi] = self.episode;
        f
    }

    fn expose_start(&mut self, s0: &[u32]) {
        for &s in s0 {
            self.admit(s);
        }
        for e in self.g.sorted_edge_ids() {
            let (a, b) = self.g.endpoints(e);
            if self.in_s[a as usize] && self.in_s[b as usize] {
                self.status[e as usize] = if self.verdict() { KEPT } else { DROPPED };
                self.free[a as usize] -= 1;
                self.free[b as usize] -= 1;
                self.h_edges += 1;
            }
        }
        for &s in s0 {
            self.x += u64::from(self.free[s as usize]);
            self.set_active(s);
        }
    }

    /// One step; `None` once every vertex's free degree is spent.
    fn step(&mut self) -> Option<(Event, StepRecord)> {
        let x_before = self.x;
        if let Some(&v) = self.active.first() {
            let e = self.next_edge(v);
            let w = self.g.other(e, v);
            let (vi, wi) = (v as usize, w as usize);
            let free_w = self.free[wi];
            let survived = self.verdict();
            self.free[vi] -= 1;
            self.free[wi] -= 1;
            if !survived {
                self.status[e as usize] = FAILED;
                self.f_edges += 1;
                self.outside.sub(wi, 1);
                self.m -= 1;
                self.x -= 1;
                self.set_active(v);
                let rec = StepRecord { survived, free_w, back_w: 0, x_was_zero: false };
                return Some((Event::Failure, rec));
            }
            self.status[e as usize] = KEPT;
            self.h_edges += 1;
            self.outside.sub(wi, 1);
            self.m -= 1;
            self.x -= 1;
            self.set_active(v);
            let mut back = 0u32;
            for &f in self.g.incident(w) {
                let s = self.g.other(f, w);
                if f == e || !self.in_s[s as usize] {
                    continue;
                }
                match self.status[f as usize] {
                    UNEXPOSED => {
                        self.status[f as usize] = if self.verdict() { KEPT } else { DROPPED };
                        self.free[wi] -= 1;
                        self.free[s as usize] -= 1;
                        self.outside.sub(wi, 1);
                        self.m -= 1;
                        self.x -= 1;
                        self.set_active(s);
                        self.h_edges += 1;
                        back += 1;
                    }
                    FAILED => {
                        self.f_edges -= 1;
                        self.h_edges += 1;
                    }
                    other => unreachable!("edge {f} into S already exposed with status {other}"),
                }
            }
            let arrived = self.admit(w);
            self.x += u64::from(arrived);
            self.set_active(w);
            let rec = StepRecord { survived, free_w, back_w: back, x_was_zero: false };
            debug_assert_eq!(self.x as i64 - x_before as i64, x_increment(rec));
            return Some((Event::Success, rec));
        }
        debug_assert_eq!(self.x, 0);
        if self.m == 0 {
            return None;
        }
        let r = self.structure.random_range(0..self.m);
        let w = self.outside.find(r) as u32;
        self.episode = self.next_episode;
        self.next_episode += 1;
        self.seeds.push(w);
        for &f in self.g.incident(w) {
            if self.in_s[self.g.other(f, w) as usize] {
                debug_assert_eq!(self.status[f as usize], FAILED);
                self.f_edges -= 1;
                self.h_edges += 1;
            }
        }
        let free_w = self.admit(w);
        self.x += u64::from(free_w);
        self.set_active(w);
        Some((Event::Seed, StepRecord { survived: true, free_w, back_w: 0, x_was_zero: true }))
    }

    fn audit(&self) {
        let g = self.g;
        let n = g.n();
        let mut h_deg = vec![0u32; n];
        let mut f_deg = vec![0u32; n];
        let (mut h, mut f, mut boundary_unexposed) = (0u64, 0u64, 0u64);
        for e in 0..g.m() as u32 {
            let (a, b) = g.endpoints(e);
            let (ia, ib) = (self.in_s[a as usize], self.in_s[b as usize]);
            let st = self.status[e as usize];
            if ia && ib {
                assert_ne!(st, UNEXPOSED, "edge inside S left unexposed");
                h += 1;
                h_deg[a as usize] += 1;
                h_deg[b as usize] += 1;
            } else if ia != ib {
                if st == FAILED {
                    f += 1;
                    f_deg[a as usize] += 1;
                    f_deg[b as usize] += 1;
                } else {
                    assert_eq!(st, UNEXPOSED, "boundary edge exposed but not failed");
                    boundary_unexposed += 1;
                }
            } else {
                assert_eq!(st, UNEXPOSED, "edge outside S already exposed");
            }
        }
        let (mut x, mut m) = (0u64, 0u64);
        for v in 0..n {
            let expect = g.degree(v as u32) - h_deg[v] - f_deg[v];
            assert_eq!(self.free[v], expect, "free degree of {v}");
            if self.in_s[v] {
                x += u64::from(expect);
            } else {
                m += u64::from(expect);
            }
        }
        assert_eq!((x, m), (self.x, self.m), "X/M bookkeeping");
        assert_eq!(x, boundary_unexposed, "X counts unexposed boundary edges");
        assert_eq!((h, f), (self.h_edges, self.f_edges), "H/F edge counts");
        assert_eq!(2 * g.m() as u64, m + x + 2 * h + 2 * f, "degree conservation");
    }
}

fn explicit_orders(g: &LabeledGraph, sigma: &[Vec<u32>]) -> Result<Vec<Vec<u32>>> {
    if sigma.len() != g.n() {
        return Err(invalid(format!("{} permutations given for {} vertices", sigma.len(), g.n())));
    }
    let mut orders = Vec::with_capacity(g.n());
    for (v, perm) in sigma.iter().enumerate() {
        let d = g.degree(v as u32) as usize;
        if perm.len() != d {
            return Err(invalid(format!("permutation of vertex {v} has length {} but degree is {d}", perm.len())));
        }
        let mut order = vec![u32::MAX; d];
        for (label0, &rank) in perm.iter().enumerate() {
            if rank == 0 || rank as usize > d || order[rank as usize - 1] != u32::MAX {
                return Err(invalid(format!("permutation of vertex {v} is not a permutation of 1..={d}")));
            }
            order[rank as usize - 1] = g.incident(v as u32)[label0];
        }
        orders.push(order);
    }
    Ok(orders)
}

/// Runs the exploration to completion. Structure choices (permutations and
/// start vertices) and percolation verdicts come from separate streams.
pub fn explore<RS: Rng + ?Sized, RP: Rng + ?Sized>(
    g: &LabeledGraph,
    cfg: &ExploreConfig,
    structure: &mut RS,
    perc: &mut RP,
) -> Result<Exploration> {
    check_probability(cfg.p)?;
    let n = g.n();
    let mut s0 = cfg.s0.clone();
    s0.sort_unstable();
    s0.dedup();
    if let Some(&bad) = s0.iter().find(|&&v| v as usize >= n) {
        return Err(invalid(format!("start vertex {bad} out of range for n = {n}")));
    }
    let explicit = match &cfg.sigma {
        Sigma::Lazy => None,
        Sigma::Explicit(sigma) => Some(explicit_orders(g, sigma)?),
    };
    let free = g.degree_vector();
    let mut ex = Explorer {
        g,
        p: cfg.p,
        structure,
        perc,
        explicit,
        orders: vec![None; n],
        cursor: vec![0; n],
        status: vec![UNEXPOSED; g.m()],
        outside: Fenwick::new(&free),
        m: 2 * g.m() as u64,
        free,
        in_s: vec![false; n],
        active: BTreeSet::new(),
        x: 0,
        h_edges: 0,
        f_edges: 0,
        s_size: 0,
        episode_of: vec![u32::MAX; n],
        episode: 0,
        next_episode: u32::from(!s0.is_empty()),
        seeds: Vec::new(),
    };
    ex.expose_start(&s0);
    if cfg.audit {
        ex.audit();
    }
    let mut rows = vec![TraceRow { t: 0, x: ex.x, m: ex.m, s_size: ex.s_size, event: Event::Start }];
    let mut episode_sizes: Vec<u32> = if s0.is_empty() { Vec::new() } else { vec![s0.len() as u32] };
    let mut t = 0u64;
    while let Some((event, _rec)) = ex.step() {
        t += 1;
        match event {
            Event::Seed => episode_sizes.push(1),
            Event::Success => *episode_sizes.last_mut().expect("success inside an episode") += 1,
            _ => {}
        }
        rows.push(TraceRow { t, x: ex.x, m: ex.m, s_size: ex.s_size, event });
        if cfg.audit {
            ex.audit();
        }
    }
    assert!(ex.status.iter().all(|&s| s != UNEXPOSED), "exploration ended with unexposed edges");

    let first_singleton = episode_sizes.len() as u32;
    for (id, slot) in (first_singleton..).zip(ex.episode_of.iter_mut().filter(|e| **e == u32::MAX)) {
        *slot = id;
        episode_sizes.push(1);
    }
    let by_id: Vec<bool> = ex.status.iter().map(|&s| s == KEPT).collect();
    let survived = g.sorted_edge_ids().into_iter().map(|e| by_id[e as usize]).collect();
    let sample = PercolationSample::from_survivors(g, cfg.p, survived);
    Ok(Exploration {
        trace: ExplorationTrace { rows, component_sizes: episode_sizes, steps: t },
        sample,
        episode_of: ex.episode_of,
        seeds: ex.seeds,
    })
}

/// Degree classes of a sequence and the heavy-tail conditions built on them.
#[derive(Debug, Clone, Serialize)]
pub struct VertexClasses {
    pub average_degree: f64,
    /// Degree at most three times the average.
    pub typical: Vec<usize>,
    /// Degree at least `ln(n)^2`.
    pub s1: Vec<usize>,
    /// Degree at least `n^(1/3)`.
    pub s2: Vec<usize>,
    /// Degree at least `n^(4/5)`.
    pub s3: Vec<usize>,
    /// Degree mass on `s1` is at least `eps * n`.
    pub d1: bool,
    /// Degree mass on `s3` is at least `eps * n / 10`.
    pub d3: bool,
}

pub fn vertex_classes(d: &DegreeSequence, eps: f64) -> Result<VertexClasses> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let n = d.n() as f64;
    let avg = d.average_degree();
    let at_least = |thr: f64| -> Vec<usize> {
        d.degrees().iter().enumerate().filter(|(_, &k)| f64::from(k) >= thr).map(|(i, _)| i).collect()
    };
    let mass = |idx: &[usize]| -> f64 { idx.iter().map(|&i| f64::from(d.degrees()[i])).sum() };
    let typical = d.degrees().iter().enumerate().filter(|(_, &k)| f64::from(k) <= 3.0 * avg).map(|(i, _)| i).collect();
    let s1 = at_least(n.ln().powi(2));
    let s2 = at_least(n.cbrt());
    let s3 = at_least(n.powf(0.8));
    Ok(VertexClasses {
        average_degree: avg,
        d1: mass(&s1) >= eps * n,
        d3: mass(&s3) >= eps * n / 10.0,
        typical,
        s1,
        s2,
        s3,
    })
}
