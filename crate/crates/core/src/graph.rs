//! Labelled simple graphs and the edge-switch Markov chain.
//!
//! Every vertex `v` labels its incident semi-edges `1..=d(v)`; the label is
//! the position of the edge in `v`'s incidence list. A switch rewires edges
//! in place so each semi-edge keeps its label at the vertex it stays attached
//! to.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::FxHashMap;

use crate::degseq::DegreeSequence;
use crate::error::{invalid, Error, Result};

#[inline]
fn key(u: u32, v: u32) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (u64::from(a) << 32) | u64::from(b)
}

#[derive(Debug, Clone)]
pub struct LabeledGraph {
    /// Endpoints of each edge id.
    ends: Vec<[u32; 2]>,
    /// 0-based label of the edge at `ends[e][0]` and `ends[e][1]`.
    slots: Vec<[u32; 2]>,
    /// `adj[v][l]` is the id of the edge carrying label `l + 1` at `v`.
    adj: Vec<Vec<u32>>,
    index: FxHashMap<u64, u32>,
}

/// A `{uv, xy}`-switch: delete `uv` and `xy`, add `ux` and `vy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Switch {
    pub u: u32,
    pub v: u32,
    pub x: u32,
    pub y: u32,
}

impl Switch {
    pub fn new(uv: (u32, u32), xy: (u32, u32)) -> Self {
        Self { u: uv.0, v: uv.1, x: xy.0, y: xy.1 }
    }

    /// The switch that undoes this one once it has been applied.
    pub fn inverse(&self) -> Self {
        Self { u: self.u, v: self.x, x: self.v, y: self.y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchOutcome {
    Applied,
    /// The switch would create a loop or a multi-edge, or both edges coincide.
    Rejected,
}

impl LabeledGraph {
    pub fn empty(n: usize) -> Self {
        Self { ends: Vec::new(), slots: Vec::new(), adj: vec![Vec::new(); n], index: FxHashMap::default() }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `uv`, giving it the next free label at both endpoints.
    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<u32> {
        let n = self.n();
        if u as usize >= n || v as usize >= n {
            return Err(invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
        }
        if u == v {
            return Err(invalid(format!("loop at {u}")));
        }
        let id = self.ends.len() as u32;
        if self.index.insert(key(u, v), id).is_some() {
            return Err(invalid(format!("parallel edge ({u}, {v})")));
        }
        self.ends.push([u, v]);
        self.slots.push([self.adj[u as usize].len() as u32, self.adj[v as usize].len() as u32]);
        self.adj[u as usize].push(id);
        self.adj[v as usize].push(id);
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.ends.len()
    }

    pub fn degree(&self, v: u32) -> u32 {
        self.adj[v as usize].len() as u32
    }

    pub fn degree_vector(&self) -> Vec<u32> {
        self.adj.iter().map(|a| a.len() as u32).collect()
    }

    /// Edge ids incident to `v`, in label order.
    pub fn incident(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// Neighbours of `v`, in label order.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[v as usize].iter().map(move |&e| self.other(e, v))
    }

    pub fn endpoints(&self, e: u32) -> (u32, u32) {
        let [a, b] = self.ends[e as usize];
        (a, b)
    }

    /// The endpoint of `e` that is not `v`.
    #[inline]
    pub fn other(&self, e: u32, v: u32) -> u32 {
        let [a, b] = self.ends[e as usize];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Label (1-based) of edge `e` at its endpoint `v`.
    pub fn label_at(&self, e: u32, v: u32) -> u32 {
        let side = usize::from(self.ends[e as usize][0] != v);
        self.slots[e as usize][side] + 1
    }

    pub fn edge_id(&self, u: u32, v: u32) -> Option<u32> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.index.contains_key(&key(u, v))
    }

    /// Edge ids ordered by `(min endpoint, max endpoint)`.
    pub fn sorted_edge_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = (0..self.m() as u32).collect();
        ids.sort_unstable_by_key(|&e| key(self.ends[e as usize][0], self.ends[e as usize][1]));
        ids
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn sorted_edges(&self) -> Vec<(u32, u32)> {
        let mut edges: Vec<(u32, u32)> = self.ends.iter().map(|&[a, b]| if a < b { (a, b) } else { (b, a) }).collect();
        edges.sort_unstable();
        edges
    }

    /// Checks simplicity and that labels at every vertex are a bijection onto
    /// `1..=d(v)`.
    pub fn validate(&self) -> Result<()> {
        if self.index.len() != self.m() {
            return Err(invalid("edge index out of sync"));
        }
        for (e, (&[a, b], &[sa, sb])) in self.ends.iter().zip(&self.slots).enumerate() {
            if a == b {
                return Err(invalid(format!("loop on edge {e}")));
            }
            if self.index.get(&key(a, b)) != Some(&(e as u32)) {
                return Err(invalid(format!("edge {e} missing from index or duplicated")));
            }
            if self.adj[a as usize].get(sa as usize) != Some(&(e as u32))
                || self.adj[b as usize].get(sb as usize) != Some(&(e as u32))
            {
                return Err(invalid(format!("labels of edge {e} inconsistent")));
            }
        }
        let slots_total: usize = self.adj.iter().map(Vec::len).sum();
        if slots_total != 2 * self.m() {
            return Err(invalid("incidence lists do not match edge count"));
        }
        Ok(())
    }

    /// Local form of [`validate`](Self::validate) for one edge.
    fn edge_consistent(&self, e: u32) -> bool {
        let [a, b] = self.ends[e as usize];
        let [sa, sb] = self.slots[e as usize];
        a != b
            && self.index.get(&key(a, b)) == Some(&e)
            && self.adj[a as usize].get(sa as usize) == Some(&e)
            && self.adj[b as usize].get(sb as usize) == Some(&e)
    }

    /// Applies a `{uv, xy}`-switch in place when it is valid.
    pub fn apply_switch(&mut self, s: Switch) -> Result<SwitchOutcome> {
        let (Some(e1), Some(e2)) = (self.edge_id(s.u, s.v), self.edge_id(s.x, s.y)) else {
            return Err(invalid(format!("switch {s:?} uses an absent edge")));
        };
        if e1 == e2 {
            return Ok(SwitchOutcome::Rejected);
        }
        Ok(self.switch_edges(e1, s.u, e2, s.x))
    }

    /// Switch on edge ids: `e1` oriented away from `u`, `e2` away from `x`.
    fn switch_edges(&mut self, e1: u32, u: u32, e2: u32, x: u32) -> SwitchOutcome {
        let v = self.other(e1, u);
        let y = self.other(e2, x);
        if u == x || v == y || self.has_edge(u, x) || self.has_edge(v, y) {
            return SwitchOutcome::Rejected;
        }
        let (i1, i2) = (e1 as usize, e2 as usize);
        let pv = usize::from(self.ends[i1][1] == v);
        let px = usize::from(self.ends[i2][1] == x);
        let slot_v = self.slots[i1][pv];
        let slot_x = self.slots[i2][px];

        self.index.remove(&key(u, v));
        self.index.remove(&key(x, y));

        // e1 keeps its semi-edge at u and takes over x's semi-edge.
        self.ends[i1][pv] = x;
        self.slots[i1][pv] = slot_x;
        self.adj[x as usize][slot_x as usize] = e1;
        // e2 keeps its semi-edge at y and takes over v's semi-edge.
        self.ends[i2][px] = v;
        self.slots[i2][px] = slot_v;
        self.adj[v as usize][slot_v as usize] = e2;

        self.index.insert(key(u, x), e1);
        self.index.insert(key(v, y), e2);
        SwitchOutcome::Applied
    }

    /// One lazy step of the switch chain: two ordered edges drawn uniformly
    /// with replacement from the `2m` orientations; invalid proposals hold.
    pub fn switch_step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> SwitchOutcome {
        let m2 = 2 * self.m();
        if m2 < 4 {
            return SwitchOutcome::Rejected;
        }
        let a = rng.random_range(0..m2);
        let b = rng.random_range(0..m2);
        let (e1, e2) = ((a / 2) as u32, (b / 2) as u32);
        if e1 == e2 {
            return SwitchOutcome::Rejected;
        }
        let u = self.ends[a / 2][a % 2];
        let x = self.ends[b / 2][b % 2];
        let out = self.switch_edges(e1, u, e2, x);
        debug_assert!(self.edge_consistent(e1) && self.edge_consistent(e2));
        out
    }

    /// Runs `steps` chain steps and returns how many were accepted.
    pub fn run_switch_chain<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R) -> u64 {
        (0..steps).filter(|_| self.switch_step(rng) == SwitchOutcome::Applied).count() as u64
    }
}

impl PartialEq for LabeledGraph {
    /// Same vertex count and edge set; labels are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for LabeledGraph {}

/// Default chain length `ceil(20 m ln(m + 1))`.
pub fn default_steps(m: usize) -> u64 {
    let m = m as f64;
    (20.0 * m * (m + 1.0).ln()).ceil() as u64
}

/// Deterministic Havel–Hakimi realisation; vertex `i` gets `d.degrees()[i]`.
pub fn havel_hakimi(d: &DegreeSequence) -> Result<LabeledGraph> {
    havel_hakimi_degrees(d.degrees())
}

/// Havel–Hakimi on a vertex-indexed degree vector (zeros allowed).
///
/// Repeatedly takes the smallest-index vertex of largest residual degree and
/// joins it to the vertices of largest residual degree, ties broken by index.
pub fn havel_hakimi_degrees(degrees: &[u32]) -> Result<LabeledGraph> {
    let n = degrees.len();
    if degrees.iter().any(|&d| d as usize >= n.max(1)) && degrees.iter().any(|&d| d > 0) {
        return Err(Error::NotGraphical);
    }
    let max = degrees.iter().copied().max().unwrap_or(0) as usize;
    let mut buckets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); max + 1];
    let mut residual = degrees.to_vec();
    for (v, &d) in degrees.iter().enumerate() {
        buckets[d as usize].insert(v as u32);
    }
    let mut g = LabeledGraph::empty(n);
    let mut top = max;
    let mut chosen = Vec::new();
    loop {
        while top > 0 && buckets[top].is_empty() {
            top -= 1;
        }
        if top == 0 {
            break;
        }
        let v = *buckets[top].first().expect("non-empty bucket");
        buckets[top].remove(&v);
        let need = top;
        chosen.clear();
        'outer: for b in (1..=top).rev() {
            for &u in &buckets[b] {
                if chosen.len() == need {
                    break 'outer;
                }
                chosen.push(u);
            }
        }
        if chosen.len() < need {
            return Err(Error::NotGraphical);
        }
        for &u in &chosen {
            let r = residual[u as usize] as usize;
            buckets[r].remove(&u);
            buckets[r - 1].insert(u);
            residual[u as usize] -= 1;
            g.add_edge(v, u)?;
        }
        residual[v as usize] = 0;
        buckets[0].insert(v);
    }
    Ok(g)
}

/// Runs the switch chain for `steps` steps from the Havel–Hakimi graph.
pub fn sample_uniform<R: Rng + ?Sized>(d: &DegreeSequence, steps: u64, rng: &mut R) -> Result<LabeledGraph> {
    sample_uniform_degrees(d.degrees(), steps, rng)
}

pub fn sample_uniform_degrees<R: Rng + ?Sized>(degrees: &[u32], steps: u64, rng: &mut R) -> Result<LabeledGraph> {
    let mut g = havel_hakimi_degrees(degrees)?;
    g.run_switch_chain(steps, rng);
    Ok(g)
}

/// Size guard for [`enumerate_graphs`].
pub const ENUMERATION_MAX_N: usize = 10;
pub const ENUMERATION_MAX_SIGMA: u64 = 20;

/// All labelled simple graphs with the given sequence (vertex `i` has degree
/// `d.degrees()[i]`), by exhaustive search.
pub fn enumerate_graphs(d: &DegreeSequence) -> Result<Vec<LabeledGraph>> {
    enumerate_graphs_degrees(d.degrees())
}

pub fn enumerate_graphs_degrees(degrees: &[u32]) -> Result<Vec<LabeledGraph>> {
    let n = degrees.len();
    let sigma: u64 = degrees.iter().map(|&d| u64::from(d)).sum();
    if n > ENUMERATION_MAX_N || sigma > ENUMERATION_MAX_SIGMA {
        return Err(Error::Refused(format!(
            "enumeration limited to n <= {ENUMERATION_MAX_N} and degree sum <= {ENUMERATION_MAX_SIGMA}"
        )));
    }
    let mut out = Vec::new();
    let mut residual = degrees.to_vec();
    let mut edges = Vec::new();
    enumerate_from(0, &mut residual, &mut edges, &mut out);
    out.into_iter().map(|e| LabeledGraph::from_edges(n, e)).collect()
}

fn enumerate_from(u: usize, residual: &mut [u32], edges: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
    let n = residual.len();
    if u == n {
        out.push(edges.clone());
        return;
    }
    let need = residual[u] as usize;
    let candidates: Vec<usize> = (u + 1..n).filter(|&w| residual[w] > 0).collect();
    if candidates.len() < need {
        return;
    }
    residual[u] = 0;
    choose(&candidates, need, 0, &mut Vec::new(), &mut |picked| {
        for &w in picked {
            residual[w] -= 1;
            edges.push((u as u32, w as u32));
        }
        enumerate_from(u + 1, residual, edges, out);
        for &w in picked {
            residual[w] += 1;
            edges.pop();
        }
    });
    residual[u] = need as u32;
}

fn choose(pool: &[usize], k: usize, start: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for i in start..pool.len() {
        if pool.len() - i < k - acc.len() {
            break;
        }
        acc.push(pool[i]);
        choose(pool, k, i + 1, acc, f);
        acc.pop();
    }
}

/// Configuration model with rejection of non-simple pairings. Only offered
/// when `max_degree^2 < m / 4`; heavier tails are refused.
pub fn sample_configuration<R: Rng + ?Sized>(
    d: &DegreeSequence,
    rng: &mut R,
    max_attempts: usize,
) -> Result<LabeledGraph> {
    let m = (d.sigma() / 2) as f64;
    let delta = f64::from(d.max_degree());
    if d.sigma() % 2 == 1 {
        return Err(Error::NotGraphical);
    }
    if delta * delta >= m / 4.0 {
        return Err(Error::Refused(format!(
            "configuration model needs max_degree^2 < m/4 (max_degree = {delta}, m = {m})"
        )));
    }
    let mut stubs: Vec<u32> =
        d.degrees().iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v as u32, k as usize)).collect();
    'attempt: for _ in 0..max_attempts {
        stubs.shuffle(rng);
        let mut g = LabeledGraph::empty(d.n());
        for pair in stubs.chunks_exact(2) {
            if g.add_edge(pair[0], pair[1]).is_err() {
                continue 'attempt;
            }
        }
        return Ok(g);
    }
    Err(Error::Construction(format!("no simple pairing in {max_attempts} attempts")))
}
