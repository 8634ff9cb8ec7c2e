//! Bond percolation and component analysis.
//!
//! Random verdicts are consumed in sorted edge order, one uniform draw
//! `U in (0, 1]` per edge; an edge survives at level `p` iff `U <= p`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::degseq::check_probability;
use crate::error::Result;
use crate::graph::LabeledGraph;
use crate::rng::unit_open_closed;

/// Disjoint-set forest with union by size and path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    largest: u32,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n], largest: u32::from(n > 0) }
    }

    pub fn find(&mut self, v: u32) -> u32 {
        let mut root = v;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = v;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Returns true when `a` and `b` were in different sets.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.largest = self.largest.max(self.size[ra as usize]);
        true
    }

    /// Size of the largest set.
    pub fn largest(&self) -> u32 {
        self.largest
    }

    pub fn set_size(&mut self, v: u32) -> u32 {
        let r = self.find(v);
        self.size[r as usize]
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let mut min_of_root = vec![u32::MAX; n];
        let roots: Vec<u32> = (0..n as u32).map(|v| self.find(v)).collect();
        for (v, &r) in roots.iter().enumerate() {
            let slot = &mut min_of_root[r as usize];
            *slot = (*slot).min(v as u32);
        }
        Partition::from_labels(roots.iter().map(|&r| min_of_root[r as usize]).collect())
    }
}

/// A partition of `0..n`; each vertex is labelled by the smallest vertex of
/// its part, so equal partitions have equal label vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<u32>,
    /// Part sizes, largest first.
    sizes: Vec<u32>,
}

impl Partition {
    /// Builds from arbitrary part ids (any value per vertex; equal ids mean
    /// the same part).
    pub fn from_part_ids(ids: &[u32]) -> Self {
        let mut first: BTreeMap<u32, u32> = BTreeMap::new();
        let labels = ids.iter().enumerate().map(|(v, id)| *first.entry(*id).or_insert(v as u32)).collect();
        Self::from_labels(labels)
    }

    fn from_labels(labels: Vec<u32>) -> Self {
        let mut counts = vec![0u32; labels.len()];
        for &l in &labels {
            counts[l as usize] += 1;
        }
        let mut sizes: Vec<u32> = counts.into_iter().filter(|&c| c > 0).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Self { labels, sizes }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Smallest vertex in the part containing `v`.
    pub fn label(&self, v: u32) -> u32 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Part sizes in non-increasing order.
    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn num_parts(&self) -> usize {
        self.sizes.len()
    }

    pub fn l1(&self) -> u32 {
        self.sizes.first().copied().unwrap_or(0)
    }

    pub fn l2(&self) -> u32 {
        self.sizes.get(1).copied().unwrap_or(0)
    }

    /// Component size -> number of components of that size.
    pub fn histogram(&self) -> BTreeMap<u32, u32> {
        let mut h = BTreeMap::new();
        for &s in &self.sizes {
            *h.entry(s).or_insert(0) += 1;
        }
        h
    }

    /// True when every part of `self` lies inside a part of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n() == coarser.n() && (0..self.n() as u32).all(|v| coarser.label(v) == coarser.label(self.label(v)))
    }
}

/// Connected components of the graph `([n], edges)`.
pub fn components(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Partition {
    let mut uf = UnionFind::new(n);
    for (u, v) in edges {
        uf.union(u, v);
    }
    uf.into_partition()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercolationSample {
    pub p: f64,
    /// Survival flag per edge, aligned with [`LabeledGraph::sorted_edges`].
    pub survived: Vec<bool>,
    pub partition: Partition,
    pub l1: u32,
    pub l2: u32,
    pub size_histogram: BTreeMap<u32, u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleSummary {
    pub p: f64,
    pub seed: u64,
    pub l1: u32,
    pub l2: u32,
    pub histogram: BTreeMap<u32, u32>,
}

impl PercolationSample {
    /// Builds the sample for survival flags aligned with `g.sorted_edges()`.
    pub fn from_survivors(g: &LabeledGraph, p: f64, survived: Vec<bool>) -> Self {
        let edges = g.sorted_edges();
        assert_eq!(edges.len(), survived.len(), "survivor flags must cover every edge");
        let partition = components(g.n(), edges.iter().zip(&survived).filter(|(_, &s)| s).map(|(&e, _)| e));
        Self { p, l1: partition.l1(), l2: partition.l2(), size_histogram: partition.histogram(), survived, partition }
    }

    pub fn surviving_edges(&self, g: &LabeledGraph) -> Vec<(u32, u32)> {
        g.sorted_edges().into_iter().zip(&self.survived).filter(|(_, &s)| s).map(|(e, _)| e).collect()
    }

    pub fn num_survived(&self) -> usize {
        self.survived.iter().filter(|&&s| s).count()
    }

    pub fn summary(&self, seed: u64) -> SampleSummary {
        SampleSummary { p: self.p, seed, l1: self.l1, l2: self.l2, histogram: self.size_histogram.clone() }
    }
}

fn draw_uniforms<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    (0..m).map(|_| unit_open_closed(rng)).collect()
}

/// Keeps each edge independently with probability `p`.
pub fn percolate<R: Rng + ?Sized>(g: &LabeledGraph, p: f64, rng: &mut R) -> Result<PercolationSample> {
    check_probability(p)?;
    let u = draw_uniforms(g.m(), rng);
    Ok(PercolationSample::from_survivors(g, p, u.iter().map(|&x| x <= p).collect()))
}

fn check_grid(p_list: &[f64]) -> Result<()> {
    for &p in p_list {
        check_probability(p)?;
    }
    if p_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(crate::error::invalid("p values must be sorted ascending"));
    }
    Ok(())
}

/// Monotone coupling: one uniform per edge shared by every level.
pub fn percolate_coupled<R: Rng + ?Sized>(
    g: &LabeledGraph,
    p_list: &[f64],
    rng: &mut R,
) -> Result<Vec<PercolationSample>> {
    check_grid(p_list)?;
    let u = draw_uniforms(g.m(), rng);
    Ok(p_list.iter().map(|&p| PercolationSample::from_survivors(g, p, u.iter().map(|&x| x <= p).collect())).collect())
}

/// Largest component size at each level of `p_list` under the same coupling
/// as [`percolate_coupled`] (identical draws), computed in one pass by adding
/// edges in increasing order of their uniforms.
pub fn coupled_l1_sweep<R: Rng + ?Sized>(g: &LabeledGraph, p_list: &[f64], rng: &mut R) -> Result<Vec<u32>> {
    check_grid(p_list)?;
    let edges = g.sorted_edges();
    let u = draw_uniforms(edges.len(), rng);
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_unstable_by(|&a, &b| u[a].total_cmp(&u[b]));
    let mut uf = UnionFind::new(g.n());
    let mut next = 0;
    let mut out = Vec::with_capacity(p_list.len());
    for &p in p_list {
        while next < order.len() && u[order[next]] <= p {
            let (a, b) = edges[order[next]];
            uf.union(a, b);
            next += 1;
        }
        out.push(uf.largest());
    }
    Ok(out)
}
