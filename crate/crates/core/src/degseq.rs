//! Degree-sequence analytics.
//!
//! Indices reported to users (`j_p`, `j_1`) are 1-based to match the usual
//! `d_1 <= ... <= d_n` convention; index ranges returned by [`DegreeSequence::w_set`]
//! are 0-based Rust ranges into [`DegreeSequence::degrees`].

use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::LabeledGraph;

/// A degree sequence with all degree-0 entries removed, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    sigma: u64,
    stripped_zeros: usize,
}

impl DegreeSequence {
    /// Builds a sequence, dropping zeros and sorting. Fails if nothing is
    /// left after stripping.
    pub fn new(degrees: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut stripped_zeros = 0;
        let mut degrees: Vec<u32> = degrees
            .into_iter()
            .filter(|&d| {
                stripped_zeros += usize::from(d == 0);
                d > 0
            })
            .collect();
        if degrees.is_empty() {
            return Err(invalid("empty degree sequence"));
        }
        degrees.sort_unstable();
        let sigma = degrees.iter().map(|&d| u64::from(d)).sum();
        Ok(Self { degrees, sigma, stripped_zeros })
    }

    /// Builds a sequence from `(degree, count)` pairs.
    pub fn from_counts(counts: &[(u32, usize)]) -> Result<Self> {
        Self::new(counts.iter().flat_map(|&(d, k)| std::iter::repeat_n(d, k)))
    }

    /// `n` copies of degree `d`.
    pub fn regular(n: usize, d: u32) -> Result<Self> {
        Self::new(std::iter::repeat_n(d, n))
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// Sum of degrees.
    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    /// Number of zero entries dropped on construction.
    pub fn stripped_zeros(&self) -> usize {
        self.stripped_zeros
    }

    pub fn max_degree(&self) -> u32 {
        *self.degrees.last().expect("non-empty")
    }

    pub fn min_degree(&self) -> u32 {
        self.degrees[0]
    }

    pub fn average_degree(&self) -> f64 {
        self.sigma as f64 / self.n() as f64
    }

    /// `(degree, count)` pairs in ascending degree order.
    pub fn counts(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &d in &self.degrees {
            match out.last_mut() {
                Some((deg, k)) if *deg == d => *k += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }

    /// Whether some simple graph realises this sequence.
    pub fn is_graphical(&self) -> bool {
        erdos_gallai(&self.degrees)
    }

    /// Indices `i` (0-based) with `d_i >= c`; a suffix because the sequence
    /// is sorted.
    pub fn w_set(&self, c: u32) -> Range<usize> {
        self.degrees.partition_point(|&d| d < c)..self.n()
    }

    /// Tail lightness `A1(x, c)`: `sum_{W(c)} d_i <= (x / c) n`.
    pub fn check_a1(&self, x: f64, c: u32) -> Result<TailConditionReport> {
        if !(x > 0.0) || c < 1 {
            return Err(invalid(format!("A1 needs x > 0 and c >= 1 (got x={x}, c={c})")));
        }
        let left: u64 = self.degrees[self.w_set(c)].iter().map(|&d| u64::from(d)).sum();
        let right = x / f64::from(c) * self.n() as f64;
        Ok(TailConditionReport { condition: TailCondition::A1 { x, c }, left, right, holds: left as f64 <= right })
    }

    /// Mid-range second moment `A2(x, c1, c2)`:
    /// `sum_{W(c1) \ W(c2)} d_i^2 <= (x / 4) n`.
    pub fn check_a2(&self, x: f64, c1: u32, c2: u32) -> Result<TailConditionReport> {
        if !(x > 0.0) || c1 > c2 {
            return Err(invalid(format!("A2 needs x > 0 and c1 <= c2 (got x={x}, c1={c1}, c2={c2})")));
        }
        let lo = self.w_set(c1).start;
        let hi = self.w_set(c2).start;
        let left: u64 = self.degrees[lo..hi].iter().map(|&d| u64::from(d) * u64::from(d)).sum();
        let right = x / 4.0 * self.n() as f64;
        Ok(TailConditionReport { condition: TailCondition::A2 { x, c1, c2 }, left, right, holds: left as f64 <= right })
    }

    /// `j^D_p`, `R^D_p` and the `p = 1` quantities `j^D`, `R^D`, `R^D_1`, `M^D`.
    pub fn critical_profile(&self, p: f64) -> Result<CriticalProfile> {
        check_probability(p)?;
        let j_p = self.drift_index(p);
        let r_p = self.residual(p, j_p);
        let j_1 = self.drift_index(1.0);
        let tail = &self.degrees[j_1 - 1..];
        let r_1 = tail.iter().map(|&d| u64::from(d)).sum();
        let r_p_at_one = tail.iter().map(|&d| i64::from(d) - 2).sum::<i64>() as f64;
        let m_1 = self.degrees.iter().filter(|&&d| d != 2).map(|&d| u64::from(d)).sum();
        Ok(CriticalProfile { p, j_p, r_p, j_1, r_1, r_p_at_one, m_1 })
    }

    /// `min(n, smallest j with sum_{i<=j} d_i (p (d_i - 1) - 1) > 0)`, 1-based.
    ///
    /// Each partial sum equals `p * A_j - B_j` with integer `A_j`, `B_j`, and
    /// `p` is a dyadic rational, so the sign test is exact.
    fn drift_index(&self, p: f64) -> usize {
        let mut a: u128 = 0;
        let mut b: u128 = 0;
        for (i, &d) in self.degrees.iter().enumerate() {
            let d = u128::from(d);
            a += d * d.saturating_sub(1);
            b += d;
            if dyadic_exceeds(p, a, b) {
                return i + 1;
            }
        }
        self.n()
    }

    fn residual(&self, p: f64, j: usize) -> f64 {
        let tail = &self.degrees[j - 1..];
        let excess: u64 = tail.iter().map(|&d| u64::from(d) - 1).sum();
        p * excess as f64 - tail.len() as f64
    }

    /// Critical retention probability with the degree tail `W(c2)` excluded:
    /// `min(sum d_i / sum d_i (d_i - 1), 1)` over `d_i < c2`. A zero
    /// denominator yields 1.
    pub fn p_crit(&self, c2: u32) -> Result<f64> {
        if c2 < 1 {
            return Err(invalid("p_crit needs c2 >= 1"));
        }
        let body = &self.degrees[..self.w_set(c2).start];
        let num: u64 = body.iter().map(|&d| u64::from(d)).sum();
        let den: u64 = body.iter().map(|&d| u64::from(d) * u64::from(d - 1)).sum();
        if den == 0 {
            return Ok(1.0);
        }
        Ok((num as f64 / den as f64).min(1.0))
    }

    /// Classifies the sequence as thin-tailed (threshold exists), robust
    /// (giant survives any fixed `p`) or undetermined.
    ///
    /// The thin-tail test `A1(eta, c2)` is consulted first; `Robust` is only
    /// reported when it fails and `A1(K, c)` or `A2(K, 0, c)` fails.
    pub fn classify(&self, params: &ClassifyParams) -> Result<Classification> {
        params.validate()?;
        let thin_a1 = self.check_a1(params.eta, params.c2)?;
        let thin_a2 = self.check_a2(params.eps, params.c1, params.c2)?;
        let robust_a1 = self.check_a1(f64::from(params.k), params.c)?;
        let robust_a2 = self.check_a2(f64::from(params.k), 0, params.c)?;
        let p_crit = self.p_crit(params.c2)?;
        let regime = if thin_a1.holds {
            Regime::ThinTail { p_crit, supercritical_claim: thin_a2.holds && p_crit < 1.0 }
        } else if !robust_a1.holds || !robust_a2.holds {
            Regime::Robust
        } else {
            Regime::Undetermined
        };
        Ok(Classification { regime, p_crit, thin_a1, thin_a2, robust_a1, robust_a2, params: *params })
    }
}

/// Erdős–Gallai test on an arbitrary (unsorted, possibly zero-containing)
/// degree vector.
pub fn is_graphical_degrees(degrees: &[u32]) -> Result<bool> {
    if degrees.is_empty() {
        return Err(invalid("empty degree sequence"));
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    Ok(erdos_gallai(&sorted))
}

/// `ascending` must be sorted ascending.
fn erdos_gallai(ascending: &[u32]) -> bool {
    let n = ascending.len();
    let desc: Vec<u64> = ascending.iter().rev().map(|&d| u64::from(d)).collect();
    let total: u64 = desc.iter().sum();
    if total % 2 == 1 || desc.first().is_some_and(|&d| d as usize >= n) {
        return false;
    }
    let mut suffix = vec![0u64; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + desc[i];
    }
    let mut prefix = 0u64;
    for k in 1..=n {
        prefix += desc[k - 1];
        let kk = k as u64;
        // Entries after position k that are >= k contribute k each.
        let ge = desc.partition_point(|&d| d >= kk).max(k);
        let rhs = kk * (kk - 1) + kk * (ge - k) as u64 + suffix[ge];
        if prefix > rhs {
            return false;
        }
    }
    true
}

/// `p * a > b` for a finite `p >= 0`, evaluated exactly by writing `p` as
/// `mantissa * 2^exp`.
fn dyadic_exceeds(p: f64, a: u128, b: u128) -> bool {
    if p == 0.0 || a == 0 {
        return false;
    }
    let bits = p.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = u128::from(bits & ((1u64 << 52) - 1));
    let (mant, exp) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u128 << 52), raw_exp - 1075) };
    let lhs = mant * a;
    if exp >= 0 {
        // Only reachable for p >= 2^52, kept for completeness.
        return lhs.checked_shl(exp as u32).is_none_or(|l| l > b);
    }
    let shift = (-exp) as u32;
    if b == 0 {
        return lhs > 0;
    }
    if shift >= 128 || b.leading_zeros() < shift {
        return false;
    }
    lhs > b << shift
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("probability {p} outside [0, 1]")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum TailCondition {
    A1 { x: f64, c: u32 },
    A2 { x: f64, c1: u32, c2: u32 },
}

/// Outcome of a tail condition together with both witness sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailConditionReport {
    pub condition: TailCondition,
    pub left: u64,
    pub right: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalProfile {
    pub p: f64,
    /// `j^D_p`, 1-based.
    pub j_p: usize,
    /// `R^D_p`.
    pub r_p: f64,
    /// `j^D` (the `p = 1` index), 1-based.
    pub j_1: usize,
    /// `R^D = sum_{i >= j^D} d_i`.
    pub r_1: u64,
    /// `R^D_1`, i.e. `R^D_p` at `p = 1`.
    pub r_p_at_one: f64,
    /// `M^D = sum_{d_i != 2} d_i`.
    pub m_1: u64,
}

/// Parameters for [`DegreeSequence::classify`]. The existential constants of
/// the threshold and robustness results are supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyParams {
    pub eps: f64,
    pub gamma: f64,
    pub c1: u32,
    pub c2: u32,
    pub eta: f64,
    pub k: u32,
    pub c: u32,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        Self { eps: 0.3, gamma: 0.05, c1: 4, c2: 16, eta: 0.5, k: 64, c: 256 }
    }
}

impl ClassifyParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(self.eps) || !unit(self.gamma) {
            return Err(invalid("eps and gamma must lie in (0, 1)"));
        }
        if self.c1 < 1 || self.c2 < 1 || self.k < 1 || self.c < 1 {
            return Err(invalid("c1, c2, K and c must be positive integers"));
        }
        if self.c1 > self.c2 {
            return Err(invalid("c1 must not exceed c2"));
        }
        if !(self.eta > 0.0) {
            return Err(invalid("eta must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Regime {
    /// A threshold exists at `p_crit`. `supercritical_claim` records whether
    /// `A2(eps, c1, c2)` holds and `p_crit < 1`, which is what the
    /// supercritical half of the dichotomy needs.
    ThinTail {
        p_crit: f64,
        supercritical_claim: bool,
    },
    Robust,
    Undetermined,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::ThinTail { .. } => "thin-tail",
            Regime::Robust => "robust",
            Regime::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub regime: Regime,
    pub p_crit: f64,
    /// `A1(eta, c2)`.
    pub thin_a1: TailConditionReport,
    /// `A2(eps, c1, c2)`.
    pub thin_a2: TailConditionReport,
    /// `A1(K, c)`.
    pub robust_a1: TailConditionReport,
    /// `A2(K, 0, c)`.
    pub robust_a2: TailConditionReport,
    pub params: ClassifyParams,
}

/// `d_{c,n} = max(sum_{d_i < c} d_i (d_i - 1) / sum_{d_i < c} d_i, 1)`.
pub fn truncated_branching_ratio(d: &DegreeSequence, c: u32) -> f64 {
    let body = &d.degrees()[..d.w_set(c).start];
    let num: u64 = body.iter().map(|&x| u64::from(x) * u64::from(x - 1)).sum();
    let den: u64 = body.iter().map(|&x| u64::from(x)).sum();
    if den == 0 {
        return 1.0;
    }
    (num as f64 / den as f64).max(1.0)
}

/// Relative change below which `d_{c,n}` counts as stabilised between
/// `c_max / 2` and `c_max`.
pub const LIMIT_STABILITY_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum LimitEstimate {
    Finite { d: f64 },
    Divergent { largest_observed: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitProbe {
    pub n: usize,
    pub max_degree: u32,
    /// `d_{c,n}` for each entry of [`LimitReport::c_values`].
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub c_values: Vec<u32>,
    pub probes: Vec<LimitProbe>,
    pub estimate: LimitEstimate,
    /// `(d_{c_max} - d_{c_max/2}) / d_{c_max}` at the largest probe.
    pub relative_change: f64,
    /// True when `c_max / 2` already exceeds the maximum degree of the
    /// largest probe, so the stabilisation test compares identical values.
    pub saturated: bool,
}

/// Estimates `d = sup_c lim_n d_{c,n}` from finite probes of a sequence
/// family, declaring divergence when `d_{c,n}` is still moving at `c_max`.
pub fn limit_d<F>(mut family: F, c_max: u32, n_probe: &[usize]) -> Result<LimitReport>
where
    F: FnMut(usize) -> Result<DegreeSequence>,
{
    if n_probe.is_empty() {
        return Err(invalid("limit_d needs at least one probe size"));
    }
    if c_max < 1 {
        return Err(invalid("c_max must be at least 1"));
    }
    let half = (c_max / 2).max(1);
    let mut c_values: Vec<u32> =
        std::iter::successors(Some(1u32), |&c| c.checked_mul(2)).take_while(|&c| c < c_max).collect();
    c_values.extend([half, c_max]);
    c_values.sort_unstable();
    c_values.dedup();

    let mut sizes = n_probe.to_vec();
    sizes.sort_unstable();
    let mut probes = Vec::with_capacity(sizes.len());
    let mut last = None;
    for &n in &sizes {
        let d = family(n)?;
        let values = c_values.iter().map(|&c| truncated_branching_ratio(&d, c)).collect();
        probes.push(LimitProbe { n, max_degree: d.max_degree(), values });
        last = Some(d);
    }
    let last = last.expect("non-empty probes");
    let at_max = truncated_branching_ratio(&last, c_max);
    let at_half = truncated_branching_ratio(&last, half);
    let relative_change = (at_max - at_half) / at_max;
    let sup = probes.last().expect("non-empty").values.iter().copied().fold(f64::MIN, f64::max);
    let estimate = if relative_change < LIMIT_STABILITY_TOLERANCE {
        LimitEstimate::Finite { d: sup }
    } else {
        LimitEstimate::Divergent { largest_observed: sup }
    };
    Ok(LimitReport { c_values, probes, estimate, relative_change, saturated: half > last.max_degree() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawSequence {
    pub sequence: DegreeSequence,
    pub gamma: f64,
    pub k0: u32,
    pub c: f64,
    pub seed: u64,
    /// Largest degree whose expected count `c n k^-gamma` is at least one.
    pub bulk_max_degree: u32,
    /// `min n_k k^gamma / n` over `k0 <= k <= bulk_max_degree`.
    pub lambda1: f64,
    /// `max n_k k^gamma / n` over `k0 <= k <= bulk_max_degree`.
    pub lambda2: f64,
    /// `max n_k k^gamma / n` over every `k >= k0` with `n_k > 0`.
    pub lambda2_all: f64,
}

/// `1 / sum_{k >= k0} k^-gamma`, so that `c n k^-gamma` sums to about `n`.
pub fn powerlaw_normalization(gamma: f64, k0: u32) -> f64 {
    const TERMS: u32 = 100_000;
    let head: f64 = (k0..k0 + TERMS).map(|k| f64::from(k).powf(-gamma)).sum();
    // Euler–Maclaurin tail from k0 + TERMS onward.
    let m = f64::from(k0 + TERMS);
    let tail = m.powf(1.0 - gamma) / (gamma - 1.0) + 0.5 * m.powf(-gamma);
    1.0 / (head + tail)
}

/// Degree sequence whose count of degree-`k` vertices follows `c n k^-gamma`.
///
/// Counts with expectation at least one are rounded half-to-even; rarer
/// degrees (the extreme tail) get a single vertex with probability equal to
/// their expected count, drawn from `seed`. The vertices left over go to
/// degree `k0`, and one of them is promoted to `k0 + 1` if the degree sum is
/// odd.
pub fn powerlaw_sequence(n: usize, gamma: f64, k0: u32, c: f64, seed: u64) -> Result<PowerLawSequence> {
    if !(gamma > 2.0) || !(c > 0.0) || k0 < 1 || (k0 as usize) > n {
        return Err(invalid(format!(
            "power law needs gamma > 2, c > 0 and n >= k0 >= 1 (got gamma={gamma}, c={c}, k0={k0}, n={n})"
        )));
    }
    let mut rng = crate::rng::seeded(seed);
    let nf = n as f64;
    let mut counts: Vec<(u32, usize)> = Vec::new();
    let mut bulk_max_degree = k0;
    let mut assigned = 0usize;
    let max_degree = u32::try_from(n.saturating_sub(1)).unwrap_or(u32::MAX);
    for k in k0 + 1..=max_degree {
        let expected = c * nf * f64::from(k).powf(-gamma);
        let count = if expected >= 1.0 {
            bulk_max_degree = k;
            expected.round_ties_even() as usize
        } else {
            usize::from(rng.random::<f64>() < expected)
        };
        if count > 0 {
            counts.push((k, count));
            assigned += count;
        }
    }
    let Some(mut base) = n.checked_sub(assigned) else {
        return Err(Error::Construction(format!("tail counts use {assigned} vertices but n = {n}; lower c")));
    };
    let odd = counts.iter().map(|&(k, m)| u64::from(k) * m as u64).sum::<u64>() + u64::from(k0) * base as u64;
    if odd % 2 == 1 {
        if base == 0 {
            return Err(Error::Construction("odd degree sum and no degree-k0 vertex to adjust".into()));
        }
        base -= 1;
        match counts.iter_mut().find(|(k, _)| *k == k0 + 1) {
            Some((_, m)) => *m += 1,
            None => counts.insert(0, (k0 + 1, 1)),
        }
    }
    if base > 0 {
        counts.insert(0, (k0, base));
    }
    let sequence = DegreeSequence::from_counts(&counts)?;
    if !sequence.is_graphical() {
        return Err(Error::Construction("power-law counts are not graphical".into()));
    }
    let ratio = |k: u32, m: usize| m as f64 * f64::from(k).powf(gamma) / nf;
    let count_of = |k: u32| counts.iter().find(|(d, _)| *d == k).map_or(0, |&(_, m)| m);
    let bulk: Vec<f64> = (k0..=bulk_max_degree).map(|k| ratio(k, count_of(k))).collect();
    let lambda1 = bulk.iter().copied().fold(f64::INFINITY, f64::min);
    let lambda2 = bulk.iter().copied().fold(0.0, f64::max);
    let lambda2_all = counts.iter().map(|&(k, m)| ratio(k, m)).fold(lambda2, f64::max);
    Ok(PowerLawSequence { sequence, gamma, k0, c, seed, bulk_max_degree, lambda1, lambda2, lambda2_all })
}

/// Degree sequence of `g - s` (isolated vertices dropped) and its critical
/// profile at `p`.
pub fn delete_and_reprofile(
    d: &DegreeSequence,
    g: &LabeledGraph,
    s: &[u32],
    p: f64,
) -> Result<(DegreeSequence, CriticalProfile)> {
    check_probability(p)?;
    let mut actual: Vec<u32> = g.degree_vector().into_iter().filter(|&x| x > 0).collect();
    actual.sort_unstable();
    if actual != d.degrees() {
        return Err(invalid("graph does not have the given degree sequence"));
    }
    let n = g.n();
    let mut removed = vec![false; n];
    for &v in s {
        let v = v as usize;
        if v >= n {
            return Err(invalid(format!("vertex {v} out of range")));
        }
        removed[v] = true;
    }
    let remaining = (0..n).filter(|&v| !removed[v]).map(|v| {
        let lost = g.neighbors(v as u32).filter(|&u| removed[u as usize]).count() as u32;
        g.degree(v as u32) - lost
    });
    let reduced = DegreeSequence::new(remaining)?;
    let profile = reduced.critical_profile(p)?;
    Ok((reduced, profile))
}

/// Sequence with `a = floor(2 / rho)` hubs of degree `(n - a) / a + a - 1`
/// and `n - a` leaves; its only realisation is a hub clique with pendant
/// leaves. Requires `a` to divide `n - a`.
pub fn hub_clique_sequence(n: usize, rho: f64) -> Result<DegreeSequence> {
    if !(rho > 0.0 && rho <= 2.0) {
        return Err(invalid("rho must lie in (0, 2]"));
    }
    let a = (2.0 / rho).floor() as usize;
    if a == 0 || n <= a || !(n - a).is_multiple_of(a) {
        return Err(invalid(format!("a = {a} must divide n - a = {}", n.saturating_sub(a))));
    }
    let hub = ((n - a) / a + a - 1) as u32;
    DegreeSequence::from_counts(&[(1, n - a), (hub, a)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(d: &[u32]) -> DegreeSequence {
        DegreeSequence::new(d.iter().copied()).unwrap()
    }

    #[test]
    fn construction_strips_zeros_and_sorts() {
        let d = seq(&[3, 0, 1, 2, 0]);
        assert_eq!(d.degrees(), &[1, 2, 3]);
        assert_eq!(d.stripped_zeros(), 2);
        assert_eq!(d.sigma(), 6);
        assert!(DegreeSequence::new([0, 0]).is_err());
        assert!(DegreeSequence::new([]).is_err());
    }

    #[test]
    fn graphicality_small_cases() {
        assert!(seq(&[2, 2, 2]).is_graphical());
        assert!(!seq(&[1, 1, 1]).is_graphical());
        assert!(seq(&[3, 3, 3, 3, 3, 3]).is_graphical());
        assert!(!seq(&[3, 3, 1, 1]).is_graphical());
        assert!(!seq(&[4, 1, 1, 1]).is_graphical());
        assert!(seq(&[3, 1, 1, 1]).is_graphical());
        assert!(is_graphical_degrees(&[]).is_err());
        assert!(is_graphical_degrees(&[0, 0, 0]).unwrap());
        assert!(is_graphical_degrees(&[0, 1, 1]).unwrap());
    }

    #[test]
    fn w_set_examples() {
        assert_eq!(seq(&[1, 2, 5, 9]).w_set(5), 2..4);
        assert!(seq(&[1, 1, 1]).w_set(2).is_empty());
        assert_eq!(seq(&[3, 3, 3]).w_set(0), 0..3);
    }

    #[test]
    fn a1_examples() {
        let reg = DegreeSequence::regular(100, 3).unwrap();
        let r = reg.check_a1(1.0, 10).unwrap();
        assert_eq!(r.left, 0);
        assert!(r.holds);

        let mixed = DegreeSequence::from_counts(&[(1, 90), (10, 10)]).unwrap();
        let r = mixed.check_a1(1.0, 10).unwrap();
        assert_eq!(r.left, 100);
        assert_eq!(r.right, 10.0);
        assert!(!r.holds);
        assert!(mixed.check_a1(0.0, 10).is_err());
        assert!(mixed.check_a1(1.0, 0).is_err());
    }

    #[test]
    fn a2_examples() {
        let reg = DegreeSequence::regular(50, 3).unwrap();
        let r = reg.check_a2(1.0, 5, 50).unwrap();
        assert_eq!(r.left, 0);
        assert!(r.holds);

        let r = seq(&[4, 4, 4, 4]).check_a2(16.0, 0, 10).unwrap();
        assert_eq!(r.left, 64);
        assert_eq!(r.right, 16.0);
        assert!(!r.holds);
        assert!(reg.check_a2(1.0, 6, 5).is_err());
    }

    #[test]
    fn profile_examples() {
        let p = seq(&[3, 3, 3, 3]).critical_profile(0.6).unwrap();
        assert_eq!(p.j_p, 1);
        assert!((p.r_p - 0.8).abs() < 1e-12);

        let p = seq(&[1, 1, 3, 3]).critical_profile(0.6).unwrap();
        assert_eq!(p.j_p, 4);
        assert!((p.r_p - 0.2).abs() < 1e-12);

        for prob in [0.0, 0.3, 1.0] {
            let p = DegreeSequence::regular(6, 1).unwrap().critical_profile(prob).unwrap();
            assert_eq!(p.j_p, 6);
            assert_eq!(p.r_p, -1.0);
        }
        assert!(seq(&[1, 1]).critical_profile(1.5).is_err());
    }

    #[test]
    fn profile_at_one_quantities() {
        // Partial sums of d(d-2): -1, -2, 1 -> j = 3.
        let p = seq(&[1, 1, 3, 3]).critical_profile(1.0).unwrap();
        assert_eq!(p.j_1, 3);
        assert_eq!(p.r_1, 6);
        assert_eq!(p.r_p_at_one, 2.0);
        assert_eq!(p.m_1, 8);
        assert_eq!(seq(&[2, 2, 3, 3]).critical_profile(1.0).unwrap().m_1, 6);
    }

    #[test]
    fn strict_positivity_at_exact_zero() {
        // d = 3 at p = 1/2: each summand is 3 * (0.5 * 2 - 1) = 0, never > 0.
        let p = DegreeSequence::regular(10, 3).unwrap().critical_profile(0.5).unwrap();
        assert_eq!(p.j_p, 10);
        assert_eq!(p.r_p, 0.0);
        // Smallest float above 1/2 makes every summand positive.
        let p = DegreeSequence::regular(10, 3).unwrap().critical_profile(0.5f64.next_up()).unwrap();
        assert_eq!(p.j_p, 1);
    }

    #[test]
    fn dyadic_comparison_edge_cases() {
        assert!(!dyadic_exceeds(0.0, 10, 0));
        assert!(dyadic_exceeds(f64::MIN_POSITIVE / 4.0, 1, 0));
        assert!(!dyadic_exceeds(f64::MIN_POSITIVE, u128::from(u64::MAX), 1));
        assert!(dyadic_exceeds(0.75, 4, 2));
        assert!(!dyadic_exceeds(0.75, 4, 3));
        assert!(dyadic_exceeds(1.0, 4, 3));
    }

    #[test]
    fn p_crit_examples() {
        for d in 3..=20u32 {
            let reg = DegreeSequence::regular(100, d).unwrap();
            assert_eq!(reg.p_crit(d + 1).unwrap(), 1.0 / f64::from(d - 1));
        }
        assert_eq!(seq(&[1, 1, 2, 3]).p_crit(10).unwrap(), 0.875);
        assert_eq!(DegreeSequence::regular(10, 2).unwrap().p_crit(5).unwrap(), 1.0);
        assert_eq!(seq(&[2, 2, 2, 50, 60]).p_crit(10).unwrap(), 1.0);
        assert_eq!(DegreeSequence::regular(10, 1).unwrap().p_crit(5).unwrap(), 1.0);
        // Everything in the tail: empty body.
        assert_eq!(DegreeSequence::regular(10, 5).unwrap().p_crit(2).unwrap(), 1.0);
    }

    #[test]
    fn classify_examples() {
        let params = ClassifyParams::default();
        let reg = DegreeSequence::regular(1000, 3).unwrap();
        let c = reg.classify(&params).unwrap();
        assert_eq!(c.regime, Regime::ThinTail { p_crit: 0.5, supercritical_claim: true });

        let mixed = DegreeSequence::from_counts(&[(1, 90), (10, 10)]).unwrap();
        let params = ClassifyParams { k: 1, c: 10, c2: 10, c1: 2, ..ClassifyParams::default() };
        let c = mixed.classify(&params).unwrap();
        assert_eq!(c.regime, Regime::Robust);
        assert!(!c.robust_a1.holds);

        // Light tail at c2 but neither robust condition fails.
        let params = ClassifyParams { eta: 0.01, c2: 10, c1: 2, k: 1000, c: 10, ..ClassifyParams::default() };
        assert_eq!(mixed.classify(&params).unwrap().regime, Regime::Undetermined);

        let bad = ClassifyParams { eps: 1.5, ..ClassifyParams::default() };
        assert!(reg.classify(&bad).is_err());
    }

    #[test]
    fn branching_ratio_for_regular_family() {
        let reg = DegreeSequence::regular(100, 3).unwrap();
        for c in 4..10 {
            assert_eq!(truncated_branching_ratio(&reg, c), 2.0);
        }
        assert_eq!(truncated_branching_ratio(&reg, 3), 1.0);
        let r = limit_d(|n| DegreeSequence::regular(n, 3), 64, &[100, 1000]).unwrap();
        assert_eq!(r.estimate, LimitEstimate::Finite { d: 2.0 });
        assert!(r.saturated);
        assert!(limit_d(|n| DegreeSequence::regular(n, 3), 64, &[]).is_err());
    }

    #[test]
    fn powerlaw_is_deterministic_and_even() {
        let c = powerlaw_normalization(3.5, 1);
        let a = powerlaw_sequence(1000, 3.5, 1, c, 7).unwrap();
        let b = powerlaw_sequence(1000, 3.5, 1, c, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sequence.n(), 1000);
        assert_eq!(a.sequence.sigma() % 2, 0);
        assert!(a.lambda1 > 0.0 && a.lambda1 <= a.lambda2 && a.lambda2 <= a.lambda2_all);
        assert!(powerlaw_sequence(1000, 2.0, 1, c, 7).is_err());
        assert!(powerlaw_sequence(1000, 2.5, 1, 5.0, 7).is_err());
    }

    #[test]
    fn normalization_matches_zeta() {
        // zeta(3.5) = 1.1267338673170566...
        assert!((1.0 / powerlaw_normalization(3.5, 1) - 1.126_733_867_317_056).abs() < 1e-9);
        // zeta(2.5) = 1.3414872572509171...
        assert!((1.0 / powerlaw_normalization(2.5, 1) - 1.341_487_257_250_917).abs() < 1e-9);
    }

    #[test]
    fn hub_clique_sequence_shape() {
        let d = hub_clique_sequence(1010, 0.2).unwrap();
        assert_eq!(d.counts(), vec![(1, 1000), (109, 10)]);
        assert!(d.is_graphical());
        assert!(hub_clique_sequence(1011, 0.2).is_err());
    }

    #[test]
    fn bounds_fail_when_max_degree_at_most_two() {
        // With no positive partial sum j^D = n and R^D = d_n, while
        // R^D_1 = d_n - 2, so the upper bound 3 R^D_1 is violated.
        let p = seq(&[2, 2, 2]).critical_profile(1.0).unwrap();
        assert_eq!((p.r_1, p.r_p_at_one), (2, 0.0));
        assert!(p.r_1 as f64 > 3.0 * p.r_p_at_one);
        let p = seq(&[1, 1]).critical_profile(1.0).unwrap();
        assert_eq!((p.r_1, p.r_p_at_one), (1, -1.0));
    }
}
