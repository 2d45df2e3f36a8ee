//! Tail probabilities of `X = e(H_p)`: exhaustive enumeration, plain Monte
//! Carlo, planted-witness and vertex-count-conditioned lower bounds, and
//! point-mass lower bounds from clean edge configurations.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::ensure;
use crate::families::Witness;
use crate::hypergraph::next_combination;
use crate::numeric::{binomial_upper_tail, one_minus_pow, powu, Neumaier};
use crate::rng::stream;
use crate::{Error, Hypergraph, Result, VertexSet};

/// Largest vertex count the exhaustive routines accept.
pub const EXACT_MAX_VERTICES: usize = 26;
/// Cap on `C(e(H), m)` for clean-configuration enumeration.
pub const CLEAN_CONFIG_BUDGET: u64 = 10_000_000;
/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.5758293035489004;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Mc,
    Planted,
    Conditioned,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Mc => "mc",
            Method::Planted => "planted",
            Method::Conditioned => "conditioned",
        }
    }
}

impl core::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => Method::Exact,
            "mc" => Method::Mc,
            "planted" => Method::Planted,
            "conditioned" => Method::Conditioned,
            _ => return Err(Error::Contract(alloc::format!("unknown method {s:?}"))),
        })
    }
}

/// An estimate of `Pr(X >= threshold)`. For `planted` and `conditioned`
/// the value and interval are lower bounds on that probability.
#[derive(Clone, Debug, PartialEq)]
pub struct TailEstimate {
    pub threshold: f64,
    pub p_hat: f64,
    pub method: Method,
    pub samples: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Wilson score interval at 99%, widened if needed so it contains
/// `hits / n`.
pub fn wilson_interval(hits: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let phat = hits as f64 / nf;
    let z2 = Z99 * Z99;
    let denom = 1.0 + z2 / nf;
    let center = (phat + z2 / (2.0 * nf)) / denom;
    let half = Z99 / denom * libm::sqrt(phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf));
    let low = (center - half).clamp(0.0, 1.0).min(phat);
    let high = (center + half).clamp(0.0, 1.0).max(phat);
    (low, high)
}

fn from_hits(method: Method, threshold: f64, hits: u64, samples: u64, scale: f64) -> TailEstimate {
    let (lo, hi) = wilson_interval(hits, samples);
    TailEstimate {
        threshold,
        p_hat: scale * hits as f64 / samples as f64,
        method,
        samples,
        ci_low: scale * lo,
        ci_high: scale * hi,
    }
}

fn check_p(p: f64) -> Result<()> {
    ensure!((0.0..=1.0).contains(&p), "probability {p} outside [0,1]");
    Ok(())
}

fn check_exact_size(h: &Hypergraph) -> Result<()> {
    let n = h.num_vertices();
    if n > EXACT_MAX_VERTICES {
        return Err(Error::Capacity {
            what: "exact enumeration vertices",
            limit: EXACT_MAX_VERTICES as u64,
            got: n as u64,
        });
    }
    Ok(())
}

/// Visits every subset of `{0, .., n-1}` whose top `top_bits` bits equal
/// `part`, in Gray-code order over the remaining bits, passing the subset
/// mask and `e(H[S])` maintained incrementally.
fn gray_walk(
    h: &Hypergraph,
    masks: &[u64],
    top_bits: u32,
    part: u64,
    mut visit: impl FnMut(u64, usize),
) {
    let n = h.num_vertices() as u32;
    let low = n - top_bits;
    let mut s = part << low;
    let mut x = masks.iter().filter(|&&m| m & !s == 0).count();
    visit(s, x);
    for i in 1u64..1 << low {
        let v = i.trailing_zeros() as usize;
        let bit = 1u64 << v;
        if s & bit == 0 {
            s |= bit;
            x += h
                .incident(v)
                .iter()
                .filter(|&&e| masks[e as usize] & !s == 0)
                .count();
        } else {
            x -= h
                .incident(v)
                .iter()
                .filter(|&&e| masks[e as usize] & !s == 0)
                .count();
            s &= !bit;
        }
        visit(s, x);
    }
}

/// Integer counts of vertex subsets by size and induced edge count:
/// `counts[j][x]` subsets of size `j` induce exactly `x` edges. Every tail
/// and point probability for every `p` follows from these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    n: usize,
    counts: Vec<Vec<u64>>,
}

impl ExactDistribution {
    fn zeroed(h: &Hypergraph) -> Self {
        Self {
            n: h.num_vertices(),
            counts: vec![vec![0; h.num_edges() + 1]; h.num_vertices() + 1],
        }
    }

    pub fn enumerate(h: &Hypergraph) -> Result<Self> {
        Self::enumerate_part(h, 0, 0)
    }

    /// The share of subsets whose top `top_bits` vertices spell `part`.
    /// Summing all `2^top_bits` parts with [`Self::merge`] gives
    /// [`Self::enumerate`] exactly, in any order.
    pub fn enumerate_part(h: &Hypergraph, top_bits: u32, part: u64) -> Result<Self> {
        check_exact_size(h)?;
        ensure!(
            top_bits as usize <= h.num_vertices() && part < 1 << top_bits,
            "partition {part} of 2^{top_bits} invalid for {} vertices",
            h.num_vertices()
        );
        let masks = h.edge_masks().expect("n <= 26");
        let mut out = Self::zeroed(h);
        gray_walk(h, &masks, top_bits, part, |s, x| {
            out.counts[s.count_ones() as usize][x] += 1;
        });
        Ok(out)
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// `counts[j][x]`.
    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    fn weighted(&self, p: f64, mut per_size: impl FnMut(&[u64]) -> u64) -> f64 {
        let n = self.n;
        let mut s = Neumaier::new();
        for (j, row) in self.counts.iter().enumerate() {
            let c = per_size(row);
            if c > 0 {
                s.add(c as f64 * powu(p, j) * powu(1.0 - p, n - j));
            }
        }
        s.value()
    }

    /// `Pr(X >= threshold)`.
    pub fn tail(&self, p: f64, threshold: f64) -> f64 {
        self.weighted(p, |row| {
            row.iter()
                .enumerate()
                .filter(|&(x, _)| x as f64 >= threshold)
                .map(|(_, &c)| c)
                .sum()
        })
    }

    /// `Pr(X = x)`.
    pub fn pmf(&self, p: f64, x: usize) -> f64 {
        self.weighted(p, |row| row.get(x).copied().unwrap_or(0))
    }

    /// `(E X, Var X)` at `p`.
    pub fn moments(&self, p: f64) -> (f64, f64) {
        let mut m1 = Neumaier::new();
        let mut m2 = Neumaier::new();
        for x in 0..self.counts[0].len() {
            let w = self.pmf(p, x);
            m1.add(w * x as f64);
            m2.add(w * (x * x) as f64);
        }
        let mean = m1.value();
        (mean, (m2.value() - mean * mean).max(0.0))
    }
}

/// `Pr(X >= threshold)` by enumerating all `2^N` vertex subsets.
pub fn exact_tail(h: &Hypergraph, p: f64, threshold: f64) -> Result<TailEstimate> {
    check_p(p)?;
    let dist = ExactDistribution::enumerate(h)?;
    Ok(exact_estimate(&dist, p, threshold))
}

/// Wraps an already enumerated distribution as a [`TailEstimate`].
pub fn exact_estimate(dist: &ExactDistribution, p: f64, threshold: f64) -> TailEstimate {
    let v = dist.tail(p, threshold);
    TailEstimate {
        threshold,
        p_hat: v,
        method: Method::Exact,
        samples: 0,
        ci_low: v,
        ci_high: v,
    }
}

/// `Pr(S ∈ event)` for `S = V_p(H)`, by enumerating all subsets.
pub fn exact_event_probability(
    h: &Hypergraph,
    p: f64,
    mut event: impl FnMut(&VertexSet) -> bool,
) -> Result<f64> {
    check_p(p)?;
    check_exact_size(h)?;
    let n = h.num_vertices();
    let mut hits = vec![0u64; n + 1];
    for mask in 0u64..1 << n {
        if event(&VertexSet::from_mask(n, mask)) {
            hits[mask.count_ones() as usize] += 1;
        }
    }
    let s: Neumaier = hits
        .iter()
        .enumerate()
        .map(|(j, &c)| c as f64 * powu(p, j) * powu(1.0 - p, n - j))
        .collect();
    Ok(s.value())
}

/// Hits among samples `range` of a Monte Carlo run: sample `i` draws
/// `V_p(H)` from [`stream`]`(seed, i)`, so any split of the index range
/// gives the same total.
pub fn mc_hits(
    h: &Hypergraph,
    p: f64,
    threshold: f64,
    seed: u64,
    range: Range<u64>,
) -> Result<u64> {
    check_p(p)?;
    let mut hits = 0;
    for i in range {
        let s = h.sample_vp(p, &mut stream(seed, i))?;
        if h.induced_edge_count_filtered(&s)? as f64 >= threshold {
            hits += 1;
        }
    }
    Ok(hits)
}

pub fn mc_estimate(threshold: f64, hits: u64, samples: u64) -> TailEstimate {
    from_hits(Method::Mc, threshold, hits, samples, 1.0)
}

/// Plain Monte Carlo with a 99% Wilson interval.
pub fn mc_tail(
    h: &Hypergraph,
    p: f64,
    threshold: f64,
    samples: u64,
    seed: u64,
) -> Result<TailEstimate> {
    ensure!(samples >= 1, "need at least one sample");
    let hits = mc_hits(h, p, threshold, seed, 0..samples)?;
    Ok(mc_estimate(threshold, hits, samples))
}

/// Hits for [`planted_tail`] over samples `range`: `V_p(H) ∪ W`.
pub fn planted_hits(
    h: &Hypergraph,
    p: f64,
    threshold: f64,
    witness: &Witness,
    seed: u64,
    range: Range<u64>,
) -> Result<u64> {
    check_p(p)?;
    let w = witness.set();
    ensure!(
        w.len() == h.num_vertices(),
        "witness is over a different vertex set"
    );
    if h.induced_edge_count(w)? as f64 >= threshold {
        return Ok(range.end - range.start);
    }
    let mut hits = 0;
    for i in range {
        let mut s = h.sample_vp(p, &mut stream(seed, i))?;
        s.union_with(w);
        if h.induced_edge_count_filtered(&s)? as f64 >= threshold {
            hits += 1;
        }
    }
    Ok(hits)
}

pub fn planted_estimate(
    h: &Hypergraph,
    p: f64,
    threshold: f64,
    witness: &Witness,
    hits: u64,
    samples: u64,
) -> Result<TailEstimate> {
    let scale = powu(p, witness.set().count());
    let mut est = from_hits(Method::Planted, threshold, hits, samples, scale);
    if h.induced_edge_count(witness.set())? as f64 >= threshold {
        // The conditional probability is exactly one.
        est.ci_low = est.p_hat;
        est.ci_high = est.p_hat;
    }
    Ok(est)
}

/// Lower bound `p^{|W|}·Pr(X >= threshold | W ⊆ V_p)`, with the
/// conditional probability estimated by forcing `W` into each sample.
/// Harris' inequality makes this a lower bound on the unconditional tail.
pub fn planted_tail(
    h: &Hypergraph,
    p: f64,
    threshold: f64,
    witness: &Witness,
    samples: u64,
    seed: u64,
) -> Result<TailEstimate> {
    ensure!(samples >= 1, "need at least one sample");
    ensure!(
        witness.is_valid_for(h),
        "witness is not valid for this hypergraph"
    );
    let hits = planted_hits(h, p, threshold, witness, seed, 0..samples)?;
    planted_estimate(h, p, threshold, witness, hits, samples)
}

/// How many edges to plant when certifying `Pr(X >= μ+t)`:
/// `⌈min{λt, μ+t}⌉` with `λ = 4/(1-(1-α)^k)`.
pub fn planted_edge_target(mu: f64, t: f64, alpha: f64, k: usize) -> f64 {
    let lambda = 4.0 / one_minus_pow(1.0 - alpha, k);
    libm::ceil((lambda * t).min(mu + t))
}

/// `⌈(1+ε)·N·p⌉`, the vertex count conditioned on.
pub fn conditioned_size(h: &Hypergraph, p: f64, eps: f64) -> Result<usize> {
    check_p(p)?;
    ensure!(eps >= 0.0, "eps must be nonnegative, got {eps}");
    let n = h.num_vertices();
    let m = libm::ceil((1.0 + eps) * n as f64 * p - 1e-9).max(0.0) as usize;
    ensure!(m <= n, "conditioned size {m} exceeds {n} vertices");
    Ok(m)
}

/// Hits for [`conditioned_tail`] over samples `range`: uniform m-subsets.
pub fn conditioned_hits(
    h: &Hypergraph,
    m: usize,
    threshold: f64,
    seed: u64,
    range: Range<u64>,
) -> Result<u64> {
    let mut hits = 0;
    for i in range {
        let s = h.sample_vm(m, &mut stream(seed, i))?;
        if h.induced_edge_count_filtered(&s)? as f64 >= threshold {
            hits += 1;
        }
    }
    Ok(hits)
}

pub fn conditioned_estimate(
    h: &Hypergraph,
    p: f64,
    m: usize,
    threshold: f64,
    hits: u64,
    samples: u64,
) -> TailEstimate {
    let n = h.num_vertices() as u64;
    let scale = binomial_upper_tail(n, m as u64, p);
    from_hits(Method::Conditioned, threshold, hits, samples, scale)
}

/// Lower bound `Pr_m(X >= threshold)·Pr(Bin(N,p) >= m)` with
/// `m = ⌈(1+ε)Np⌉`; the first factor is estimated from uniform m-subsets.
pub fn conditioned_tail(
    h: &Hypergraph,
    p: f64,
    threshold: f64,
    eps: f64,
    samples: u64,
    seed: u64,
) -> Result<TailEstimate> {
    ensure!(samples >= 1, "need at least one sample");
    let m = conditioned_size(h, p, eps)?;
    let hits = conditioned_hits(h, m, threshold, seed, 0..samples)?;
    Ok(conditioned_estimate(h, p, m, threshold, hits, samples))
}

/// `m` edges whose vertex union induces no further edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanConfig {
    pub edge_ids: Vec<usize>,
}

fn union_of(h: &Hypergraph, edge_ids: &[usize]) -> VertexSet {
    let mut u = VertexSet::empty(h.num_vertices());
    for &e in edge_ids {
        for &v in h.edge(e) {
            u.insert(v as usize);
        }
    }
    u
}

/// Calls `visit` on every clean m-subset of edges, ascending.
fn for_each_clean(
    h: &Hypergraph,
    m: usize,
    mut visit: impl FnMut(&[usize], &VertexSet),
) -> Result<()> {
    let e = h.num_edges();
    let total = libm::exp(crate::numeric::ln_binomial(e as u64, m as u64));
    if total > CLEAN_CONFIG_BUDGET as f64 * (1.0 + 1e-9) {
        return Err(Error::Capacity {
            what: "clean configuration enumeration",
            limit: CLEAN_CONFIG_BUDGET,
            got: libm::round(total) as u64,
        });
    }
    if m > e {
        return Ok(());
    }
    let mut pick: Vec<usize> = (0..m).collect();
    loop {
        let u = union_of(h, &pick);
        if h.induced_edge_count_filtered(&u)? == m {
            visit(&pick, &u);
        }
        if m == 0 || !next_combination(&mut pick, e) {
            return Ok(());
        }
    }
}

/// Every clean configuration of `m` edges. The empty configuration is the
/// only one for `m = 0`.
pub fn enumerate_clean_configs(h: &Hypergraph, m: usize) -> Result<Vec<CleanConfig>> {
    let mut out = Vec::new();
    for_each_clean(h, m, |ids, _| {
        out.push(CleanConfig {
            edge_ids: ids.to_vec(),
        })
    })?;
    Ok(out)
}

pub fn count_clean_configs(h: &Hypergraph, m: usize) -> Result<u64> {
    let mut c = 0;
    for_each_clean(h, m, |_, _| c += 1)?;
    Ok(c)
}

fn pairwise_disjoint(h: &Hypergraph, ids: &[usize], union: &VertexSet) -> bool {
    union.count() == ids.len() * h.k()
}

/// Certified lower bound on `Pr(X = m)` from clean configurations `I`,
/// each contributing `Pr(H_p = I)`.
///
/// With at most [`EXACT_MAX_VERTICES`] vertices the contributions are
/// exact: the events `H_p = I` are disjoint, so their sum is accumulated in
/// one pass over all vertex subsets. Larger hypergraphs fall back to
/// [`clean_config_harris_lower`]. With `vertex_disjoint` only
/// configurations of pairwise disjoint edges count.
///
/// Without the filter every induced edge set is clean, so the exact value
/// is `Pr(X = m)` itself.
pub fn clean_config_point_lower(
    h: &Hypergraph,
    p: f64,
    m: usize,
    vertex_disjoint: bool,
) -> Result<f64> {
    check_p(p)?;
    if h.num_vertices() > EXACT_MAX_VERTICES {
        return clean_config_harris_lower(h, p, m, vertex_disjoint);
    }
    let n = h.num_vertices();
    let masks = h.edge_masks().expect("n <= 26");
    let k = h.k();
    let mut hits = vec![0u64; n + 1];
    gray_walk(h, &masks, 0, 0, |s, x| {
        if x != m {
            return;
        }
        if vertex_disjoint {
            let union = masks
                .iter()
                .filter(|&&e| e & !s == 0)
                .fold(0u64, |a, &e| a | e);
            if union.count_ones() as usize != m * k {
                return;
            }
        }
        hits[s.count_ones() as usize] += 1;
    });
    let s: Neumaier = hits
        .iter()
        .enumerate()
        .map(|(j, &c)| c as f64 * powu(p, j) * powu(1.0 - p, n - j))
        .collect();
    Ok(s.value())
}

/// `Σ_I p^{|∪I|}·Π_{g ∉ I} (1 - p^{|g \ ∪I|})` over clean configurations.
///
/// Given `∪I ⊆ V_p`, edge `g` is induced iff `g \ ∪I ⊆ V_p`; these events
/// are increasing, so by Harris the chance that none occurs is at least
/// the product of the individual chances.
pub fn clean_config_harris_lower(
    h: &Hypergraph,
    p: f64,
    m: usize,
    vertex_disjoint: bool,
) -> Result<f64> {
    check_p(p)?;
    let mut total = Neumaier::new();
    let mut in_config = vec![false; h.num_edges()];
    for_each_clean(h, m, |ids, union| {
        if vertex_disjoint && !pairwise_disjoint(h, ids, union) {
            return;
        }
        for &e in ids {
            in_config[e] = true;
        }
        let mut ln_harris = 0.0;
        for (g, edge) in h.edges().enumerate() {
            if in_config[g] {
                continue;
            }
            let outside = edge
                .iter()
                .filter(|&&v| !union.contains(v as usize))
                .count();
            ln_harris += libm::log(one_minus_pow(p, outside));
        }
        for &e in ids {
            in_config[e] = false;
        }
        total.add(powu(p, union.count()) * libm::exp(ln_harris));
    })?;
    Ok(total.value())
}

/// `Φ_r = Σ_v Pr(deg_v(H_p) >= ⌈r⌉)`, each term by enumerating the
/// vertices sharing an edge with `v`.
pub fn degree_tail_sum(h: &Hypergraph, p: f64, r: f64) -> Result<f64> {
    check_p(p)?;
    ensure!(r > 0.0, "r must be positive, got {r}");
    let c = crate::decompose::star_size(r);
    let mut total = Neumaier::new();
    let mut local = vec![usize::MAX; h.num_vertices()];
    for v in 0..h.num_vertices() {
        let inc = h.incident(v);
        if inc.len() < c {
            continue;
        }
        let mut nbrs: Vec<usize> = Vec::new();
        for &e in inc {
            for &u in h.edge(e as usize) {
                let u = u as usize;
                if u != v && local[u] == usize::MAX {
                    local[u] = nbrs.len();
                    nbrs.push(u);
                }
            }
        }
        if nbrs.len() > EXACT_MAX_VERTICES {
            return Err(Error::Capacity {
                what: "degree tail neighbourhood",
                limit: EXACT_MAX_VERTICES as u64,
                got: nbrs.len() as u64,
            });
        }
        let rest: Vec<u64> = inc
            .iter()
            .map(|&e| {
                h.edge(e as usize)
                    .iter()
                    .filter(|&&u| u as usize != v)
                    .fold(0u64, |m, &u| m | 1 << local[u as usize])
            })
            .collect();
        let d = nbrs.len();
        let mut hits = vec![0u64; d + 1];
        for mask in 0u64..1 << d {
            if rest.iter().filter(|&&r| r & !mask == 0).count() >= c {
                hits[mask.count_ones() as usize] += 1;
            }
        }
        let pr: Neumaier = hits
            .iter()
            .enumerate()
            .map(|(j, &cnt)| cnt as f64 * powu(p, j) * powu(1.0 - p, d - j))
            .collect();
        total.add(p * pr.value());
        for u in nbrs {
            local[u] = usize::MAX;
        }
    }
    Ok(total.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{exact_mean, exact_variance};
    use crate::families::{build_ap, build_schur, interval_witness, FamilySpec};
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-300
    }

    /// `Pr(X >= θ)` by direct loop over subsets with fresh edge counting.
    fn naive_tail(h: &Hypergraph, p: f64, theta: f64) -> f64 {
        let n = h.num_vertices();
        let mut total = 0.0;
        for mask in 0u64..1 << n {
            let s = VertexSet::from_mask(n, mask);
            if h.induced_edge_count(&s).unwrap() as f64 >= theta {
                let c = mask.count_ones() as usize;
                total += libm::pow(p, c as f64) * libm::pow(1.0 - p, (n - c) as f64);
            }
        }
        total
    }

    #[test]
    fn exact_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        let e = exact_tail(&ap4, 0.5, 1.0).unwrap();
        assert!(close(e.p_hat, 3.0 / 16.0, 1e-15));
        assert_eq!((e.ci_low, e.ci_high), (e.p_hat, e.p_hat));
        assert!(close(exact_tail(&ap4, 0.3, 0.0).unwrap().p_hat, 1.0, 1e-15));
        assert_eq!(exact_tail(&ap4, 0.3, 3.0).unwrap().p_hat, 0.0);
        assert!(exact_tail(&build_ap(27, 3).unwrap(), 0.5, 1.0).is_err());
    }

    #[test]
    fn exact_matches_naive_and_moments() {
        for h in [
            build_ap(11, 3).unwrap(),
            build_schur(12).unwrap(),
            build_ap(10, 4).unwrap(),
        ] {
            let dist = ExactDistribution::enumerate(&h).unwrap();
            for p in [0.05, 0.3, 0.5, 0.9] {
                for theta in 0..=h.num_edges() + 1 {
                    let a = dist.tail(p, theta as f64);
                    let b = naive_tail(&h, p, theta as f64);
                    assert!(
                        (a - b).abs() <= 1e-10 * b.max(1e-300),
                        "theta={theta} p={p}"
                    );
                }
                let (mean, var) = dist.moments(p);
                assert!(close(mean, exact_mean(&h, p).unwrap(), 1e-10));
                assert!(close(var, exact_variance(&h, p).unwrap(), 1e-9));
            }
        }
    }

    #[test]
    fn partitions_merge_to_the_whole() {
        let h = build_ap(14, 3).unwrap();
        let whole = ExactDistribution::enumerate(&h).unwrap();
        let mut merged = ExactDistribution::enumerate_part(&h, 3, 5).unwrap();
        for part in (0..8).filter(|&q| q != 5) {
            merged.merge(&ExactDistribution::enumerate_part(&h, 3, part).unwrap());
        }
        assert_eq!(merged, whole);
    }

    #[test]
    fn wilson_contains_phat() {
        for n in [1u64, 7, 100, 100_000] {
            for hits in [0, n / 3, n] {
                let (lo, hi) = wilson_interval(hits, n);
                let ph = hits as f64 / n as f64;
                assert!(lo <= ph && ph <= hi && lo >= 0.0 && hi <= 1.0);
            }
        }
    }

    #[test]
    fn mc_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        assert_eq!(mc_tail(&ap4, 1.0, 2.0, 100, 1).unwrap().p_hat, 1.0);
        assert_eq!(mc_tail(&ap4, 0.0, 1.0, 100, 1).unwrap().p_hat, 0.0);
        let est = mc_tail(&ap4, 0.5, 1.0, 1_000_000, 42).unwrap();
        assert!(
            est.ci_low <= 3.0 / 16.0 && 3.0 / 16.0 <= est.ci_high,
            "{est:?}"
        );
        let split = mc_hits(&ap4, 0.5, 1.0, 42, 0..400_000).unwrap()
            + mc_hits(&ap4, 0.5, 1.0, 42, 400_000..1_000_000).unwrap();
        assert_eq!(split as f64 / 1e6, est.p_hat);
    }

    #[test]
    fn mc_interval_coverage() {
        let h = build_ap(12, 3).unwrap();
        let dist = ExactDistribution::enumerate(&h).unwrap();
        for (p, theta) in [(0.3, 2.0), (0.5, 5.0)] {
            let truth = dist.tail(p, theta);
            let covered = (0..100)
                .filter(|&seed| {
                    let e = mc_tail(&h, p, theta, 2_000, seed).unwrap();
                    e.ci_low <= truth && truth <= e.ci_high
                })
                .count();
            assert!(covered >= 98, "coverage {covered}/100 at p={p}");
        }
    }

    #[test]
    fn planted_examples() {
        let h = build_ap(12, 3).unwrap();
        let p = 0.3;
        let mu = exact_mean(&h, p).unwrap();
        let theta = mu + 3.0;
        let spec = FamilySpec::Ap { n: 12, k: 3 };
        let w = interval_witness(&spec, libm::ceil(theta)).unwrap().unwrap();
        let est = planted_tail(&h, p, theta, &w, 1000, 9).unwrap();
        assert_eq!(est.p_hat, libm::pow(p, w.set().count() as f64));
        assert!(est.p_hat <= exact_tail(&h, p, theta).unwrap().p_hat);

        let empty = Witness::new(&h, VertexSet::empty(12), 0.0).unwrap();
        let a = planted_tail(&h, p, 2.0, &empty, 5000, 3).unwrap();
        let b = mc_tail(&h, p, 2.0, 5000, 3).unwrap();
        assert_eq!(
            (a.p_hat, a.ci_low, a.ci_high),
            (b.p_hat, b.ci_low, b.ci_high)
        );
    }

    #[test]
    fn conditioned_examples() {
        let h = build_ap(12, 3).unwrap();
        let p = 0.4;
        let e = conditioned_tail(&h, 0.5, 1.0, 1.0, 100, 1).unwrap();
        assert!(close(e.p_hat, libm::pow(0.5, 12.0), 1e-12));
        let e = conditioned_tail(&h, 0.5, 100.0, 1.0, 100, 1).unwrap();
        assert_eq!(e.p_hat, 0.0);
        let e = conditioned_tail(&h, p, 0.0, 0.0, 100, 1).unwrap();
        assert!(close(e.p_hat, binomial_upper_tail(12, 5, p), 1e-12));
        assert!(conditioned_tail(&h, 0.5, 1.0, 1.5, 10, 1).is_err());

        let theta = exact_mean(&h, p).unwrap() + 2.0;
        let lb = conditioned_tail(&h, p, theta, 0.5, 100_000, 5).unwrap();
        assert!(lb.p_hat <= exact_tail(&h, p, theta).unwrap().p_hat);
    }

    #[test]
    fn clean_config_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        assert_eq!(
            enumerate_clean_configs(&ap4, 0).unwrap(),
            [CleanConfig { edge_ids: vec![] }]
        );
        assert_eq!(count_clean_configs(&ap4, 1).unwrap(), 2);
        let ap5 = build_ap(5, 3).unwrap();
        // {1,3,5} is edge 1 in canonical order.
        let clean = enumerate_clean_configs(&ap5, 1).unwrap();
        assert!(clean.contains(&CleanConfig { edge_ids: vec![1] }));
        assert_eq!(ap5.edge(1), [0, 2, 4]);

        let dist = ExactDistribution::enumerate(&ap4).unwrap();
        let p0 = clean_config_point_lower(&ap4, 0.5, 0, false).unwrap();
        assert!(close(p0, dist.pmf(0.5, 0), 1e-14));
        assert_eq!(clean_config_point_lower(&ap4, 0.0, 0, false).unwrap(), 1.0);
        let p1 = clean_config_point_lower(&ap4, 0.5, 1, false).unwrap();
        assert!(close(p1, 0.125, 1e-14));
        assert!(clean_config_harris_lower(&ap4, 0.5, 1, false).unwrap() <= 0.125 + 1e-15);
    }

    #[test]
    fn degree_tail_sum_matches_enumeration() {
        let h = build_ap(10, 3).unwrap();
        for r in [1.0, 2.0, 3.5] {
            for p in [0.2, 0.6] {
                let c = crate::decompose::star_size(r);
                let direct: f64 = (0..10)
                    .map(|v| {
                        exact_event_probability(&h, p, |s| {
                            h.incident(v)
                                .iter()
                                .filter(|&&e| h.is_induced(e as usize, s))
                                .count()
                                >= c
                        })
                        .unwrap()
                    })
                    .sum();
                assert!(close(degree_tail_sum(&h, p, r).unwrap(), direct, 1e-12));
            }
        }
    }

    proptest! {
        #[test]
        fn lower_bounds_stay_below_exact(n in 6usize..13, p in 0.1f64..0.7, t in 0.5f64..4.0, seed in any::<u64>()) {
            let h = build_ap(n, 3).unwrap();
            let dist = ExactDistribution::enumerate(&h).unwrap();
            let theta = exact_mean(&h, p).unwrap() + t;
            let truth = dist.tail(p, theta);
            if let Some(w) = interval_witness(&FamilySpec::Ap { n, k: 3 }, libm::ceil(theta)).unwrap() {
                prop_assert!(planted_tail(&h, p, theta, &w, 200, seed).unwrap().p_hat <= truth + 1e-12);
            }
            for m in 0..3 {
                prop_assert!(clean_config_point_lower(&h, p, m, true).unwrap() <= dist.pmf(p, m) + 1e-12);
                prop_assert!(clean_config_harris_lower(&h, p, m, false).unwrap() <= dist.pmf(p, m) + 1e-12);
            }
        }
    }
}
