//! Arithmetic progressions, Schur triples and `x + y = ℓz` triples over
//! `[n] = {1, .., n}`, plus clustering witnesses.
//!
//! Family parameters use the 1-based ground set; the built hypergraphs use
//! vertex `i - 1` for the integer `i`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::ensure;
use crate::{Hypergraph, Result, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Ap { n: usize, k: usize },
    Schur { n: usize },
    EllSum { n: usize, ell: usize },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.n() >= 1, "ground set size must be positive");
        match *self {
            FamilySpec::Ap { k, .. } => ensure!(k >= 2, "progression length {k} < 2"),
            FamilySpec::EllSum { ell, .. } => ensure!(ell >= 1, "ell must be positive"),
            FamilySpec::Schur { .. } => {}
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match *self {
            FamilySpec::Ap { n, .. } | FamilySpec::Schur { n } | FamilySpec::EllSum { n, .. } => n,
        }
    }

    pub fn k(&self) -> usize {
        match *self {
            FamilySpec::Ap { k, .. } => k,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FamilySpec::Ap { .. } => "ap",
            FamilySpec::Schur { .. } => "schur",
            FamilySpec::EllSum { .. } => "ell_sum",
        }
    }

    pub fn with_n(self, n: usize) -> Self {
        match self {
            FamilySpec::Ap { k, .. } => FamilySpec::Ap { n, k },
            FamilySpec::Schur { .. } => FamilySpec::Schur { n },
            FamilySpec::EllSum { ell, .. } => FamilySpec::EllSum { n, ell },
        }
    }

    pub fn build(&self) -> Result<Hypergraph> {
        match *self {
            FamilySpec::Ap { n, k } => build_ap(n, k),
            FamilySpec::Schur { n } => build_schur(n),
            FamilySpec::EllSum { n, ell } => build_ell_sum(n, ell),
        }
    }

    /// `e(H[[m]])`, the number of edges inside `{1, .., m}`. All three
    /// families are closed under restriction to a prefix, so this is also
    /// the edge count of the family at ground set size `m`.
    pub fn prefix_edge_count(&self, m: usize) -> u64 {
        let m = m.min(self.n()) as u64;
        match *self {
            FamilySpec::Ap { k, .. } => {
                let k = k as u64 - 1;
                if m == 0 {
                    return 0;
                }
                (1..=(m - 1) / k).map(|d| m - k * d).sum()
            }
            FamilySpec::Schur { .. } => (3..=m).map(|s| (s - 1) / 2).sum(),
            FamilySpec::EllSum { ell, .. } => ell_sum_triples(m as usize, ell).len() as u64,
        }
    }
}

fn finish(k: usize, n: usize, rows: BTreeSet<Vec<u32>>) -> Hypergraph {
    Hypergraph::from_sorted_rows(k, n, rows.into_iter().flatten().collect())
}

/// All k-term arithmetic progressions with positive difference in `[n]`.
/// Empty (not an error) when `k > n`.
pub fn build_ap(n: usize, k: usize) -> Result<Hypergraph> {
    FamilySpec::Ap { n, k }.validate()?;
    let mut rows = BTreeSet::new();
    for d in 1..n.max(2) {
        if (k - 1) * d >= n {
            break;
        }
        for a in 0..n - (k - 1) * d {
            rows.insert((0..k).map(|i| (a + i * d) as u32).collect());
        }
    }
    Ok(finish(k, n, rows))
}

/// Triples `{x, y, x + y}` with `1 <= x < y` and `x + y <= n`.
pub fn build_schur(n: usize) -> Result<Hypergraph> {
    build_ell_sum(n, 1)
}

/// Triples of distinct `x, y, z` in `[n]` with `x + y = ℓz`.
pub fn build_ell_sum(n: usize, ell: usize) -> Result<Hypergraph> {
    FamilySpec::EllSum { n, ell }.validate()?;
    let rows = ell_sum_triples(n, ell)
        .into_iter()
        .map(|t| t.iter().map(|&v| (v - 1) as u32).collect())
        .collect();
    Ok(finish(3, n, rows))
}

fn ell_sum_triples(n: usize, ell: usize) -> BTreeSet<[usize; 3]> {
    let mut out = BTreeSet::new();
    for x in 1..=n {
        for y in x + 1..=n {
            let s = x + y;
            if s % ell != 0 {
                continue;
            }
            let z = s / ell;
            if z > n || z == x || z == y {
                continue;
            }
            let mut t = [x, y, z];
            t.sort_unstable();
            out.insert(t);
        }
    }
    out
}

/// A vertex set `W` with `e(H[W]) >= x`, and the ratio
/// `D_used = |W| / max{√x, 1}` it achieves.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    set: VertexSet,
    d_used: f64,
    x: f64,
}

impl Witness {
    /// Fails unless `W` induces at least `x` edges of `h`.
    pub fn new(h: &Hypergraph, set: VertexSet, x: f64) -> Result<Self> {
        ensure!(x >= 0.0, "witness target {x} is negative");
        let e = h.induced_edge_count(&set)?;
        ensure!(e as f64 >= x, "witness induces {e} edges, fewer than {x}");
        Ok(Self::unchecked(set, x))
    }

    fn unchecked(set: VertexSet, x: f64) -> Self {
        let d_used = set.count() as f64 / libm::sqrt(x).max(1.0);
        Self { set, d_used, x }
    }

    pub fn set(&self) -> &VertexSet {
        &self.set
    }

    pub fn d_used(&self) -> f64 {
        self.d_used
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn is_valid_for(&self, h: &Hypergraph) -> bool {
        h.induced_edge_count(&self.set)
            .is_ok_and(|e| e as f64 >= self.x)
            && self.set.count() as f64 <= self.d_used * libm::sqrt(self.x).max(1.0) * (1.0 + 1e-12)
    }
}

/// The shortest prefix `[m]` inducing at least `x` edges, or `None` when
/// even `[n]` falls short.
pub fn interval_witness(spec: &FamilySpec, x: f64) -> Result<Option<Witness>> {
    spec.validate()?;
    ensure!(x >= 0.0, "witness target {x} is negative");
    let n = spec.n();
    let enough = |m: usize| spec.prefix_edge_count(m) as f64 >= x;
    if !enough(n) {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if enough(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(Witness::unchecked(
        VertexSet::from_indices(n, 0..lo),
        x,
    )))
}

/// Grows `W` one vertex at a time, always adding the vertex that completes
/// the most new edges. Ties go to the vertex whose incident edges already
/// have the most vertices inside `W` (counting one per edge as well), then
/// to the lowest id; without that middle key a sparse hypergraph would be
/// filled in id order.
pub fn greedy_witness(h: &Hypergraph, x: f64) -> Result<Option<Witness>> {
    ensure!(x >= 0.0, "witness target {x} is negative");
    let n = h.num_vertices();
    let k = h.k();
    let mut set = VertexSet::empty(n);
    let mut inside = alloc::vec![0usize; h.num_edges()];
    let mut induced = 0usize;
    while (induced as f64) < x {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in (0..n).filter(|&v| !set.contains(v)) {
            let inc = h.incident(v);
            let gain = inc.iter().filter(|&&e| inside[e as usize] == k - 1).count();
            let partial = inc.iter().map(|&e| 1 + inside[e as usize]).sum();
            if best.is_none_or(|(g, p, _)| (gain, partial) > (g, p)) {
                best = Some((gain, partial, v));
            }
        }
        let Some((gain, _, v)) = best else {
            return Ok(None);
        };
        set.insert(v);
        induced += gain;
        for &e in h.incident(v) {
            inside[e as usize] += 1;
        }
    }
    Ok(Some(Witness::unchecked(set, x)))
}
