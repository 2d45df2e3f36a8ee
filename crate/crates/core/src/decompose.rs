//! Degree-bounded subgraphs (`X_r`), vertex-disjoint star matchings
//! (`M_r`), greedy pruning, and the dyadic cascade event.
//!
//! An r-star is a center plus `⌈r⌉` distinct edges through it. Star sizes
//! use `⌈r⌉` while thresholds keep the raw `r`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::ensure;
use crate::hypergraph::next_combination;
use crate::{Error, Hypergraph, Result, VertexSet};

/// Default cap on the number of contested edges [`xr_exact`] searches over.
pub const XR_EDGE_BUDGET: usize = 22;
/// Cap on candidate stars for [`mr_exact`].
pub const MR_STAR_BUDGET: u64 = 10_000;
/// Cap on branch-and-bound nodes for [`mr_exact`].
pub const MR_NODE_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub center: usize,
    pub edge_ids: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarMatching {
    pub r: f64,
    pub stars: Vec<Star>,
}

impl StarMatching {
    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    /// `∪ V(S)` over the stars.
    pub fn vertices(&self, h: &Hypergraph) -> VertexSet {
        let mut set = VertexSet::empty(h.num_vertices());
        for star in &self.stars {
            for &e in &star.edge_ids {
                for &v in h.edge(e) {
                    set.insert(v as usize);
                }
            }
        }
        set
    }

    /// Checks that every star has `⌈r⌉` distinct edges through its center
    /// and that the stars are vertex-disjoint.
    pub fn is_valid(&self, h: &Hypergraph) -> bool {
        let c = star_size(self.r);
        let mut used = VertexSet::empty(h.num_vertices());
        for star in &self.stars {
            let mut ids = star.edge_ids.clone();
            ids.sort_unstable();
            ids.dedup();
            if ids.len() != c || ids.len() != star.edge_ids.len() {
                return false;
            }
            let mut mine = VertexSet::empty(h.num_vertices());
            for &e in &ids {
                if e >= h.num_edges() || !h.edge(e).contains(&(star.center as u32)) {
                    return false;
                }
                for &v in h.edge(e) {
                    mine.insert(v as usize);
                }
            }
            if !mine.is_disjoint(&used) {
                return false;
            }
            used.union_with(&mine);
        }
        true
    }
}

/// `⌈r⌉`, the number of edges in an r-star.
pub fn star_size(r: f64) -> usize {
    libm::ceil(r) as usize
}

fn check_r(r: f64) -> Result<()> {
    ensure!(
        r > 0.0 && r.is_finite(),
        "r must be positive and finite, got {r}"
    );
    Ok(())
}

/// Max degree of the sub-hypergraph formed by `edge_ids`.
pub fn max_degree_of(h: &Hypergraph, edge_ids: &[usize]) -> usize {
    let mut deg = vec![0usize; h.num_vertices()];
    for &e in edge_ids {
        for &v in h.edge(e) {
            deg[v as usize] += 1;
        }
    }
    deg.into_iter().max().unwrap_or(0)
}

/// A maximal vertex-disjoint collection of r-stars in `H[S]`.
///
/// Centers are scanned in increasing id; a center with at least `⌈r⌉`
/// incident edges avoiding every blocked vertex takes the lowest-indexed
/// `⌈r⌉` of them and blocks all their vertices. Availability only shrinks
/// during the scan, so no center can be completed afterwards.
pub fn greedy_star_matching(h: &Hypergraph, s: &VertexSet, r: f64) -> Result<StarMatching> {
    check_r(r)?;
    let edges = h.induced_edges(s)?;
    Ok(greedy_on_edges(h, &edges, r))
}

/// [`greedy_star_matching`] restricted to the edges `edge_ids`.
pub fn greedy_on_edges(h: &Hypergraph, edge_ids: &[usize], r: f64) -> StarMatching {
    let c = star_size(r);
    let mut member = vec![false; h.num_edges()];
    for &e in edge_ids {
        member[e] = true;
    }
    let mut blocked = vec![false; h.num_vertices()];
    let mut stars = Vec::new();
    let mut pick = Vec::with_capacity(c);
    for v in 0..h.num_vertices() {
        if blocked[v] {
            continue;
        }
        pick.clear();
        for &e in h.incident(v) {
            let e = e as usize;
            if member[e] && h.edge(e).iter().all(|&u| !blocked[u as usize]) {
                pick.push(e);
                if pick.len() == c {
                    break;
                }
            }
        }
        if pick.len() == c {
            for &e in &pick {
                for &u in h.edge(e) {
                    blocked[u as usize] = true;
                }
            }
            stars.push(Star {
                center: v,
                edge_ids: pick.clone(),
            });
        }
    }
    StarMatching { r, stars }
}

/// Removes every edge of `edge_ids` that meets a vertex of `matching`.
fn prune_against(h: &Hypergraph, edge_ids: &[usize], matching: &StarMatching) -> Vec<usize> {
    let blocked = matching.vertices(h);
    edge_ids
        .iter()
        .copied()
        .filter(|&e| h.edge(e).iter().all(|&v| !blocked.contains(v as usize)))
        .collect()
}

/// Greedy matching on `H[S]`, then removal of all induced edges touching
/// it. The surviving edges have max degree at most `⌈r⌉ - 1`.
pub fn degree_prune(h: &Hypergraph, s: &VertexSet, r: f64) -> Result<(Vec<usize>, StarMatching)> {
    check_r(r)?;
    let induced = h.induced_edges(s)?;
    let matching = greedy_on_edges(h, &induced, r);
    let kept = prune_against(h, &induced, &matching);
    assert!(
        max_degree_of(h, &kept) < star_size(r),
        "pruned graph still has an r-star"
    );
    Ok((kept, matching))
}

/// Vertex-disjoint `⌈r⌉`-stars of `H[S]`, each reduced to its vertex set,
/// with non-minimal sets dropped (a superset can always be swapped for the
/// set it contains).
fn candidate_stars(h: &Hypergraph, s: &VertexSet, r: f64) -> Result<Vec<VertexSet>> {
    let c = star_size(r);
    let induced = h.induced_edges(s)?;
    let mut member = vec![false; h.num_edges()];
    for &e in &induced {
        member[e] = true;
    }
    let mut per_center: Vec<Vec<usize>> = Vec::new();
    let mut total: u64 = 0;
    for v in 0..h.num_vertices() {
        let mine: Vec<usize> = h
            .incident(v)
            .iter()
            .map(|&e| e as usize)
            .filter(|&e| member[e])
            .collect();
        if mine.len() >= c {
            total = total.saturating_add(binomial_u64(mine.len() as u64, c as u64));
            if total > MR_STAR_BUDGET {
                return Err(Error::Capacity {
                    what: "mr_exact candidate stars",
                    limit: MR_STAR_BUDGET,
                    got: total,
                });
            }
            per_center.push(mine);
        }
    }
    let mut sets: Vec<VertexSet> = Vec::new();
    let mut pick: Vec<usize> = Vec::with_capacity(c);
    for edges in &per_center {
        pick.clear();
        pick.extend(0..c);
        loop {
            let mut set = VertexSet::empty(h.num_vertices());
            for &i in &pick {
                for &v in h.edge(edges[i]) {
                    set.insert(v as usize);
                }
            }
            sets.push(set);
            if !next_combination(&mut pick, edges.len()) {
                break;
            }
        }
    }
    sets.sort_by_key(|a| a.count());
    let mut minimal: Vec<VertexSet> = Vec::new();
    for set in sets {
        if !minimal.iter().any(|m| m.is_subset(&set)) {
            minimal.push(set);
        }
    }
    Ok(minimal)
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u64::MAX,
        };
    }
    acc
}

struct Packing<'a> {
    sets: &'a [VertexSet],
    best: usize,
    nodes: u64,
}

impl Packing<'_> {
    fn search(&mut self, alive: &[usize], chosen: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > MR_NODE_BUDGET {
            return Err(Error::Capacity {
                what: "mr_exact search nodes",
                limit: MR_NODE_BUDGET,
                got: self.nodes,
            });
        }
        if chosen > self.best {
            self.best = chosen;
        }
        if alive.is_empty() {
            return Ok(());
        }
        // Disjoint sets cover distinct vertices, so the union size over the
        // smallest set size bounds how many more can be packed.
        let mut cover = VertexSet::empty(self.sets[alive[0]].len());
        let mut smallest = usize::MAX;
        for &i in alive {
            cover.union_with(&self.sets[i]);
            smallest = smallest.min(self.sets[i].count());
        }
        let bound = alive.len().min(cover.count() / smallest);
        if chosen + bound <= self.best {
            return Ok(());
        }
        // Branch on the lowest vertex still coverable: either one of the
        // sets through it is taken, or none is.
        let pivot = cover.iter().next().expect("nonempty cover");
        let (through, rest): (Vec<usize>, Vec<usize>) =
            alive.iter().partition(|&&i| self.sets[i].contains(pivot));
        for &i in &through {
            let next: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&j| j != i && self.sets[j].is_disjoint(&self.sets[i]))
                .collect();
            self.search(&next, chosen + 1)?;
        }
        self.search(&rest, chosen)
    }
}

/// `M_r(H[S])`: the exact maximum number of vertex-disjoint r-stars.
///
/// Branch and bound over minimal star vertex sets, seeded with the greedy
/// matching size. Fails with a capacity error when there are more than
/// [`MR_STAR_BUDGET`] candidate stars or the search exceeds
/// [`MR_NODE_BUDGET`] nodes.
pub fn mr_exact(h: &Hypergraph, s: &VertexSet, r: f64) -> Result<usize> {
    check_r(r)?;
    let greedy = greedy_star_matching(h, s, r)?.len();
    let sets = candidate_stars(h, s, r)?;
    if sets.is_empty() {
        return Ok(0);
    }
    let mut bb = Packing {
        sets: &sets,
        best: greedy,
        nodes: 0,
    };
    let all: Vec<usize> = (0..sets.len()).collect();
    bb.search(&all, 0)?;
    Ok(bb.best)
}

/// `X_r(H[S])`: the most induced edges a sub-hypergraph of max degree at
/// most `r` can keep, with the default contested-edge budget.
pub fn xr_exact(h: &Hypergraph, s: &VertexSet, r: f64) -> Result<usize> {
    xr_exact_with_budget(h, s, r, XR_EDGE_BUDGET)
}

/// [`xr_exact`] with an explicit budget.
///
/// An edge whose vertices all have induced degree at most `⌊r⌋` fits in
/// every feasible sub-hypergraph, so an optimum contains all of them. Only
/// the remaining "contested" edges are searched, include-first with a
/// remaining-count bound; there must be at most `budget` of them.
pub fn xr_exact_with_budget(h: &Hypergraph, s: &VertexSet, r: f64, budget: usize) -> Result<usize> {
    check_r(r)?;
    let cap = libm::floor(r) as usize;
    let induced = h.induced_edges(s)?;
    let deg = h.induced_degrees(s)?;
    if deg.iter().all(|&d| d <= cap) {
        return Ok(induced.len());
    }
    let (free, contested): (Vec<usize>, Vec<usize>) = induced
        .iter()
        .partition(|&&e| h.edge(e).iter().all(|&v| deg[v as usize] <= cap));
    if contested.len() > budget {
        return Err(Error::Capacity {
            what: "xr_exact contested edges",
            limit: budget as u64,
            got: contested.len() as u64,
        });
    }
    let mut load = vec![0usize; h.num_vertices()];
    for &e in &free {
        for &v in h.edge(e) {
            load[v as usize] += 1;
        }
    }
    let mut best = 0;
    xr_search(h, &contested, 0, 0, cap, &mut load, &mut best);
    Ok(free.len() + best)
}

fn xr_search(
    h: &Hypergraph,
    edges: &[usize],
    i: usize,
    taken: usize,
    cap: usize,
    load: &mut [usize],
    best: &mut usize,
) {
    if taken > *best {
        *best = taken;
    }
    if i == edges.len() || taken + (edges.len() - i) <= *best {
        return;
    }
    let e = h.edge(edges[i]);
    if e.iter().all(|&v| load[v as usize] < cap) {
        for &v in e {
            load[v as usize] += 1;
        }
        xr_search(h, edges, i + 1, taken + 1, cap, load, best);
        for &v in e {
            load[v as usize] -= 1;
        }
    }
    xr_search(h, edges, i + 1, taken, cap, load, best);
}

/// Parameters of the cascade event: `s = ln(e/p^γ)` and `r_j = 2^j·r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CascadeParams {
    pub beta: f64,
    pub gamma: f64,
    pub r: f64,
    pub t: f64,
    pub s: f64,
}

impl CascadeParams {
    pub fn new(beta: f64, gamma: f64, r: f64, t: f64, p: f64) -> Result<Self> {
        ensure!(beta > 0.0 && beta <= 1.0, "beta {beta} outside (0,1]");
        ensure!(
            gamma > 0.0 && gamma <= 0.125,
            "gamma {gamma} outside (0,1/8]"
        );
        ensure!(r > 0.0 && r.is_finite(), "r must be positive, got {r}");
        ensure!(t > 0.0 && t.is_finite(), "t must be positive, got {t}");
        ensure!(p > 0.0 && p <= 1.0, "probability {p} outside (0,1]");
        Ok(Self {
            beta,
            gamma,
            r,
            t,
            s: 1.0 - gamma * libm::log(p),
        })
    }

    pub fn r_j(&self, j: u32) -> f64 {
        self.r * libm::pow(2.0, j as f64)
    }

    /// The smallest `J >= 0` with `r_J >= √t`.
    pub fn top_level(&self) -> u32 {
        let target = libm::sqrt(self.t);
        let mut j = 0;
        while self.r_j(j) < target {
            j += 1;
        }
        j
    }

    /// The strict upper bound the cascade event puts on `M_{r_j}`.
    pub fn level_threshold(&self, j: u32) -> f64 {
        let rj = self.r_j(j);
        let root = libm::sqrt(self.t);
        if rj < root / self.s {
            self.beta * root * self.s / rj
        } else {
            self.beta * root / rj
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PruneLevel {
    pub j: u32,
    pub r_j: f64,
    pub matching: StarMatching,
    pub removed: usize,
    /// Max degree of the edge set this level pruned.
    pub degree_before: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadePrune {
    pub kept: Vec<usize>,
    /// Levels in processing order, `J` first.
    pub levels: Vec<PruneLevel>,
}

/// Prunes `H[S]` level by level, `j = J` down to `0`, each time removing
/// the edges that meet a greedy `r_j`-star matching of what is left.
///
/// Level `J` is applied to `H[S]` itself. When the cascade event holds it
/// finds no star there, and in general it makes `Δ_1(G_0) <= ⌊r⌋` hold
/// unconditionally; with `J = 0` the whole procedure is [`degree_prune`].
pub fn cascade_prune(
    h: &Hypergraph,
    s: &VertexSet,
    params: &CascadeParams,
) -> Result<CascadePrune> {
    ensure!(params.r >= 1.0, "cascade needs r >= 1, got {}", params.r);
    let mut kept = h.induced_edges(s)?;
    let mut levels = Vec::new();
    for j in (0..=params.top_level()).rev() {
        let rj = params.r_j(j);
        let degree_before = max_degree_of(h, &kept);
        let matching = greedy_on_edges(h, &kept, rj);
        let next = prune_against(h, &kept, &matching);
        levels.push(PruneLevel {
            j,
            r_j: rj,
            removed: kept.len() - next.len(),
            matching,
            degree_before,
        });
        kept = next;
    }
    assert!(
        max_degree_of(h, &kept) <= libm::floor(params.r) as usize,
        "cascade left a vertex above degree r"
    );
    Ok(CascadePrune { kept, levels })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelCheck {
    pub j: u32,
    pub r_j: f64,
    pub threshold: f64,
    pub greedy: usize,
    /// `None` when the exact search was skipped or over budget.
    pub exact: Option<usize>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeCheck {
    pub verdict: Verdict,
    pub levels: Vec<LevelCheck>,
}

/// Evaluates the cascade event: `M_{r_j}(H[S])` below its level threshold
/// for every `j`.
///
/// Levels with `r_j > max{2√t, Δ_1(H[S])}` have no stars and are skipped.
/// A greedy matching at or above a threshold settles the level as false;
/// otherwise the exact matching number decides, and a level whose exact
/// search is over budget is indeterminate. Scanning stops at the first
/// false level.
pub fn check_cascade_event(
    h: &Hypergraph,
    s: &VertexSet,
    params: &CascadeParams,
) -> Result<CascadeCheck> {
    let induced = h.induced_edges(s)?;
    let delta = max_degree_of(h, &induced) as f64;
    let limit = (2.0 * libm::sqrt(params.t)).max(delta);
    let mut levels = Vec::new();
    let mut overall = Verdict::True;
    let mut j = 0;
    while params.r_j(j) <= limit {
        let rj = params.r_j(j);
        let threshold = params.level_threshold(j);
        let greedy = greedy_on_edges(h, &induced, rj).len();
        let (exact, verdict) = if greedy as f64 >= threshold {
            (None, Verdict::False)
        } else if (star_size(rj) as f64) > delta {
            (Some(0), Verdict::True)
        } else {
            match mr_exact(h, s, rj) {
                Ok(m) if m as f64 >= threshold => (Some(m), Verdict::False),
                Ok(m) => (Some(m), Verdict::True),
                Err(Error::Capacity { .. }) => (None, Verdict::Indeterminate),
                Err(e) => return Err(e),
            }
        };
        levels.push(LevelCheck {
            j,
            r_j: rj,
            threshold,
            greedy,
            exact,
            verdict,
        });
        match verdict {
            Verdict::False => {
                overall = Verdict::False;
                break;
            }
            Verdict::Indeterminate => overall = Verdict::Indeterminate,
            Verdict::True => {}
        }
        j += 1;
    }
    Ok(CascadeCheck {
        verdict: overall,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_ap;
    use crate::rng::stream;
    use proptest::prelude::*;

    fn full(h: &Hypergraph) -> VertexSet {
        VertexSet::full(h.num_vertices())
    }

    #[test]
    fn xr_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        assert_eq!(xr_exact(&ap4, &full(&ap4), 1.0).unwrap(), 1);
        assert_eq!(xr_exact(&ap4, &full(&ap4), 2.0).unwrap(), 2);
        let ap9 = build_ap(9, 3).unwrap();
        let s = full(&ap9);
        assert_eq!(xr_exact(&ap9, &s, 100.0).unwrap(), ap9.num_edges());
        assert!(xr_exact(&build_ap(40, 3).unwrap(), &VertexSet::full(40), 2.0).is_err());
    }

    #[test]
    fn greedy_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        let m = greedy_star_matching(&ap4, &full(&ap4), 1.0).unwrap();
        assert_eq!(
            m.stars,
            [Star {
                center: 0,
                edge_ids: vec![0]
            }]
        );
        assert!(greedy_star_matching(&ap4, &full(&ap4), 2.5)
            .unwrap()
            .is_empty());
        let two = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert_eq!(
            greedy_star_matching(&two, &full(&two), 1.0).unwrap().len(),
            2
        );
    }

    #[test]
    fn mr_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        assert_eq!(mr_exact(&ap4, &full(&ap4), 1.0).unwrap(), 1);
        assert_eq!(mr_exact(&ap4, &VertexSet::empty(4), 1.0).unwrap(), 0);
    }

    #[test]
    fn degree_prune_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        let (kept, m) = degree_prune(&ap4, &full(&ap4), 1.0).unwrap();
        assert!(kept.is_empty());
        assert_eq!(m.len(), 1);
        // Stars have ⌈r⌉ edges, so degree 2 is still a star at r = 2.
        let (kept, m) = degree_prune(&ap4, &full(&ap4), 2.0).unwrap();
        assert!(kept.is_empty());
        assert_eq!(m.len(), 1);
        let (kept, m) = degree_prune(&ap4, &full(&ap4), 2.5).unwrap();
        assert_eq!(kept, [0, 1]);
        assert!(m.is_empty());
    }

    #[test]
    fn cascade_examples() {
        let ap = build_ap(20, 3).unwrap();
        let s = ap.sample_vp(0.6, &mut stream(3, 0)).unwrap();
        // t <= r² gives a single level that matches degree_prune.
        let params = CascadeParams::new(0.1, 0.1, 3.0, 9.0, 0.6).unwrap();
        assert_eq!(params.top_level(), 0);
        let c = cascade_prune(&ap, &s, &params).unwrap();
        let (kept, m) = degree_prune(&ap, &s, 3.0).unwrap();
        assert_eq!(c.kept, kept);
        assert_eq!(c.levels[0].matching, m);

        let sparse = VertexSet::from_indices(20, [0, 1, 2]);
        let params = CascadeParams::new(0.1, 0.1, 1.5, 400.0, 0.6).unwrap();
        let c = cascade_prune(&ap, &sparse, &params).unwrap();
        assert_eq!(c.kept, ap.induced_edges(&sparse).unwrap());
        assert!(c.levels.iter().all(|l| l.matching.is_empty()));
        assert_eq!(
            check_cascade_event(&ap, &sparse, &params).unwrap().verdict,
            Verdict::True
        );
    }

    #[test]
    fn cascade_event_fails_on_a_star_under_small_threshold() {
        let ap4 = build_ap(4, 3).unwrap();
        // β√t·s/r < 1 at level 0, and an r-star exists.
        let params = CascadeParams::new(0.01, 0.1, 1.0, 4.0, 0.5).unwrap();
        assert!(params.level_threshold(0) < 1.0);
        assert_eq!(
            check_cascade_event(&ap4, &full(&ap4), &params)
                .unwrap()
                .verdict,
            Verdict::False
        );
    }

    #[test]
    fn cascade_params_validate() {
        assert!(CascadeParams::new(0.0, 0.1, 1.0, 1.0, 0.5).is_err());
        assert!(CascadeParams::new(0.5, 0.2, 1.0, 1.0, 0.5).is_err());
        assert!(CascadeParams::new(0.5, 0.1, 1.0, 1.0, 0.0).is_err());
        let p = CascadeParams::new(0.5, 0.1, 1.5, 10.0, 0.5).unwrap();
        assert!(p.s >= 1.0);
        assert_eq!(p.r_j(3), 12.0);
    }

    /// Best packing over every subset of the candidate stars.
    fn naive_mr(h: &Hypergraph, s: &VertexSet, r: f64) -> usize {
        let c = star_size(r);
        let induced = h.induced_edges(s).unwrap();
        let mut stars: Vec<VertexSet> = Vec::new();
        for v in 0..h.num_vertices() {
            let mine: Vec<usize> = induced
                .iter()
                .copied()
                .filter(|&e| h.edge(e).contains(&(v as u32)))
                .collect();
            if mine.len() < c {
                continue;
            }
            for mask in 0u32..1 << mine.len() {
                if mask.count_ones() as usize == c {
                    let mut set = VertexSet::empty(h.num_vertices());
                    for (i, &e) in mine.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            h.edge(e).iter().for_each(|&u| set.insert(u as usize));
                        }
                    }
                    stars.push(set);
                }
            }
        }
        assert!(stars.len() <= 16);
        let mut best = 0;
        for mask in 0u32..1 << stars.len() {
            let chosen: Vec<&VertexSet> = (0..stars.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &stars[i])
                .collect();
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(i, a)| chosen[i + 1..].iter().all(|b| a.is_disjoint(b)));
            if ok {
                best = best.max(chosen.len());
            }
        }
        best
    }

    /// Largest edge subset of max degree <= r, over all subsets.
    fn naive_xr(h: &Hypergraph, s: &VertexSet, r: f64) -> usize {
        let induced = h.induced_edges(s).unwrap();
        let cap = libm::floor(r) as usize;
        let mut best = 0;
        for mask in 0u32..1 << induced.len() {
            let sub: Vec<usize> = (0..induced.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| induced[i])
                .collect();
            if max_degree_of(h, &sub) <= cap {
                best = best.max(sub.len());
            }
        }
        best
    }

    fn small_instance() -> impl Strategy<Value = (Hypergraph, VertexSet)> {
        (5usize..14, any::<u64>(), 0.3f64..0.9).prop_map(|(n, seed, p)| {
            let h = build_ap(n, 3).unwrap();
            let s = h.sample_vp(p, &mut stream(seed, 0)).unwrap();
            (h, s)
        })
    }

    proptest! {
        #[test]
        fn greedy_is_valid_maximal_and_deterministic((h, s) in small_instance(), r in 0.5f64..4.0) {
            let m = greedy_star_matching(&h, &s, r).unwrap();
            prop_assert!(m.is_valid(&h));
            prop_assert_eq!(&m, &greedy_star_matching(&h, &s, r).unwrap());
            let (kept, _) = degree_prune(&h, &s, r).unwrap();
            prop_assert!(max_degree_of(&h, &kept) < star_size(r));
        }

        #[test]
        fn mr_matches_naive_on_small_instances((h, s) in small_instance(), r in 0.5f64..3.0) {
            let induced = h.induced_edges(&s).unwrap();
            let c = star_size(r);
            let stars: usize = (0..h.num_vertices()).map(|v| {
                let d = induced.iter().filter(|&&e| h.edge(e).contains(&(v as u32))).count();
                if d >= c { binomial_u64(d as u64, c as u64) as usize } else { 0 }
            }).sum();
            prop_assume!(stars <= 12);
            let exact = mr_exact(&h, &s, r).unwrap();
            prop_assert_eq!(exact, naive_mr(&h, &s, r));
            prop_assert!(exact >= greedy_star_matching(&h, &s, r).unwrap().len());
        }

        #[test]
        fn xr_matches_naive((h, s) in small_instance(), r in 0.5f64..4.0) {
            prop_assume!(h.induced_edge_count(&s).unwrap() <= 16);
            prop_assert_eq!(xr_exact(&h, &s, r).unwrap(), naive_xr(&h, &s, r));
        }

        #[test]
        fn degree_matching_equivalence((h, s) in small_instance(), z in 1usize..4) {
            let delta = max_degree_of(&h, &h.induced_edges(&s).unwrap());
            let m = mr_exact(&h, &s, z as f64).unwrap();
            prop_assert_eq!(delta >= z, m >= 1);
        }

        #[test]
        fn cascade_accounting((h, s) in small_instance(), r in 1.0f64..3.0, t in 0.5f64..60.0) {
            let params = CascadeParams::new(0.05, 0.1, r, t, 0.5).unwrap();
            let c = cascade_prune(&h, &s, &params).unwrap();
            let x = h.induced_edge_count(&s).unwrap() as f64;
            let k = h.k() as f64;
            let top = params.top_level();
            let mut budget = 0.0;
            for l in &c.levels {
                budget += if l.j == top {
                    (l.matching.len() * star_size(l.r_j) * h.k() * l.degree_before) as f64
                } else {
                    l.matching.len() as f64 * 4.0 * k * l.r_j * l.r_j
                };
            }
            prop_assert!(x - c.kept.len() as f64 <= budget + 1e-9);
            prop_assert!(max_degree_of(&h, &c.kept) as f64 <= r);
        }
    }
}
