//! Brute-force disjoint occurrence on `{0,1}^M`.
//!
//! Outcomes are `u32` bit patterns (bit `i` is coordinate `i`); events are
//! explicit membership tables. A set `K` of coordinates certifies `A` at
//! `ω` when every outcome agreeing with `ω` on `K` lies in `A`.

use alloc::vec;
use alloc::vec::Vec;

use crate::decompose::star_size;
use crate::error::ensure;
use crate::numeric::Neumaier;
use crate::{Error, Hypergraph, Result, VertexSet};

/// Largest dimension an [`EventTable`] may have.
pub const MAX_DIM: usize = 20;
/// Largest dimension [`box_product`] accepts (it builds `3^M` tables).
pub const BOX_DIM: usize = 14;
/// Default cap on the number of events [`z_disjoint`] searches over.
pub const Z_EVENT_BUDGET: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventTable {
    m: usize,
    bits: Vec<u64>,
}

impl core::fmt::Debug for EventTable {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "EventTable(M={}, ", self.m)?;
        f.debug_set().entries(self.outcomes()).finish()?;
        write!(f, ")")
    }
}

impl EventTable {
    pub fn empty(m: usize) -> Result<Self> {
        ensure!(m <= MAX_DIM, "dimension {m} exceeds {MAX_DIM}");
        Ok(Self {
            m,
            bits: vec![0; (1usize << m).div_ceil(64)],
        })
    }

    /// `Ω`.
    pub fn full(m: usize) -> Result<Self> {
        Self::from_fn(m, |_| true)
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(u32) -> bool) -> Result<Self> {
        let mut t = Self::empty(m)?;
        for w in 0..1u32 << m {
            if f(w) {
                t.insert(w);
            }
        }
        Ok(t)
    }

    /// `{ω : ω_i = 1}`.
    pub fn coordinate(m: usize, i: usize) -> Result<Self> {
        ensure!(i < m, "coordinate {i} out of range for M={m}");
        Self::from_fn(m, |w| w >> i & 1 == 1)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn contains(&self, omega: u32) -> bool {
        let w = omega as usize;
        self.bits[w >> 6] >> (w & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, omega: u32) {
        let w = omega as usize;
        assert!(
            w < 1 << self.m,
            "outcome {omega:#b} outside dimension {}",
            self.m
        );
        self.bits[w >> 6] |= 1 << (w & 63);
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = u32> + '_ {
        (0..1u32 << self.m).filter(|&w| self.contains(w))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.m == other.m && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        Self {
            m: self.m,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// `Pr(A)` when coordinate `i` is 1 with probability `probs[i]`.
    pub fn probability(&self, probs: &[f64]) -> Result<f64> {
        ensure!(
            probs.len() == self.m,
            "need {} probabilities, got {}",
            self.m,
            probs.len()
        );
        ensure!(
            probs.iter().all(|p| (0.0..=1.0).contains(p)),
            "probabilities must lie in [0,1]"
        );
        let s: Neumaier = self
            .outcomes()
            .map(|w| {
                probs
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| if w >> i & 1 == 1 { p } else { 1.0 - p })
                    .product::<f64>()
            })
            .collect();
        Ok(s.value())
    }

    /// `cert[idx]` for every ternary cube index: digit `i` is 0 or 1 when
    /// coordinate `i` is fixed to that value, 2 when free; the entry says
    /// whether the whole cube lies in the event.
    fn cube_table(&self) -> Vec<bool> {
        let len = 3usize.pow(self.m as u32);
        let mut cert = vec![false; len];
        let pow3: Vec<usize> = (0..self.m).map(|i| 3usize.pow(i as u32)).collect();
        for idx in 0..len {
            let mut rest = idx;
            let mut omega = 0u32;
            let mut free = None;
            for (i, &p3) in pow3.iter().enumerate() {
                match rest % 3 {
                    0 => {}
                    1 => omega |= 1 << i,
                    _ => {
                        free = Some(p3);
                        break;
                    }
                }
                rest /= 3;
            }
            cert[idx] = match free {
                None => self.contains(omega),
                Some(p3) => cert[idx - 2 * p3] && cert[idx - p3],
            };
        }
        cert
    }

    /// `g[K]`: whether `K` certifies the event at `omega`, for every `K`.
    ///
    /// `K` certifies iff every flip pattern `d ⊆ [M] \ K` keeps `ω ⊕ d` in
    /// the event, so this is a subset-AND transform of `d ↦ A(ω ⊕ d)`.
    fn certificates_at(&self, omega: u32) -> Vec<bool> {
        let size = 1usize << self.m;
        let mut all: Vec<bool> = (0..size as u32).map(|d| self.contains(omega ^ d)).collect();
        for i in 0..self.m {
            for u in 0..size {
                if u >> i & 1 == 1 {
                    all[u] = all[u] && all[u ^ (1 << i)];
                }
            }
        }
        let full = size - 1;
        (0..size).map(|k| all[full ^ k]).collect()
    }

    /// Inclusion-minimal certificates of the event at `omega`.
    pub fn minimal_certificates(&self, omega: u32) -> Vec<u32> {
        let g = self.certificates_at(omega);
        (0..g.len() as u32)
            .filter(|&k| {
                g[k as usize] && (0..self.m).all(|i| k >> i & 1 == 0 || !g[(k ^ (1 << i)) as usize])
            })
            .collect()
    }
}

/// `A □ B`: outcomes where `A` and `B` have disjoint certificates.
///
/// Certificates are upward closed, so it suffices to pair each `K` with
/// its complement. Each test is a lookup in a `3^M` cube table, for `4^M`
/// work in total.
pub fn box_product(a: &EventTable, b: &EventTable) -> Result<EventTable> {
    ensure!(a.m == b.m, "dimension mismatch: {} vs {}", a.m, b.m);
    ensure!(a.m <= BOX_DIM, "box needs M <= {BOX_DIM}, got {}", a.m);
    let m = a.m;
    let ca = a.cube_table();
    let cb = b.cube_table();
    // f[mask] = Σ_{i ∈ mask} 3^i, so the cube fixing K at ω has index
    // f[K ∩ ω] + 2·f[¬K].
    let f: Vec<usize> = (0..1u32 << m)
        .map(|mask| {
            (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| 3usize.pow(i as u32))
                .sum()
        })
        .collect();
    let full = (1u32 << m) - 1;
    let cube = |omega: u32, k: u32| f[(k & omega) as usize] + 2 * f[(full ^ k) as usize];
    EventTable::from_fn(m, |omega| {
        if !a.contains(omega) || !b.contains(omega) {
            return false;
        }
        (0..=full).any(|k| ca[cube(omega, k)] && cb[cube(omega, full ^ k)])
    })
}

/// The most events among `events` certified at `omega` by pairwise
/// disjoint coordinate sets, with the default event budget.
pub fn z_disjoint(events: &[EventTable], omega: u32) -> Result<usize> {
    z_disjoint_with_budget(events, omega, Z_EVENT_BUDGET)
}

/// [`z_disjoint`] with an explicit cap on the number of events.
///
/// Searches over minimal certificates only, memoized on (event index,
/// coordinates used).
pub fn z_disjoint_with_budget(events: &[EventTable], omega: u32, budget: usize) -> Result<usize> {
    if events.len() > budget {
        return Err(Error::Capacity {
            what: "z_disjoint events",
            limit: budget as u64,
            got: events.len() as u64,
        });
    }
    let Some(first) = events.first() else {
        return Ok(0);
    };
    let m = first.m;
    ensure!(
        events.iter().all(|e| e.m == m),
        "events have different dimensions"
    );
    ensure!(m <= MAX_DIM, "dimension {m} exceeds {MAX_DIM}");
    ensure!((omega as u64) < 1u64 << m, "outcome outside dimension {m}");
    let certs: Vec<Vec<u32>> = events
        .iter()
        .map(|e| e.minimal_certificates(omega))
        .collect();
    let mut memo = vec![u8::MAX; events.len() << m];
    Ok(best_packing(&certs, 0, 0, m, &mut memo))
}

fn best_packing(certs: &[Vec<u32>], i: usize, used: u32, m: usize, memo: &mut [u8]) -> usize {
    if i == certs.len() {
        return 0;
    }
    let slot = (i << m) | used as usize;
    if memo[slot] != u8::MAX {
        return memo[slot] as usize;
    }
    let mut best = best_packing(certs, i + 1, used, m, memo);
    for &k in &certs[i] {
        if k & used == 0 {
            best = best.max(1 + best_packing(certs, i + 1, used | k, m, memo));
            if best == certs.len() - i {
                break;
            }
        }
    }
    memo[slot] = best as u8;
    best
}

/// `(Pr(A □ B), Pr(A)·Pr(B))` under the product measure `probs`. Panics if
/// the first exceeds the second by more than `1e-12`.
pub fn bk_check(a: &EventTable, b: &EventTable, probs: &[f64]) -> Result<(f64, f64)> {
    let lhs = box_product(a, b)?.probability(probs)?;
    let rhs = a.probability(probs)? * b.probability(probs)?;
    assert!(
        lhs <= rhs + 1e-12,
        "disjoint occurrence exceeds product: {lhs} > {rhs}"
    );
    Ok((lhs, rhs))
}

/// Checks `M_r(H[S]) <= Z` where `Z` counts disjointly certified degree
/// events `{deg_v >= ⌈r⌉}` at `ω = S`, with vertices as coordinates. Only
/// events occurring at `S` can be certified, so the others are dropped.
pub fn mr_le_z_check(h: &Hypergraph, s: &VertexSet, r: f64) -> Result<bool> {
    let n = h.num_vertices();
    ensure!(n <= BOX_DIM, "needs at most {BOX_DIM} vertices, got {n}");
    let mr = crate::decompose::mr_exact(h, s, r)?;
    let c = star_size(r);
    let masks = h.edge_masks().expect("n <= 14");
    let omega = s.as_mask().expect("n <= 14") as u32;
    let deg_at = |w: u32, v: usize| {
        h.incident(v)
            .iter()
            .filter(|&&e| masks[e as usize] as u32 & !w == 0)
            .count()
    };
    let mut events = Vec::new();
    for v in 0..n {
        if deg_at(omega, v) >= c {
            events.push(EventTable::from_fn(n, |w| deg_at(w, v) >= c)?);
        }
    }
    let z = z_disjoint_with_budget(&events, omega, n)?;
    Ok(mr <= z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_ap;
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;

    fn coord(m: usize, i: usize) -> EventTable {
        EventTable::coordinate(m, i).unwrap()
    }

    /// `A □ B` straight from the definition: some disjoint `K, L` with both
    /// cylinders inside their events.
    fn naive_box(a: &EventTable, b: &EventTable) -> EventTable {
        let m = a.dim();
        let full = (1u32 << m) - 1;
        let certifies =
            |e: &EventTable, w: u32, k: u32| (0..=full).all(|x| (x ^ w) & k != 0 || e.contains(x));
        EventTable::from_fn(m, |w| {
            (0..=full).any(|k| {
                certifies(a, w, k) && {
                    let rest = full ^ k;
                    let mut l = rest;
                    loop {
                        if certifies(b, w, l) {
                            break true;
                        }
                        if l == 0 {
                            break false;
                        }
                        l = (l - 1) & rest;
                    }
                }
            })
        })
        .unwrap()
    }

    fn random_event(m: usize, rng: &mut impl Rng) -> EventTable {
        let density: f64 = rng.gen_range(0.1..0.9);
        EventTable::from_fn(m, |_| rng.gen::<f64>() < density).unwrap()
    }

    fn increasing_event(m: usize, rng: &mut impl Rng) -> EventTable {
        let gens: Vec<u32> = (0..rng.gen_range(1..4))
            .map(|_| rng.gen_range(0..1u32 << m))
            .collect();
        EventTable::from_fn(m, |w| gens.iter().any(|&g| g & !w == 0)).unwrap()
    }

    #[test]
    fn box_examples() {
        let a = coord(2, 0);
        let b = coord(2, 1);
        let ab = box_product(&a, &b).unwrap();
        assert_eq!(ab.outcomes().collect::<Vec<_>>(), [0b11]);
        assert_eq!(box_product(&a, &a).unwrap().count(), 0);
        let omega = EventTable::full(2).unwrap();
        assert_eq!(box_product(&omega, &b).unwrap(), b);
        assert!(box_product(&a, &coord(3, 0)).is_err());
        assert!(box_product(
            &EventTable::full(15).unwrap(),
            &EventTable::full(15).unwrap()
        )
        .is_err());
    }

    #[test]
    fn box_matches_definition() {
        let mut rng = stream(5, 0);
        for m in 1..=5 {
            for _ in 0..40 {
                let a = random_event(m, &mut rng);
                let b = random_event(m, &mut rng);
                assert_eq!(box_product(&a, &b).unwrap(), naive_box(&a, &b));
            }
        }
    }

    #[test]
    fn z_examples() {
        let m = 4;
        let all = vec![EventTable::full(m).unwrap(); 3];
        assert_eq!(z_disjoint(&all, 0b1010).unwrap(), 3);
        assert_eq!(z_disjoint(&[coord(m, 0), coord(m, 0)], 0b1111).unwrap(), 1);
        assert_eq!(z_disjoint(&[coord(m, 0), coord(m, 1)], 0b0011).unwrap(), 2);
        assert_eq!(z_disjoint(&[coord(m, 0), coord(m, 1)], 0b0010).unwrap(), 1);
        let too_many = vec![EventTable::full(2).unwrap(); 9];
        assert!(matches!(
            z_disjoint(&too_many, 0),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn bk_examples() {
        let half = [0.5, 0.5];
        let (l, r) = bk_check(&coord(2, 0), &coord(2, 1), &half).unwrap();
        assert!((l - 0.25).abs() < 1e-15 && (r - 0.25).abs() < 1e-15);
        let (l, r) = bk_check(&coord(2, 0), &coord(2, 0), &half).unwrap();
        assert_eq!(l, 0.0);
        assert!((r - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bk_on_random_pairs() {
        let mut rng = stream(17, 0);
        let measures: [Vec<f64>; 3] = [
            vec![0.5; 8],
            vec![0.1, 0.9, 0.3, 0.7, 0.2, 0.5, 0.6, 0.05],
            (0..8).map(|_| rng.gen::<f64>()).collect(),
        ];
        for i in 0..200 {
            let (a, b) = if i % 2 == 0 {
                (random_event(8, &mut rng), random_event(8, &mut rng))
            } else {
                (increasing_event(8, &mut rng), increasing_event(8, &mut rng))
            };
            for probs in &measures {
                let (l, r) = bk_check(&a, &b, probs).unwrap();
                assert!(l <= r + 1e-12);
            }
        }
    }

    #[test]
    fn mr_le_z_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        assert!(mr_le_z_check(&ap4, &VertexSet::full(4), 1.0).unwrap());
        assert!(mr_le_z_check(&ap4, &VertexSet::from_indices(4, [0, 1]), 1.0).unwrap());
        assert!(mr_le_z_check(&build_ap(20, 3).unwrap(), &VertexSet::full(20), 1.0).is_err());
    }

    #[test]
    fn mr_le_z_on_random_instances() {
        let mut rng = stream(23, 0);
        for _ in 0..1000 {
            let n = rng.gen_range(4..=12);
            let h = if rng.gen::<bool>() {
                build_ap(n, 3).unwrap()
            } else {
                crate::families::build_schur(n).unwrap()
            };
            let s = h.sample_vp(rng.gen_range(0.3..1.0), &mut rng).unwrap();
            let r = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4)];
            assert!(mr_le_z_check(&h, &s, r).unwrap());
        }
    }

    fn arb_pair() -> impl Strategy<Value = (EventTable, EventTable, EventTable, EventTable)> {
        (1usize..6, any::<u64>()).prop_map(|(m, seed)| {
            let mut rng = stream(seed, 0);
            let a = random_event(m, &mut rng);
            let b = random_event(m, &mut rng);
            let a2 = EventTable::from_fn(m, |w| a.contains(w) || rng.gen::<f64>() < 0.3).unwrap();
            let b2 = EventTable::from_fn(m, |w| b.contains(w) || rng.gen::<f64>() < 0.3).unwrap();
            (a, b, a2, b2)
        })
    }

    proptest! {
        #[test]
        fn box_is_monotone_and_inside_intersection((a, b, a2, b2) in arb_pair()) {
            let ab = box_product(&a, &b).unwrap();
            prop_assert!(ab.is_subset(&box_product(&a2, &b2).unwrap()));
            prop_assert!(ab.is_subset(&a.intersection(&b)));
        }
    }
}
