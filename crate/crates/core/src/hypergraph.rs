use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::ensure;
use crate::{Error, Result, VertexSet};

pub type VertexId = u32;

/// An immutable k-uniform hypergraph on `{0, .., N-1}`.
///
/// Edges are stored flat in lexicographic order, each strictly increasing,
/// so two hypergraphs built from the same edge set in any order compare
/// equal. The incidence index is CSR: `inc[inc_start[v]..inc_start[v+1]]`
/// lists the edges through `v` in increasing edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<VertexId>,
    inc_start: Vec<usize>,
    inc: Vec<u32>,
}

impl Hypergraph {
    /// Validates and canonicalizes `edges`. Each edge is sorted; repeated
    /// vertices inside an edge, out-of-range ids and duplicate edges are
    /// rejected.
    pub fn new<E, I>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        ensure!(k >= 1, "edge uniformity must be positive");
        ensure!(n >= 1, "vertex count must be positive");
        ensure!(
            n <= u32::MAX as usize,
            "vertex count {n} does not fit in u32"
        );
        let mut rows: Vec<Vec<VertexId>> = Vec::new();
        for e in edges {
            let e = e.as_ref();
            ensure!(
                e.len() == k,
                "edge {e:?} has {} vertices, expected {k}",
                e.len()
            );
            let mut row: Vec<VertexId> = Vec::with_capacity(k);
            for &v in e {
                ensure!(v < n, "vertex {v} out of range 0..{n}");
                row.push(v as VertexId);
            }
            row.sort_unstable();
            ensure!(
                row.windows(2).all(|w| w[0] < w[1]),
                "edge {e:?} repeats a vertex"
            );
            rows.push(row);
        }
        rows.sort_unstable();
        if let Some(w) = rows.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Contract(alloc::format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self::from_sorted_rows(k, n, rows.concat()))
    }

    pub fn empty(k: usize, n: usize) -> Self {
        Self::from_sorted_rows(k.max(1), n, Vec::new())
    }

    /// `flat` must already be canonical.
    pub(crate) fn from_sorted_rows(k: usize, n: usize, flat: Vec<VertexId>) -> Self {
        let mut inc_start = vec![0usize; n + 1];
        for &v in &flat {
            inc_start[v as usize + 1] += 1;
        }
        for v in 0..n {
            inc_start[v + 1] += inc_start[v];
        }
        let mut fill = inc_start.clone();
        let mut inc = vec![0u32; flat.len()];
        for (i, e) in flat.chunks_exact(k).enumerate() {
            for &v in e {
                inc[fill[v as usize]] = i as u32;
                fill[v as usize] += 1;
            }
        }
        Self {
            k,
            n,
            edges: flat,
            inc_start,
            inc,
        }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len() / self.k
    }

    #[inline]
    pub fn edge(&self, i: usize) -> &[VertexId] {
        &self.edges[i * self.k..(i + 1) * self.k]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[VertexId]> + '_ {
        self.edges.chunks_exact(self.k)
    }

    /// Edge indices through `v`, ascending.
    #[inline]
    pub fn incident(&self, v: usize) -> &[u32] {
        &self.inc[self.inc_start[v]..self.inc_start[v + 1]]
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        if s.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: s.len(),
            });
        }
        Ok(())
    }

    #[inline]
    pub fn is_induced(&self, edge: usize, s: &VertexSet) -> bool {
        self.edge(edge).iter().all(|&v| s.contains(v as usize))
    }

    /// `e(H[S])` by k bit tests per edge.
    pub fn induced_edge_count(&self, s: &VertexSet) -> Result<usize> {
        self.check_set(s)?;
        Ok(self
            .edges()
            .filter(|e| e.iter().all(|&v| s.contains(v as usize)))
            .count())
    }

    /// Same value as [`Self::induced_edge_count`], visiting only edges whose
    /// smallest vertex is in `S`. Faster when `S` is sparse.
    pub fn induced_edge_count_filtered(&self, s: &VertexSet) -> Result<usize> {
        self.check_set(s)?;
        let mut count = 0;
        for v in s.iter() {
            for &ei in self.incident(v) {
                let e = self.edge(ei as usize);
                if e[0] as usize == v && e[1..].iter().all(|&u| s.contains(u as usize)) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Indices of the edges of `H[S]`, ascending.
    pub fn induced_edges(&self, s: &VertexSet) -> Result<Vec<usize>> {
        self.check_set(s)?;
        Ok((0..self.num_edges())
            .filter(|&i| self.is_induced(i, s))
            .collect())
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        ensure!(v < self.n, "vertex {v} out of range 0..{}", self.n);
        Ok(self.incident(v).len())
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n)
            .map(|v| self.incident(v).len())
            .max()
            .unwrap_or(0)
    }

    /// `Δ_j`: the largest number of edges sharing a common j-set.
    ///
    /// Collects the j-subsets of every edge, sorts them and takes the longest
    /// run, so the cost is `O(e(H)·C(k,j)·log)` regardless of N.
    pub fn delta_j(&self, j: usize) -> Result<usize> {
        ensure!(
            (1..=self.k).contains(&j),
            "codegree order {j} outside 1..={}",
            self.k
        );
        if j == 1 {
            return Ok(self.max_degree());
        }
        let mut keys: Vec<Vec<VertexId>> = Vec::new();
        let mut pick: Vec<usize> = (0..j).collect();
        for e in self.edges() {
            for (slot, p) in pick.iter_mut().enumerate() {
                *p = slot;
            }
            loop {
                keys.push(pick.iter().map(|&i| e[i]).collect());
                if !next_combination(&mut pick, self.k) {
                    break;
                }
            }
        }
        keys.sort_unstable();
        let mut best = 0;
        let mut i = 0;
        while i < keys.len() {
            let mut j2 = i + 1;
            while j2 < keys.len() && keys[j2] == keys[i] {
                j2 += 1;
            }
            best = best.max(j2 - i);
            i = j2;
        }
        Ok(best)
    }

    /// Vertex degrees in `H[S]`.
    pub fn induced_degrees(&self, s: &VertexSet) -> Result<Vec<usize>> {
        self.check_set(s)?;
        let mut deg = vec![0usize; self.n];
        for e in self.edges() {
            if e.iter().all(|&v| s.contains(v as usize)) {
                for &v in e {
                    deg[v as usize] += 1;
                }
            }
        }
        Ok(deg)
    }

    /// One `u64` membership mask per edge; `None` when `N > 64`.
    pub fn edge_masks(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some(
            self.edges()
                .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v))
                .collect(),
        )
    }

    /// `V_p(H)`: every vertex kept independently with probability `p`.
    pub fn sample_vp<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> Result<VertexSet> {
        ensure!((0.0..=1.0).contains(&p), "probability {p} outside [0,1]");
        let mut s = VertexSet::empty(self.n);
        for v in 0..self.n {
            if rng.gen::<f64>() < p {
                s.insert(v);
            }
        }
        Ok(s)
    }

    /// `V_m(H)`: a uniform m-subset, by a partial Fisher-Yates shuffle.
    pub fn sample_vm<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Result<VertexSet> {
        ensure!(
            m <= self.n,
            "subset size {m} exceeds vertex count {}",
            self.n
        );
        let mut perm: Vec<u32> = (0..self.n as u32).collect();
        let mut s = VertexSet::empty(self.n);
        for i in 0..m {
            let j = rng.gen_range(i..self.n);
            perm.swap(i, j);
            s.insert(perm[i] as usize);
        }
        Ok(s)
    }
}

/// Advances `pick` (strictly increasing, values `< n`) to the next
/// combination in lexicographic order; false once exhausted.
pub(crate) fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let j = pick.len();
    let mut i = j;
    while i > 0 {
        i -= 1;
        if pick[i] < n - j + i {
            pick[i] += 1;
            for t in i + 1..j {
                pick[t] = pick[t - 1] + 1;
            }
            return true;
        }
    }
    false
}
