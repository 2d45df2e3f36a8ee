//! Parallel drivers for the estimators. Work is split into fixed chunks
//! that do not depend on the pool size, and partial results are integer
//! counts, so every worker count gives bit-identical output.

use std::ops::Range;

use rayon::prelude::*;
use uptail_core::estimate::{
    conditioned_estimate, conditioned_hits, conditioned_size, exact_estimate, mc_estimate, mc_hits,
    planted_estimate, planted_hits, ExactDistribution, TailEstimate,
};
use uptail_core::families::Witness;
use uptail_core::{Hypergraph, Result};

/// Samples per task.
pub const CHUNK: u64 = 4096;
/// Exact enumeration is split on this many top vertices.
const SPLIT_BITS: u32 = 6;

pub fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

fn chunks(samples: u64) -> Vec<Range<u64>> {
    (0..samples.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(samples))
        .collect()
}

fn count_hits(
    pool: &rayon::ThreadPool,
    samples: u64,
    f: impl Fn(Range<u64>) -> Result<u64> + Sync,
) -> Result<u64> {
    pool.install(|| {
        chunks(samples)
            .into_par_iter()
            .map(&f)
            .try_reduce(|| 0, |a, b| Ok(a + b))
    })
}

pub fn exact_distribution(pool: &rayon::ThreadPool, h: &Hypergraph) -> Result<ExactDistribution> {
    let bits = SPLIT_BITS.min(h.num_vertices() as u32);
    let parts: Vec<ExactDistribution> = pool.install(|| {
        (0..1u64 << bits)
            .into_par_iter()
            .map(|part| ExactDistribution::enumerate_part(h, bits, part))
            .collect::<Result<_>>()
    })?;
    let mut parts = parts.into_iter();
    let mut total = parts.next().expect("at least one part");
    for p in parts {
        total.merge(&p);
    }
    Ok(total)
}

pub fn exact_tail(
    pool: &rayon::ThreadPool,
    h: &Hypergraph,
    p: f64,
    threshold: f64,
) -> Result<TailEstimate> {
    Ok(exact_estimate(&exact_distribution(pool, h)?, p, threshold))
}

pub fn mc_tail(
    pool: &rayon::ThreadPool,
    h: &Hypergraph,
    p: f64,
    threshold: f64,
    samples: u64,
    seed: u64,
) -> Result<TailEstimate> {
    let hits = count_hits(pool, samples, |r| mc_hits(h, p, threshold, seed, r))?;
    Ok(mc_estimate(threshold, hits, samples))
}

pub fn planted_tail(
    pool: &rayon::ThreadPool,
    h: &Hypergraph,
    p: f64,
    threshold: f64,
    witness: &Witness,
    samples: u64,
    seed: u64,
) -> Result<TailEstimate> {
    let hits = count_hits(pool, samples, |r| {
        planted_hits(h, p, threshold, witness, seed, r)
    })?;
    planted_estimate(h, p, threshold, witness, hits, samples)
}

pub fn conditioned_tail(
    pool: &rayon::ThreadPool,
    h: &Hypergraph,
    p: f64,
    threshold: f64,
    eps: f64,
    samples: u64,
    seed: u64,
) -> Result<TailEstimate> {
    let m = conditioned_size(h, p, eps)?;
    let hits = count_hits(pool, samples, |r| {
        conditioned_hits(h, m, threshold, seed, r)
    })?;
    Ok(conditioned_estimate(h, p, m, threshold, hits, samples))
}
