//! Upper tails of edge counts in random induced subhypergraphs.
//!
//! The crate is `no_std` (with `alloc`) and carries every algorithm: uniform
//! hypergraphs and vertex bitsets, the arithmetic-progression / Schur /
//! ℓ-sum families, closed-form tail bounds in log space, the star-matching
//! sparsification machinery, a brute-force disjoint-occurrence oracle, and
//! exact / Monte Carlo tail estimators. IO, parallel fan-out and the CLI live
//! in the `uptail-cli` crate.
#![no_std]
// Negated float comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod decompose;
pub mod disjointness;
mod error;
pub mod estimate;
pub mod families;
pub mod hypergraph;
pub mod numeric;
pub mod rng;
mod vertex_set;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, VertexId};
pub use vertex_set::VertexSet;
