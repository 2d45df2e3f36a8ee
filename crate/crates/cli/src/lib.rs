//! IO, configuration and parallel runners around `uptail-core`, plus the
//! property suites behind `uptail verify`.

// Negated float comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod format;
pub mod output;
pub mod runner;
pub mod verify;
