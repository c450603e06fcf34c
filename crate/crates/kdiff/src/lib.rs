//! Exact intersection theory on genus-zero strata of k-differentials.

pub mod bq;
pub mod cache;
pub mod cli;
pub mod cover;
pub mod cyclotomic;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod rat;
pub mod selftest;
pub mod stratum;
pub mod taut;

pub use error::{Error, Result};
pub use stratum::{validate, Leg, LegId, ResidueCondition, ResidueEquation, StratumSpec};
