//! Data-driven ranking of training programs with TOPSIS, plus two analyses
//! of how much each criterion drives the result: a most/least weighted
//! scenario comparison scored with the Kendall-tau distance, and a
//! variance-based main-effect (correlation ratio) estimate.
//!
//! The typical flow is
//!
//! 1. [`ingestion`] turns graduate and contract records into one
//!    [`PerformanceMatrix`] per graduation year,
//! 2. [`topsis::rank`] ranks a matrix under a [`WeightVector`],
//! 3. [`scenario::scenario_panel`] and [`gsa::pooled_main_effects`] measure
//!    criterion influence,
//! 4. [`io`] writes everything as CSV, and [`service`] exposes it over HTTP.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod error;
pub mod fixture;
pub mod gsa;
pub mod ingestion;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod rankcompare;
pub mod scenario;
pub mod service;
pub mod topsis;
pub mod weights;

pub use error::{Error, Result};
pub use model::{
    CriterionSpec, Direction, PerformanceMatrix, RankingResult, ValidationIssue, WeightVector,
};
pub use rankcompare::{kendall_tau_distance, RankPermutation};
