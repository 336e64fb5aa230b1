//! Most/least weighted scenario comparison.
//!
//! For each criterion the matrix is ranked twice: once with that criterion
//! weighted `ratio` times every other criterion, once with every other
//! criterion weighted `ratio` times it. The relative Kendall-tau distance
//! between the two rankings measures how much the final order depends on the
//! weight given to that criterion. No expert weights are involved.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{PerformanceMatrix, RankingResult};
use crate::rankcompare::kendall_tau_distance;
use crate::topsis;
use crate::weights::{scenario_weights_with_ratio, ScenarioKind, DEFAULT_SCENARIO_RATIO};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub criterion_id: String,
    pub ranking_most: RankingResult,
    pub ranking_least: RankingResult,
    /// Relative Kendall-tau distance between the two rankings, in `[0, 1]`.
    pub distance: f64,
}

pub fn scenario_analysis(matrix: &PerformanceMatrix) -> Result<Vec<ScenarioResult>> {
    scenario_analysis_with_ratio(matrix, DEFAULT_SCENARIO_RATIO)
}

pub fn scenario_analysis_with_ratio(
    matrix: &PerformanceMatrix,
    ratio: f64,
) -> Result<Vec<ScenarioResult>> {
    let n = matrix.n();
    if n < 2 {
        return Err(Error::TooFewCriteria { needed: 2, got: n });
    }
    let issues = matrix.issues();
    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }
    (0..n)
        .into_par_iter()
        .map(|j| {
            let most = scenario_weights_with_ratio(n, j, ScenarioKind::MostWeighted, ratio)?;
            let least = scenario_weights_with_ratio(n, j, ScenarioKind::LeastWeighted, ratio)?;
            let ranking_most = topsis::rank(matrix, &most)?;
            let ranking_least = topsis::rank(matrix, &least)?;
            let distance = kendall_tau_distance(&ranking_most.order(), &ranking_least.order())?;
            Ok(ScenarioResult {
                criterion_id: matrix.criteria()[j].id.clone(),
                ranking_most,
                ranking_least,
                distance,
            })
        })
        .collect()
}

/// Boxplot statistics; quartiles use linear interpolation between order statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiveNumberSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl FiveNumberSummary {
    /// Returns `None` for an empty sample.
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Self {
            min: v[0],
            q1: quantile_sorted(&v, 0.25),
            median: quantile_sorted(&v, 0.5),
            q3: quantile_sorted(&v, 0.75),
            max: v[v.len() - 1],
        })
    }

    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

fn quantile_sorted(v: &[f64], p: f64) -> f64 {
    let h = (v.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(v.len() - 1);
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionDistribution {
    pub criterion_id: String,
    /// `(year, D_j)` in ascending year order.
    pub distances: Vec<(i32, f64)>,
    pub summary: FiveNumberSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioPanel {
    pub per_year: BTreeMap<i32, Vec<ScenarioResult>>,
    /// One entry per criterion, in criterion order.
    pub criteria: Vec<CriterionDistribution>,
}

/// Runs the scenario analysis on every year and collects the per-criterion
/// distribution of distances.
pub fn scenario_panel(matrices: &BTreeMap<i32, PerformanceMatrix>) -> Result<ScenarioPanel> {
    scenario_panel_with_ratio(matrices, DEFAULT_SCENARIO_RATIO)
}

pub fn scenario_panel_with_ratio(
    matrices: &BTreeMap<i32, PerformanceMatrix>,
    ratio: f64,
) -> Result<ScenarioPanel> {
    let Some((_, first)) = matrices.iter().next() else {
        return Ok(ScenarioPanel {
            per_year: BTreeMap::new(),
            criteria: Vec::new(),
        });
    };
    let signature = |m: &PerformanceMatrix| {
        m.criteria()
            .iter()
            .map(|c| (c.id.clone(), c.direction))
            .collect::<Vec<_>>()
    };
    let reference = signature(first);
    if let Some((&year, _)) = matrices.iter().find(|(_, m)| signature(m) != reference) {
        return Err(Error::CriteriaMismatch { year });
    }

    let mut per_year = BTreeMap::new();
    for (&year, matrix) in matrices {
        per_year.insert(year, scenario_analysis_with_ratio(matrix, ratio)?);
    }

    let criteria = reference
        .iter()
        .enumerate()
        .map(|(j, (id, _))| {
            let distances: Vec<(i32, f64)> = per_year
                .iter()
                .map(|(&year, results)| (year, results[j].distance))
                .collect();
            let values: Vec<f64> = distances.iter().map(|(_, d)| *d).collect();
            CriterionDistribution {
                criterion_id: id.clone(),
                summary: FiveNumberSummary::from_values(&values)
                    .expect("panel has at least one year"),
                distances,
            }
        })
        .collect();

    Ok(ScenarioPanel { per_year, criteria })
}
