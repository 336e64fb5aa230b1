//! Median aggregation per program-year and the support/window filters.

use std::collections::BTreeMap;

use serde::Serialize;

use super::criteria::PersonCriteria;
use crate::error::{Error, Result};
use crate::model::{CriterionSpec, PerformanceMatrix};

/// A program cell needs strictly more than five defined values.
pub const DEFAULT_MIN_SUPPORT: u32 = 6;
/// A year enters the analysis window with at least this many surviving programs.
pub const DEFAULT_MIN_PROGRAMS: usize = 30;

/// Median with the midpoint rule for even counts. `None` when empty.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 0 {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ProgramStatus {
    Kept,
    LowSupport { criterion: String, support: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProgramSummary {
    pub program_id: String,
    pub family_id: String,
    pub persons: usize,
    pub support: Vec<u32>,
    pub medians: Vec<Option<f64>>,
    pub status: ProgramStatus,
}

impl ProgramSummary {
    pub fn is_kept(&self) -> bool {
        self.status == ProgramStatus::Kept
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct YearAggregate {
    pub year: i32,
    /// Every program with graduates that year, sorted by id.
    pub programs: Vec<ProgramSummary>,
    /// Kept programs only; `None` when nothing survived.
    pub matrix: Option<PerformanceMatrix>,
}

impl YearAggregate {
    pub fn kept(&self) -> usize {
        self.programs.iter().filter(|p| p.is_kept()).count()
    }
}

/// Aggregates the graduations of `year`. `scores` may hold any years; the
/// criterion values are read positionally against `criteria`.
pub fn aggregate(
    scores: &[PersonCriteria],
    year: i32,
    criteria: &[CriterionSpec],
    min_support: u32,
) -> YearAggregate {
    let n = criteria.len();
    let mut by_program: BTreeMap<&str, Vec<&PersonCriteria>> = BTreeMap::new();
    for s in scores.iter().filter(|s| s.graduation_year == year) {
        by_program.entry(&s.program_id).or_default().push(s);
    }

    let programs: Vec<ProgramSummary> = by_program
        .into_iter()
        .map(|(program, persons)| {
            let columns: Vec<Vec<f64>> = (0..n)
                .map(|j| persons.iter().filter_map(|p| p.values[j]).collect())
                .collect();
            let support: Vec<u32> = columns.iter().map(|c| c.len() as u32).collect();
            let status = support
                .iter()
                .zip(criteria)
                .find(|(s, _)| **s < min_support)
                .map_or(ProgramStatus::Kept, |(s, c)| ProgramStatus::LowSupport {
                    criterion: c.id.clone(),
                    support: *s,
                });
            ProgramSummary {
                program_id: program.to_string(),
                family_id: persons[0].family_id.clone(),
                persons: persons.len(),
                medians: columns.iter().map(|c| median(c)).collect(),
                support,
                status,
            }
        })
        .collect();

    let kept: Vec<&ProgramSummary> = programs.iter().filter(|p| p.is_kept()).collect();
    let matrix = (!kept.is_empty()).then(|| {
        let rows = kept
            .iter()
            .map(|p| p.medians.iter().map(|v| v.expect("kept cells are defined")).collect())
            .collect();
        PerformanceMatrix::from_rows(
            kept.iter().map(|p| p.program_id.clone()).collect(),
            criteria.to_vec(),
            rows,
        )
        .and_then(|m| m.with_support(kept.iter().map(|p| p.support.clone()).collect()))
        .expect("shape is consistent by construction")
    });

    YearAggregate {
        year,
        programs,
        matrix,
    }
}

/// Aggregates every graduation year present in `scores`.
pub fn aggregate_years(
    scores: &[PersonCriteria],
    criteria: &[CriterionSpec],
    min_support: u32,
) -> BTreeMap<i32, YearAggregate> {
    let mut years: Vec<i32> = scores.iter().map(|s| s.graduation_year).collect();
    years.sort_unstable();
    years.dedup();
    years
        .into_iter()
        .map(|y| (y, aggregate(scores, y, criteria, min_support)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Window {
    pub years: Vec<i32>,
    /// Surviving programs per year, including excluded years.
    pub counts: BTreeMap<i32, usize>,
    pub min_programs: usize,
}

impl Window {
    pub fn contains(&self, year: i32) -> bool {
        self.years.contains(&year)
    }
}

pub fn select_window(
    years: &BTreeMap<i32, YearAggregate>,
    min_programs: usize,
) -> Result<Window> {
    let counts: BTreeMap<i32, usize> = years.iter().map(|(&y, a)| (y, a.kept())).collect();
    let selected: Vec<i32> = counts
        .iter()
        .filter(|(_, &c)| c >= min_programs)
        .map(|(&y, _)| y)
        .collect();
    if selected.is_empty() {
        return Err(Error::EmptyWindow { min_programs });
    }
    Ok(Window {
        years: selected,
        counts,
        min_programs,
    })
}
