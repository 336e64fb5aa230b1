//! End-to-end steps shared by the command line tool and the HTTP service.

use std::collections::BTreeMap;
use std::path::Path;

use log::info;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gsa::{self, Estimator, MainEffects, PER_YEAR_MIN_ALTERNATIVES};
use crate::ingestion::{
    aggregate_years, all_person_criteria, percentile_panel, select_window, LinkedDataset,
    PercentilePanel, PersonCriteria, Window, YearAggregate, DEFAULT_MIN_PROGRAMS,
    DEFAULT_MIN_SUPPORT,
};
use crate::io;
use crate::model::{CriterionSpec, PerformanceMatrix, RankingResult, WeightVector};
use crate::topsis;
use crate::weights::normalize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestOptions {
    pub min_support: u32,
    pub min_programs: usize,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            min_support: DEFAULT_MIN_SUPPORT,
            min_programs: DEFAULT_MIN_PROGRAMS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IngestOutput {
    pub criteria: Vec<CriterionSpec>,
    pub scores: Vec<PersonCriteria>,
    pub years: BTreeMap<i32, YearAggregate>,
    pub window: Window,
    /// Validated matrices of the window years.
    pub matrices: BTreeMap<i32, PerformanceMatrix>,
    /// Program → family for every program seen in the records.
    pub families: BTreeMap<String, String>,
}

/// Scores, aggregates and filters a linked dataset. Fails if a window year
/// produces an invalid matrix (for instance a constant criterion column).
pub fn ingest(
    dataset: &LinkedDataset,
    criteria: &[CriterionSpec],
    options: IngestOptions,
) -> Result<IngestOutput> {
    let scores = all_person_criteria(dataset);
    let years = aggregate_years(&scores, criteria, options.min_support);
    let window = select_window(&years, options.min_programs)?;
    let matrices = window
        .years
        .iter()
        .map(|y| {
            let m = years[y].matrix.clone().expect("window years have programs");
            Ok((*y, m.validate()?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    info!(
        "{} graduations scored, window {:?}",
        scores.len(),
        window.years
    );
    Ok(IngestOutput {
        criteria: criteria.to_vec(),
        scores,
        years,
        window,
        matrices,
        families: dataset.program_families(),
    })
}

/// Weights from an explicit relative list, or the criteria defaults.
pub fn resolve_weights(
    criteria: &[CriterionSpec],
    relative: Option<&[f64]>,
) -> Result<WeightVector> {
    let defaults: Vec<f64> = criteria.iter().map(|c| c.relative_weight).collect();
    let relative = relative.unwrap_or(&defaults);
    if relative.len() != criteria.len() {
        return Err(Error::WeightCount {
            expected: criteria.len(),
            got: relative.len(),
        });
    }
    normalize(relative)
}

pub fn rank_years(
    matrices: &BTreeMap<i32, PerformanceMatrix>,
    weights: &[f64],
) -> Result<BTreeMap<i32, RankingResult>> {
    matrices
        .par_iter()
        .map(|(&y, m)| Ok((y, topsis::rank(m, weights)?)))
        .collect()
}

pub fn percentiles(
    matrices: &BTreeMap<i32, PerformanceMatrix>,
    weights: &[f64],
    families: &BTreeMap<String, String>,
) -> Result<PercentilePanel> {
    Ok(percentile_panel(&rank_years(matrices, weights)?, families))
}

/// Writes the full ingestion output set into `dir`.
pub fn write_ingest(output: &IngestOutput, dir: &Path) -> Result<()> {
    let file = |name: &str| io::create(&dir.join(name));
    for (year, m) in &output.matrices {
        io::write_matrix(&dir.join(format!("matrix_{year}.csv")), m)?;
    }
    io::write_criteria(&dir.join("criteria.json"), &output.criteria)?;
    io::write_programs(file("programs.csv")?, &output.families)?;
    io::write_person_criteria(file("person_criteria.csv")?, &output.scores)?;
    io::write_filter_report(file("filter_report.csv")?, &output.years, &output.window)?;
    io::write_year_counts(file("year_counts.csv")?, &output.years, &output.window)?;
    let weights = resolve_weights(&output.criteria, None)?;
    let panel = percentiles(&output.matrices, &weights, &output.families)?;
    io::write_percentiles(file("percentiles.csv")?, &panel)?;
    io::write_family_summary(file("family_summary.csv")?, &panel)?;
    Ok(())
}

/// How main effects are estimated across years.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pooling {
    /// One sample per program-year, all years together.
    Pooled,
    /// Separate estimates per year; needs enough programs in each.
    PerYear,
}

/// Main effects for each named scheme. Per-year results are labelled
/// `<scheme>@<year>`.
pub fn gsa(
    matrices: &BTreeMap<i32, PerformanceMatrix>,
    schemes: &[gsa::NamedScheme],
    estimator: Estimator,
    pooling: Pooling,
) -> Result<Vec<(String, MainEffects)>> {
    match pooling {
        Pooling::Pooled => {
            let all: Vec<PerformanceMatrix> = matrices.values().cloned().collect();
            gsa::weight_scheme_comparison(&all, schemes, estimator)
        }
        Pooling::PerYear => {
            let mut out = Vec::new();
            for (year, m) in matrices {
                if m.m() < PER_YEAR_MIN_ALTERNATIVES {
                    return Err(Error::TooFewPoints {
                        needed: PER_YEAR_MIN_ALTERNATIVES,
                        got: m.m(),
                    });
                }
                for (name, fx) in
                    gsa::weight_scheme_comparison(std::slice::from_ref(m), schemes, estimator)?
                {
                    out.push((format!("{name}@{year}"), fx));
                }
            }
            Ok(out)
        }
    }
}

/// The schemes to evaluate: `given` alone, or the least/most weighted pair
/// for `focus` followed by `given`.
pub fn schemes(
    criteria: &[CriterionSpec],
    given: WeightVector,
    focus: Option<&str>,
) -> Result<Vec<gsa::NamedScheme>> {
    let ids: Vec<String> = criteria.iter().map(|c| c.id.clone()).collect();
    match focus {
        None => Ok(vec![gsa::NamedScheme {
            name: "given".into(),
            weights: given,
        }]),
        Some(f) => {
            let index = ids
                .iter()
                .position(|id| id == f)
                .ok_or_else(|| Error::UnknownCriterion(f.to_string()))?;
            gsa::canonical_schemes(&ids, index, given)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{synthetic_records, SyntheticConfig};
    use crate::ingestion::{default_criteria, LoadOptions};

    fn dataset() -> LinkedDataset {
        let r = synthetic_records(&SyntheticConfig::default());
        LinkedDataset::from_records(
            r.graduates,
            r.contracts,
            r.sector_map,
            LoadOptions {
                observation_end: Some(r.observation_end),
            },
        )
    }

    #[test]
    fn synthetic_window() {
        let out = ingest(
            &dataset(),
            &default_criteria(),
            IngestOptions {
                min_programs: 6,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.window.years, vec![2013, 2014, 2015]);
        assert!(matches!(
            ingest(&dataset(), &default_criteria(), IngestOptions::default()),
            Err(Error::EmptyWindow { min_programs: 30 })
        ));
    }

    #[test]
    fn weight_count_checked() {
        assert!(matches!(
            resolve_weights(&default_criteria(), Some(&[1.0, 2.0])),
            Err(Error::WeightCount { expected: 8, got: 2 })
        ));
    }

    #[test]
    fn per_year_needs_enough_programs() {
        let out = ingest(
            &dataset(),
            &default_criteria(),
            IngestOptions {
                min_programs: 6,
                ..Default::default()
            },
        )
        .unwrap();
        let w = resolve_weights(&out.criteria, None).unwrap();
        let s = schemes(&out.criteria, w, None).unwrap();
        assert!(matches!(
            gsa(&out.matrices, &s, Estimator::binned(), Pooling::PerYear),
            Err(Error::TooFewPoints { needed: 30, .. })
        ));
    }
}
