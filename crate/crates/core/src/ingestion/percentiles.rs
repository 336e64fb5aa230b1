//! Per-program and per-family percentile summaries over the analysis window.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::RankingResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProgramPercentile {
    pub program_id: String,
    pub family_id: String,
    pub mean_percentile: f64,
    /// `(year, percentile)` for the years the program was ranked.
    pub years: Vec<(i32, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyYearSummary {
    pub family_id: String,
    pub year: i32,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub members: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PercentilePanel {
    /// Sorted by descending mean percentile, then program id.
    pub programs: Vec<ProgramPercentile>,
    /// Sorted by family, then year.
    pub families: Vec<FamilyYearSummary>,
}

/// Programs missing from `families` are grouped under an empty family id.
pub fn percentile_panel(
    rankings: &BTreeMap<i32, RankingResult>,
    families: &BTreeMap<String, String>,
) -> PercentilePanel {
    let family_of = |p: &str| families.get(p).cloned().unwrap_or_default();
    let mut per_program: BTreeMap<&str, Vec<(i32, f64)>> = BTreeMap::new();
    let mut per_family: BTreeMap<(String, i32), Vec<f64>> = BTreeMap::new();
    for (&year, ranking) in rankings {
        for (program, &pct) in ranking.alternatives.iter().zip(&ranking.percentiles) {
            per_program.entry(program).or_default().push((year, pct));
            per_family
                .entry((family_of(program), year))
                .or_default()
                .push(pct);
        }
    }

    let mut programs: Vec<ProgramPercentile> = per_program
        .into_iter()
        .map(|(program, years)| ProgramPercentile {
            program_id: program.to_string(),
            family_id: family_of(program),
            mean_percentile: years.iter().map(|(_, p)| p).sum::<f64>() / years.len() as f64,
            years,
        })
        .collect();
    programs.sort_by(|a, b| {
        b.mean_percentile
            .total_cmp(&a.mean_percentile)
            .then_with(|| a.program_id.cmp(&b.program_id))
    });

    let families = per_family
        .into_iter()
        .map(|((family_id, year), v)| FamilyYearSummary {
            family_id,
            year,
            mean: v.iter().sum::<f64>() / v.len() as f64,
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            members: v.len(),
        })
        .collect();

    PercentilePanel { programs, families }
}
