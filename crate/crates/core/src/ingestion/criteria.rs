//! Per-graduate employability scores C1..C8.

use chrono::{Datelike, NaiveDate};
use rayon::prelude::*;
use serde::Serialize;

use super::intervals::{day_number, DaySet};
use super::records::{ContractRecord, GraduateRecord, LinkedDataset, LinkedPerson, SectorFamilyMap};

pub const CRITERIA_COUNT: usize = 8;

/// Scores of one (person, program) graduation. `None` marks an undefined criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersonCriteria {
    pub person_id: String,
    pub program_id: String,
    pub family_id: String,
    pub graduation_year: i32,
    pub values: [Option<f64>; CRITERIA_COUNT],
}

impl PersonCriteria {
    pub fn get(&self, criterion: usize) -> Option<f64> {
        self.values[criterion]
    }

    pub fn is_defined(&self, criterion: usize) -> bool {
        self.values[criterion].is_some()
    }
}

/// Day totals behind the fraction criteria, exposed for consistency checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LaborDays {
    pub window: i64,
    pub total: i64,
    pub in_field: i64,
    pub out_of_field: i64,
    pub temporary: i64,
    pub in_field_temporary: i64,
}

struct Span<'a> {
    contract: &'a ContractRecord,
    start: i64,
    end: i64,
    in_field: bool,
}

/// Mean of the gaps between each contract start and the latest end seen so
/// far (overlaps count as 0). Needs at least two contracts.
fn mean_gap<'a>(spans: impl Iterator<Item = &'a Span<'a>>) -> Option<f64> {
    let mut spans: Vec<(i64, i64)> = spans.map(|s| (s.start, s.end)).collect();
    if spans.len() < 2 {
        return None;
    }
    spans.sort_unstable();
    let mut latest_end = spans[0].1;
    let mut total = 0i64;
    for &(start, end) in &spans[1..] {
        total += (start - latest_end).max(0);
        latest_end = latest_end.max(end);
    }
    Some(total as f64 / (spans.len() - 1) as f64)
}

fn ratio(num: i64, den: i64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn compute(
    person: &LinkedPerson,
    graduation: &GraduateRecord,
    sector_map: &SectorFamilyMap,
    observation_end: NaiveDate,
) -> (PersonCriteria, LaborDays) {
    let grad = day_number(graduation.graduation_date);
    let obs = day_number(observation_end);
    let window_first = grad + 1;

    let spans: Vec<Span> = person
        .contracts
        .iter()
        .filter(|c| c.start_date >= graduation.graduation_date && c.start_date <= observation_end)
        .map(|c| Span {
            contract: c,
            start: day_number(c.start_date),
            end: day_number(c.effective_end(observation_end)),
            in_field: sector_map.serves(&c.sector_code, &graduation.family_id),
        })
        .collect();

    let covered = |pred: &dyn Fn(&Span) -> bool| {
        DaySet::from_ranges(
            spans
                .iter()
                .filter(|s| pred(s))
                .map(|s| (s.start.max(window_first), s.end)),
        )
    };
    let total = covered(&|_| true);
    let in_field = covered(&|s| s.in_field);
    let temporary = covered(&|s| s.contract.is_temporary());
    let in_field_temporary = covered(&|s| s.in_field && s.contract.is_temporary());

    let days = LaborDays {
        window: (obs - grad).max(0),
        total: total.len(),
        in_field: in_field.len(),
        out_of_field: total.difference(&in_field).len(),
        temporary: temporary.len(),
        in_field_temporary: in_field_temporary.len(),
    };

    let first_start = |in_field_only: bool| {
        spans
            .iter()
            .filter(|s| !in_field_only || s.in_field)
            .map(|s| (s.start - grad) as f64)
            .reduce(f64::min)
    };

    let values = [
        first_start(true),
        mean_gap(spans.iter().filter(|s| s.in_field)),
        ratio(days.in_field, days.total),
        ratio(days.in_field_temporary, days.in_field),
        first_start(false),
        mean_gap(spans.iter()),
        ratio(days.temporary, days.total),
        Some((days.window - days.total) as f64),
    ];

    (
        PersonCriteria {
            person_id: person.person_id.clone(),
            program_id: graduation.program_id.clone(),
            family_id: graduation.family_id.clone(),
            graduation_year: graduation.graduation_date.year(),
            values,
        },
        days,
    )
}

/// Criteria for one graduation of `person`. Only contracts starting on or
/// after the graduation date are considered; a contract covers its days
/// `start..=end` and the observation window is the days after graduation up
/// to `observation_end`.
pub fn person_criteria(
    person: &LinkedPerson,
    graduation: &GraduateRecord,
    sector_map: &SectorFamilyMap,
    observation_end: NaiveDate,
) -> PersonCriteria {
    compute(person, graduation, sector_map, observation_end).0
}

pub fn labor_days(
    person: &LinkedPerson,
    graduation: &GraduateRecord,
    sector_map: &SectorFamilyMap,
    observation_end: NaiveDate,
) -> LaborDays {
    compute(person, graduation, sector_map, observation_end).1
}

/// Criteria of every (person, graduation) pair, ordered by person then graduation.
pub fn all_person_criteria(dataset: &LinkedDataset) -> Vec<PersonCriteria> {
    let persons: Vec<&LinkedPerson> = dataset.persons.values().collect();
    persons
        .par_iter()
        .flat_map_iter(|p| {
            p.graduations.iter().map(|g| {
                person_criteria(p, g, &dataset.sector_map, dataset.observation_end)
            })
        })
        .collect()
}
