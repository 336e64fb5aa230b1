//! From raw graduate and contract records to one performance matrix per
//! graduation year.
//!
//! [`records`] loads and links the three input files, [`criteria`] scores
//! every graduation on C1..C8, [`aggregate`] takes per-program medians and
//! applies the support and window filters, and [`percentiles`] summarizes
//! yearly rankings per program and per professional family.

pub mod aggregate;
pub mod criteria;
pub mod intervals;
pub mod percentiles;
pub mod records;

pub use aggregate::{
    aggregate, aggregate_years, median, select_window, ProgramStatus, ProgramSummary, Window,
    YearAggregate, DEFAULT_MIN_PROGRAMS, DEFAULT_MIN_SUPPORT,
};
pub use criteria::{all_person_criteria, labor_days, person_criteria, LaborDays, PersonCriteria};
pub use intervals::DaySet;
pub use percentiles::{percentile_panel, FamilyYearSummary, PercentilePanel, ProgramPercentile};
pub use records::{
    load_datasets, read_contracts, read_graduates, read_sector_map, ContractRecord, ContractType,
    GraduateRecord, LinkedDataset, LinkedPerson, LoadOptions, LoadReport, SectorFamilyMap,
};

use crate::model::{CriterionSpec, Direction};

/// The eight employability criteria with their expert relative weights.
/// C3 is the only benefit criterion.
pub fn default_criteria() -> Vec<CriterionSpec> {
    use Direction::{Benefit, Cost};
    [
        ("C1", "Days from graduation to first in-field contract", Cost, 4.0),
        ("C2", "Mean gap between in-field contracts (days)", Cost, 2.5),
        ("C3", "Fraction of worked days in-field", Benefit, 1.0),
        ("C4", "Fraction of in-field days on temporary contracts", Cost, 1.0),
        ("C5", "Days from graduation to first contract", Cost, 3.0),
        ("C6", "Mean gap between contracts (days)", Cost, 2.0),
        ("C7", "Fraction of worked days on temporary contracts", Cost, 1.0),
        ("C8", "Days without a contract since graduation", Cost, 1.0),
    ]
    .into_iter()
    .map(|(id, label, dir, w)| CriterionSpec::new(id, label, dir, w))
    .collect()
}
