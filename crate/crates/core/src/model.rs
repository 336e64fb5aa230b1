//! Domain types shared by every stage of the pipeline.
//!
//! A [`PerformanceMatrix`] holds one row per alternative and one column per
//! criterion. Matrices are plain values: construct, [`validate`](PerformanceMatrix::validate),
//! then hand them to the ranking and sensitivity routines.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rankcompare::RankPermutation;

/// Whether larger or smaller values of a criterion are preferable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Benefit,
    Cost,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Benefit => Direction::Cost,
            Direction::Cost => Direction::Benefit,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Benefit => "benefit",
            Direction::Cost => "cost",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSpec {
    pub id: String,
    pub label: String,
    pub direction: Direction,
    /// Delphi-style relative weight; the least important criterion conventionally gets 1.
    pub relative_weight: f64,
}

impl CriterionSpec {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        direction: Direction,
        relative_weight: f64,
    ) -> Self {
        Self {
            id: id.into(),
            label: label.into(),
            direction,
            relative_weight,
        }
    }
}

/// A single violated matrix invariant. Rows and columns are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    TooFewAlternatives { m: usize },
    NoCriteria,
    RowLength { row: usize, expected: usize, got: usize },
    SupportShape,
    NonFiniteValue { row: usize, col: usize },
    DuplicateAlternativeId { row: usize, id: String },
    DuplicateCriterionId { col: usize, id: String },
    NonPositiveRelativeWeight { col: usize },
    ZeroColumn { col: usize },
    DegenerateColumn { col: usize },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            TooFewAlternatives { m } => write!(f, "need at least 2 alternatives, got {m}"),
            NoCriteria => write!(f, "no criteria"),
            RowLength { row, expected, got } => {
                write!(f, "row {row} has {got} values, expected {expected}")
            }
            SupportShape => write!(f, "support counts do not match the matrix shape"),
            NonFiniteValue { row, col } => write!(f, "non-finite value at row {row}, column {col}"),
            DuplicateAlternativeId { row, id } => {
                write!(f, "duplicate alternative '{id}' at row {row}")
            }
            DuplicateCriterionId { col, id } => {
                write!(f, "duplicate criterion '{id}' at column {col}")
            }
            NonPositiveRelativeWeight { col } => {
                write!(f, "criterion at column {col} has a non-positive relative weight")
            }
            ZeroColumn { col } => write!(f, "column {col} has zero norm"),
            DegenerateColumn { col } => write!(f, "column {col} has all entries equal"),
        }
    }
}

/// m×n matrix of criterion scores, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceMatrix {
    alternatives: Vec<String>,
    criteria: Vec<CriterionSpec>,
    values: Vec<f64>,
    support: Option<Vec<u32>>,
}

impl PerformanceMatrix {
    /// Builds a matrix from rows. Only the shape is checked here; call
    /// [`validate`](Self::validate) for the full set of invariants.
    pub fn from_rows(
        alternatives: Vec<String>,
        criteria: Vec<CriterionSpec>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = criteria.len();
        let mut issues = Vec::new();
        if rows.len() != alternatives.len() {
            issues.push(ValidationIssue::RowLength {
                row: rows.len().min(alternatives.len()) + 1,
                expected: n,
                got: 0,
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                issues.push(ValidationIssue::RowLength {
                    row: i + 1,
                    expected: n,
                    got: row.len(),
                });
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        Ok(Self {
            alternatives,
            criteria,
            values: rows.into_iter().flatten().collect(),
            support: None,
        })
    }

    pub fn with_support(mut self, support: Vec<Vec<u32>>) -> Result<Self> {
        let n = self.n();
        if support.len() != self.m() || support.iter().any(|r| r.len() != n) {
            return Err(Error::Validation(vec![ValidationIssue::SupportShape]));
        }
        self.support = Some(support.into_iter().flatten().collect());
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.alternatives.len()
    }

    pub fn n(&self) -> usize {
        self.criteria.len()
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[CriterionSpec] {
        &self.criteria
    }

    pub fn directions(&self) -> Vec<Direction> {
        self.criteria.iter().map(|c| c.direction).collect()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let n = self.n();
        &self.values[row * n..(row + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.n().max(1))
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.m()).map(|i| self.get(i, col)).collect()
    }

    pub fn support(&self, row: usize, col: usize) -> Option<u32> {
        self.support.as_ref().map(|s| s[row * self.n() + col])
    }

    pub fn has_support(&self) -> bool {
        self.support.is_some()
    }

    /// Returns a copy with the criteria metadata replaced (same count required).
    pub fn with_criteria(&self, criteria: Vec<CriterionSpec>) -> Result<Self> {
        if criteria.len() != self.n() {
            return Err(Error::WeightCount {
                expected: self.n(),
                got: criteria.len(),
            });
        }
        Ok(Self {
            criteria,
            ..self.clone()
        })
    }

    /// Every violated invariant, in row-major order of discovery.
    pub fn issues(&self) -> Vec<ValidationIssue> {
        let (m, n) = (self.m(), self.n());
        let mut issues = Vec::new();
        if m < 2 {
            issues.push(ValidationIssue::TooFewAlternatives { m });
        }
        if n == 0 {
            issues.push(ValidationIssue::NoCriteria);
            return issues;
        }
        if self.values.len() != m * n {
            issues.push(ValidationIssue::RowLength {
                row: 1,
                expected: n,
                got: self.values.len() / m.max(1),
            });
            return issues;
        }

        let mut seen = HashSet::new();
        for (i, id) in self.alternatives.iter().enumerate() {
            if !seen.insert(id.as_str()) {
                issues.push(ValidationIssue::DuplicateAlternativeId {
                    row: i + 1,
                    id: id.clone(),
                });
            }
        }
        let mut seen = HashSet::new();
        for (j, c) in self.criteria.iter().enumerate() {
            if !seen.insert(c.id.as_str()) {
                issues.push(ValidationIssue::DuplicateCriterionId {
                    col: j + 1,
                    id: c.id.clone(),
                });
            }
            if !(c.relative_weight > 0.0 && c.relative_weight.is_finite()) {
                issues.push(ValidationIssue::NonPositiveRelativeWeight { col: j + 1 });
            }
        }

        let mut finite_cols = vec![true; n];
        for i in 0..m {
            for (j, finite) in finite_cols.iter_mut().enumerate() {
                if !self.get(i, j).is_finite() {
                    *finite = false;
                    issues.push(ValidationIssue::NonFiniteValue {
                        row: i + 1,
                        col: j + 1,
                    });
                }
            }
        }

        for (j, _) in finite_cols.iter().enumerate().filter(|(_, f)| **f) {
            let col = self.column(j);
            if col.iter().all(|&x| x == 0.0) {
                issues.push(ValidationIssue::ZeroColumn { col: j + 1 });
            } else if m >= 2 && col.iter().all(|&x| x == col[0]) {
                issues.push(ValidationIssue::DegenerateColumn { col: j + 1 });
            }
        }
        issues
    }

    pub fn validate(self) -> Result<Self> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(self)
        } else {
            Err(Error::Validation(issues))
        }
    }
}

/// Normalized absolute weights: strictly positive, summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(absolute: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = absolute
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0 && w.is_finite()))
        {
            return Err(Error::NonPositiveWeight { index, value });
        }
        let sum: f64 = absolute.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::WeightSum { sum });
        }
        Ok(Self(absolute))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Outcome of ranking one matrix under one weight vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingResult {
    pub alternatives: Vec<String>,
    /// Closeness scores in `[0, 1]`.
    pub scores: Vec<f64>,
    /// 1-based ranks, 1 = best.
    pub ranks: Vec<usize>,
    pub percentiles: Vec<f64>,
}

impl RankingResult {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Alternative indices, best first.
    pub fn order(&self) -> RankPermutation {
        let mut order = vec![0; self.ranks.len()];
        for (i, &r) in self.ranks.iter().enumerate() {
            order[r - 1] = i;
        }
        RankPermutation::new_unchecked(order)
    }
}

/// Percentile of a 1-based rank among `m` alternatives: 1 for the best, 0 for the worst.
pub fn percentile_of_rank(rank: usize, m: usize) -> f64 {
    if m < 2 {
        return 1.0;
    }
    (m - rank) as f64 / (m - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crit(id: &str) -> CriterionSpec {
        CriterionSpec::new(id, id, Direction::Benefit, 1.0)
    }

    fn matrix(rows: Vec<Vec<f64>>) -> PerformanceMatrix {
        let n = rows[0].len();
        let alts = (0..rows.len()).map(|i| format!("A{}", i + 1)).collect();
        let crits = (0..n).map(|j| crit(&format!("C{}", j + 1))).collect();
        PerformanceMatrix::from_rows(alts, crits, rows).unwrap()
    }

    #[test]
    fn valid_matrix_passes_unchanged() {
        let mat = matrix(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let validated = mat.clone().validate().unwrap();
        assert_eq!(validated, mat);
        assert!(validated.validate().is_ok());
    }

    #[test]
    fn nan_cell_is_reported_one_based() {
        let mat = matrix(vec![vec![1.0, 2.0], vec![f64::NAN, 4.0], vec![2.0, 1.0]]);
        assert_eq!(
            mat.issues(),
            vec![ValidationIssue::NonFiniteValue { row: 2, col: 1 }]
        );
    }

    #[test]
    fn constant_column_is_degenerate() {
        let mat = matrix(vec![vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0]]);
        assert_eq!(
            mat.issues(),
            vec![ValidationIssue::DegenerateColumn { col: 2 }]
        );
    }

    #[test]
    fn zero_column_and_duplicate_ids() {
        let mat = PerformanceMatrix::from_rows(
            vec!["A".into(), "A".into()],
            vec![crit("C1"), crit("C2")],
            vec![vec![0.0, 1.0], vec![0.0, 2.0]],
        )
        .unwrap();
        let issues = mat.issues();
        assert!(issues.contains(&ValidationIssue::ZeroColumn { col: 1 }));
        assert!(issues.contains(&ValidationIssue::DuplicateAlternativeId {
            row: 2,
            id: "A".into()
        }));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = PerformanceMatrix::from_rows(
            vec!["A".into(), "B".into()],
            vec![crit("C1"), crit("C2")],
            vec![vec![1.0, 2.0], vec![1.0]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn weight_vector_checks() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(
            WeightVector::new(vec![1.0, 0.0]),
            Err(Error::NonPositiveWeight { index: 1, .. })
        ));
        assert!(matches!(
            WeightVector::new(vec![0.5, 0.6]),
            Err(Error::WeightSum { .. })
        ));
    }

    #[test]
    fn percentile_convention() {
        assert_eq!(percentile_of_rank(1, 3), 1.0);
        assert_eq!(percentile_of_rank(2, 3), 0.5);
        assert_eq!(percentile_of_rank(3, 3), 0.0);
    }
}
