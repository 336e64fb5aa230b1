//! TOPSIS: rank alternatives by relative closeness to the ideal point and
//! remoteness from the antiideal point.
//!
//! Columns are vector-normalized and weighted, the ideal/antiideal are taken
//! per column according to the criterion direction, Euclidean distances to
//! both poles give the closeness score `d_w / (d_w + d_b)`, and ranks follow
//! by descending score.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{percentile_of_rank, Direction, PerformanceMatrix, RankingResult};

/// Everything computed on the way to the closeness scores.
#[derive(Debug, Clone, PartialEq)]
pub struct TopsisIntermediates {
    /// Weighted, normalized matrix, row-major m×n.
    pub normalized: Vec<Vec<f64>>,
    pub ideal: Vec<f64>,
    pub antiideal: Vec<f64>,
    pub dist_ideal: Vec<f64>,
    pub dist_antiideal: Vec<f64>,
}

/// `n_ij = w_j * x_ij / ||x_j||`.
///
/// `weights` is not required to sum to one.
pub fn normalize_and_weight(matrix: &PerformanceMatrix, weights: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = matrix.n();
    if weights.len() != n {
        return Err(Error::WeightCount {
            expected: n,
            got: weights.len(),
        });
    }
    let norms: Vec<f64> = (0..n)
        .map(|j| matrix.rows().map(|r| r[j] * r[j]).sum::<f64>().sqrt())
        .collect();
    if let Some(j) = norms.iter().position(|&s| s == 0.0) {
        return Err(Error::Validation(vec![
            crate::model::ValidationIssue::ZeroColumn { col: j + 1 },
        ]));
    }
    Ok(matrix
        .rows()
        .map(|row| {
            row.iter()
                .zip(weights)
                .zip(&norms)
                .map(|((x, w), norm)| w * x / norm)
                .collect()
        })
        .collect())
}

/// Per-column ideal and antiideal points.
pub fn ideal_solutions(normalized: &[Vec<f64>], directions: &[Direction]) -> (Vec<f64>, Vec<f64>) {
    let n = directions.len();
    let mut ideal = Vec::with_capacity(n);
    let mut antiideal = Vec::with_capacity(n);
    for (j, direction) in directions.iter().enumerate() {
        let (lo, hi) = normalized
            .iter()
            .map(|row| row[j])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        match direction {
            Direction::Benefit => {
                ideal.push(hi);
                antiideal.push(lo);
            }
            Direction::Cost => {
                ideal.push(lo);
                antiideal.push(hi);
            }
        }
    }
    (ideal, antiideal)
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Closeness score of every alternative, along with the intermediate values.
pub fn closeness_scores(
    matrix: &PerformanceMatrix,
    weights: &[f64],
) -> Result<(Vec<f64>, TopsisIntermediates)> {
    let normalized = normalize_and_weight(matrix, weights)?;
    let (ideal, antiideal) = ideal_solutions(&normalized, &matrix.directions());

    let dist_ideal: Vec<f64> = normalized.iter().map(|r| euclidean(r, &ideal)).collect();
    let dist_antiideal: Vec<f64> = normalized.iter().map(|r| euclidean(r, &antiideal)).collect();

    let scores = dist_ideal
        .iter()
        .zip(&dist_antiideal)
        .enumerate()
        .map(|(i, (db, dw))| {
            let denom = db + dw;
            if denom > 0.0 {
                Ok(dw / denom)
            } else {
                Err(Error::DegenerateGeometry { row: i + 1 })
            }
        })
        .collect::<Result<Vec<_>>>()?;

    Ok((
        scores,
        TopsisIntermediates {
            normalized,
            ideal,
            antiideal,
            dist_ideal,
            dist_antiideal,
        },
    ))
}

/// Ranks by descending score; equal scores fall back to ascending id.
pub fn rank_scores(alternatives: &[String], scores: &[f64]) -> RankingResult {
    let m = scores.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| alternatives[a].cmp(&alternatives[b]))
    });
    let mut ranks = vec![0; m];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    RankingResult {
        alternatives: alternatives.to_vec(),
        scores: scores.to_vec(),
        percentiles: ranks.iter().map(|&r| percentile_of_rank(r, m)).collect(),
        ranks,
    }
}

/// Validates the matrix and ranks its alternatives under `weights`.
pub fn rank(matrix: &PerformanceMatrix, weights: &[f64]) -> Result<RankingResult> {
    let issues = matrix.issues();
    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }
    let (scores, _) = closeness_scores(matrix, weights)?;
    Ok(rank_scores(matrix.alternatives(), &scores))
}
