//! Variance-based global sensitivity: the correlation ratio
//! `eta^2_j = Var(E[r | X_j]) / Var(r)` of each criterion column against the
//! TOPSIS score vector.
//!
//! The conditional mean `E[r | X_j]` is estimated nonparametrically from the
//! observed `(x, r)` pairs, either by equal-count binning or by a random-walk
//! state-space smoother run along the sorted `x` axis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PerformanceMatrix, WeightVector};
use crate::topsis;
use crate::weights::{scenario_weights_with_ratio, ScenarioKind, DEFAULT_SCENARIO_RATIO};

/// Minimum sample count for the smoother.
pub const SMOOTHER_MIN_POINTS: usize = 10;
/// Minimum alternatives for a single-year (unpooled) analysis.
pub const PER_YEAR_MIN_ALTERNATIVES: usize = 30;
/// Raw estimates outside `[-SLACK, 1 + SLACK]` indicate a broken fit.
pub const ESTIMATION_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Estimator {
    /// Equal-count bins; `None` uses `round(sqrt(m))` bins.
    Binned { bins: Option<usize> },
    StateSpaceSmoother,
}

impl Estimator {
    pub fn binned() -> Self {
        Estimator::Binned { bins: None }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Binned { .. } => "binned",
            Estimator::StateSpaceSmoother => "smoother",
        }
    }
}

/// Signal-to-noise grid searched by the smoother: 10^-3 .. 10^3, 13 points.
pub fn snr_grid() -> Vec<f64> {
    (0..13).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FitDetail {
    Binned { bins: usize },
    Smoother { snr: f64, log_likelihood: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalMeanFit {
    /// Fitted `E[r | x]`, aligned with the input order.
    pub fitted: Vec<f64>,
    pub residual_variance: f64,
    pub detail: FitDetail,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Population variance.
pub fn variance(v: &[f64]) -> f64 {
    if v.iter().all(|x| *x == v[0]) {
        return 0.0;
    }
    let mu = mean(v);
    v.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / v.len() as f64
}

/// Indices sorting the pairs by `x`, then `r`, so the result depends only on
/// the multiset of pairs.
fn sorted_indices(x: &[f64], r: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| {
        x[a].total_cmp(&x[b])
            .then_with(|| r[a].total_cmp(&r[b]))
    });
    idx
}

/// Spans `[start, end)` of equal `x` in sorted order.
fn tie_groups(xs: &[f64]) -> Vec<(usize, usize)> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=xs.len() {
        if i == xs.len() || xs[i] != xs[start] {
            groups.push((start, i));
            start = i;
        }
    }
    groups
}

pub fn conditional_mean(x: &[f64], r: &[f64], estimator: Estimator) -> Result<ConditionalMeanFit> {
    if x.len() != r.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: r.len(),
        });
    }
    let m = x.len();
    let order = sorted_indices(x, r);
    let xs: Vec<f64> = order.iter().map(|&i| x[i]).collect();
    let ys: Vec<f64> = order.iter().map(|&i| r[i]).collect();

    let (sorted_fit, detail) = match estimator {
        Estimator::Binned { bins } => {
            let k = bins.unwrap_or_else(|| ((m as f64).sqrt().round() as usize).max(1));
            if k == 0 || m < 2 * k {
                return Err(Error::TooFewPoints {
                    needed: 2 * k.max(1),
                    got: m,
                });
            }
            (binned_fit(&xs, &ys, k), FitDetail::Binned { bins: k })
        }
        Estimator::StateSpaceSmoother => {
            if m < SMOOTHER_MIN_POINTS {
                return Err(Error::TooFewPoints {
                    needed: SMOOTHER_MIN_POINTS,
                    got: m,
                });
            }
            let (fit, snr, ll) = smoother_fit(&xs, &ys);
            (
                fit,
                FitDetail::Smoother {
                    snr,
                    log_likelihood: ll,
                },
            )
        }
    };

    let mut fitted = vec![0.0; m];
    for (pos, &i) in order.iter().enumerate() {
        fitted[i] = sorted_fit[pos];
    }
    let residuals: Vec<f64> = r.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    Ok(ConditionalMeanFit {
        residual_variance: variance(&residuals),
        fitted,
        detail,
    })
}

/// Bin means over `k` roughly equal-count bins. Bin edges never split a run
/// of equal `x`.
fn binned_fit(xs: &[f64], ys: &[f64], k: usize) -> Vec<f64> {
    let m = xs.len();
    let mut edges = vec![0];
    for i in 1..k {
        let mut b = i * m / k;
        while b < m && b > 0 && xs[b] == xs[b - 1] {
            b += 1;
        }
        if b > *edges.last().unwrap() && b < m {
            edges.push(b);
        }
    }
    edges.push(m);

    let mut fit = vec![0.0; m];
    for w in edges.windows(2) {
        let mu = mean(&ys[w[0]..w[1]]);
        fit[w[0]..w[1]].fill(mu);
    }
    fit
}

struct FilterPass {
    filtered_mean: Vec<f64>,
    filtered_var: Vec<f64>,
    log_likelihood: f64,
}

/// Local-level filter in units of the observation variance, with the state
/// variance `snr` per step and an exact diffuse start on the first point.
/// Returns the concentrated log-likelihood (observation variance profiled out).
fn local_level_filter(ys: &[f64], snr: f64) -> FilterPass {
    let t_len = ys.len();
    let mut filtered_mean = Vec::with_capacity(t_len);
    let mut filtered_var = Vec::with_capacity(t_len);
    let (mut level, mut p) = (ys[0], 1.0);
    filtered_mean.push(level);
    filtered_var.push(p);

    let (mut sum_scaled_sq, mut sum_log_f) = (0.0, 0.0);
    for &y in &ys[1..] {
        let p_pred = p + snr;
        let f = p_pred + 1.0;
        let innovation = y - level;
        let gain = p_pred / f;
        level += gain * innovation;
        p = p_pred / f;
        sum_scaled_sq += innovation * innovation / f;
        sum_log_f += f.ln();
        filtered_mean.push(level);
        filtered_var.push(p);
    }

    let df = (t_len - 1) as f64;
    let sigma2 = (sum_scaled_sq / df).max(f64::MIN_POSITIVE);
    let log_likelihood =
        -0.5 * (df * (sigma2.ln() + 1.0 + (2.0 * std::f64::consts::PI).ln()) + sum_log_f);
    FilterPass {
        filtered_mean,
        filtered_var,
        log_likelihood,
    }
}

/// Fixed-interval (Rauch-Tung-Striebel) smoothing of a filter pass.
fn smooth(pass: &FilterPass, snr: f64) -> Vec<f64> {
    let t_len = pass.filtered_mean.len();
    let mut smoothed = pass.filtered_mean.clone();
    for t in (0..t_len - 1).rev() {
        let gain = pass.filtered_var[t] / (pass.filtered_var[t] + snr);
        smoothed[t] = pass.filtered_mean[t] + gain * (smoothed[t + 1] - pass.filtered_mean[t]);
    }
    smoothed
}

fn smoother_fit(xs: &[f64], ys: &[f64]) -> (Vec<f64>, f64, f64) {
    let (snr, pass) = snr_grid()
        .into_iter()
        .map(|q| (q, local_level_filter(ys, q)))
        .fold(None::<(f64, FilterPass)>, |best, (q, pass)| match best {
            Some(b) if b.1.log_likelihood >= pass.log_likelihood => Some(b),
            _ => Some((q, pass)),
        })
        .expect("grid is non-empty");
    let mut fit = smooth(&pass, snr);
    // equal x must share one conditional mean
    for (a, b) in tie_groups(xs) {
        if b - a > 1 {
            let mu = mean(&fit[a..b]);
            fit[a..b].fill(mu);
        }
    }
    (fit, snr, pass.log_likelihood)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectDiagnostics {
    pub raw_eta_sq: f64,
    pub residual_variance: f64,
    pub samples: usize,
    pub fit: FitDetail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainEffects {
    pub criteria: Vec<String>,
    /// Estimates clamped to `[0, 1]`.
    pub eta_sq: Vec<f64>,
    pub estimator: Estimator,
    pub output_variance: f64,
    pub diagnostics: Vec<EffectDiagnostics>,
}

/// Correlation ratios of each input column against `output`.
///
/// This is the estimator core; [`main_effects`] feeds it TOPSIS scores.
pub fn main_effects_from_samples(
    criteria: &[String],
    columns: &[Vec<f64>],
    output: &[f64],
    estimator: Estimator,
) -> Result<MainEffects> {
    if columns.len() != criteria.len() {
        return Err(Error::WeightCount {
            expected: criteria.len(),
            got: columns.len(),
        });
    }
    if output.is_empty() {
        return Err(Error::TooFewPoints { needed: 2, got: 0 });
    }
    let output_variance = variance(output);
    if !(output_variance > 1e-24) {
        return Err(Error::ZeroOutputVariance);
    }
    let diagnostics = columns
        .par_iter()
        .map(|x| {
            let fit = conditional_mean(x, output, estimator)?;
            Ok(EffectDiagnostics {
                raw_eta_sq: variance(&fit.fitted) / output_variance,
                residual_variance: fit.residual_variance,
                samples: output.len(),
                fit: fit.detail,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MainEffects {
        criteria: criteria.to_vec(),
        eta_sq: diagnostics
            .iter()
            .map(|d| d.raw_eta_sq.clamp(0.0, 1.0))
            .collect(),
        estimator,
        output_variance,
        diagnostics,
    })
}

/// Main effects of the criteria of one matrix on its TOPSIS scores.
pub fn main_effects(
    matrix: &PerformanceMatrix,
    weights: &[f64],
    estimator: Estimator,
) -> Result<MainEffects> {
    pooled_main_effects(std::slice::from_ref(matrix), weights, estimator)
}

/// Main effects with one `(x, r)` sample per alternative and matrix: every
/// matrix is ranked separately and the samples are concatenated.
pub fn pooled_main_effects(
    matrices: &[PerformanceMatrix],
    weights: &[f64],
    estimator: Estimator,
) -> Result<MainEffects> {
    let Some(first) = matrices.first() else {
        return Err(Error::TooFewPoints { needed: 2, got: 0 });
    };
    let n = first.n();
    let ids: Vec<String> = first.criteria().iter().map(|c| c.id.clone()).collect();
    let mut columns = vec![Vec::new(); n];
    let mut output = Vec::new();
    for matrix in matrices {
        if matrix.criteria().iter().map(|c| &c.id).ne(ids.iter()) {
            return Err(Error::CriteriaMismatch { year: 0 });
        }
        let issues = matrix.issues();
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }
        let (scores, _) = topsis::closeness_scores(matrix, weights)?;
        for (j, col) in columns.iter_mut().enumerate() {
            col.extend((0..matrix.m()).map(|i| matrix.get(i, j)));
        }
        output.extend(scores);
    }
    main_effects_from_samples(&ids, &columns, &output, estimator)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedScheme {
    pub name: String,
    pub weights: WeightVector,
}

/// The three weightings compared side by side: least and most weighted for
/// `focus`, and the given (expert) weights.
pub fn canonical_schemes(
    criteria: &[String],
    focus: usize,
    given: WeightVector,
) -> Result<Vec<NamedScheme>> {
    let n = criteria.len();
    let id = criteria
        .get(focus)
        .ok_or(Error::IndexOutOfRange { index: focus, n })?;
    Ok(vec![
        NamedScheme {
            name: format!("least_{id}"),
            weights: scenario_weights_with_ratio(
                n,
                focus,
                ScenarioKind::LeastWeighted,
                DEFAULT_SCENARIO_RATIO,
            )?,
        },
        NamedScheme {
            name: format!("most_{id}"),
            weights: scenario_weights_with_ratio(
                n,
                focus,
                ScenarioKind::MostWeighted,
                DEFAULT_SCENARIO_RATIO,
            )?,
        },
        NamedScheme {
            name: "given".into(),
            weights: given,
        },
    ])
}

pub fn weight_scheme_comparison(
    matrices: &[PerformanceMatrix],
    schemes: &[NamedScheme],
    estimator: Estimator,
) -> Result<Vec<(String, MainEffects)>> {
    schemes
        .iter()
        .map(|s| Ok((s.name.clone(), pooled_main_effects(matrices, &s.weights, estimator)?)))
        .collect()
}
