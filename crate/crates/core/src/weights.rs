//! Relative-to-absolute weight conversion and scenario weight vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::WeightVector;

/// Relative weight ratio between the focused criterion and the rest in the
/// most/least weighted scenarios.
pub const DEFAULT_SCENARIO_RATIO: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    MostWeighted,
    LeastWeighted,
}

/// Divides each relative weight by their sum.
pub fn normalize(relative: &[f64]) -> Result<WeightVector> {
    if let Some((index, &value)) = relative
        .iter()
        .enumerate()
        .find(|(_, w)| !(**w > 0.0 && w.is_finite()))
    {
        return Err(Error::NonPositiveWeight { index, value });
    }
    if relative.is_empty() {
        return Err(Error::WeightCount {
            expected: 1,
            got: 0,
        });
    }
    let total: f64 = relative.iter().sum();
    WeightVector::new(relative.iter().map(|w| w / total).collect())
}

/// Weights for the scenario focused on criterion `focus` (0-based), using the
/// default 2:1 ratio.
pub fn scenario_weights(n: usize, focus: usize, kind: ScenarioKind) -> Result<WeightVector> {
    scenario_weights_with_ratio(n, focus, kind, DEFAULT_SCENARIO_RATIO)
}

/// Most weighted: the focus gets `ratio`, everyone else 1. Least weighted: the
/// focus gets 1, everyone else `ratio`.
pub fn scenario_weights_with_ratio(
    n: usize,
    focus: usize,
    kind: ScenarioKind,
    ratio: f64,
) -> Result<WeightVector> {
    if n < 2 {
        return Err(Error::TooFewCriteria { needed: 2, got: n });
    }
    if focus >= n {
        return Err(Error::IndexOutOfRange { index: focus, n });
    }
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::NonPositiveWeight {
            index: focus,
            value: ratio,
        });
    }
    let (focused, others) = match kind {
        ScenarioKind::MostWeighted => (ratio, 1.0),
        ScenarioKind::LeastWeighted => (1.0, ratio),
    };
    let relative: Vec<f64> = (0..n)
        .map(|j| if j == focus { focused } else { others })
        .collect();
    normalize(&relative)
}

/// Parses `"4,2.5,1"` style weight lists.
pub fn parse_weight_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::WeightList(s.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn delphi_weights() {
        let relative = [4.0, 2.5, 1.0, 1.0, 3.0, 2.0, 1.0, 1.0];
        let w = normalize(&relative).unwrap();
        for (got, r) in w.iter().zip(relative) {
            assert_eq!(*got, r / 15.5);
        }
        // three-decimal display values agree wherever plain rounding applies
        let rounded: Vec<f64> = w.iter().map(|x| (x * 1000.0).round() / 1000.0).collect();
        assert_eq!(
            rounded,
            vec![0.258, 0.161, 0.065, 0.065, 0.194, 0.129, 0.065, 0.065]
        );
    }

    #[test]
    fn trivial_normalizations() {
        assert_eq!(&*normalize(&[1.0; 4]).unwrap(), &[0.25; 4]);
        assert_eq!(&*normalize(&[2.0, 1.0, 1.0]).unwrap(), &[0.5, 0.25, 0.25]);
        assert!(matches!(
            normalize(&[1.0, -1.0]),
            Err(Error::NonPositiveWeight { index: 1, .. })
        ));
    }

    #[test]
    fn scenario_vectors() {
        let most = scenario_weights(8, 2, ScenarioKind::MostWeighted).unwrap();
        assert!((most[2] - 2.0 / 9.0).abs() < 1e-15);
        assert!((most[0] - 1.0 / 9.0).abs() < 1e-15);
        let least = scenario_weights(8, 2, ScenarioKind::LeastWeighted).unwrap();
        assert!((least[2] - 1.0 / 15.0).abs() < 1e-15);
        assert!((least[7] - 2.0 / 15.0).abs() < 1e-15);
        let two = scenario_weights(2, 0, ScenarioKind::MostWeighted).unwrap();
        assert!((two[0] - 2.0 / 3.0).abs() < 1e-15 && (two[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn scenario_errors() {
        assert!(matches!(
            scenario_weights(3, 3, ScenarioKind::MostWeighted),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        ));
        assert!(matches!(
            scenario_weights(1, 0, ScenarioKind::LeastWeighted),
            Err(Error::TooFewCriteria { .. })
        ));
    }

    #[test]
    fn parses_flag() {
        assert_eq!(parse_weight_list("4, 2.5,1").unwrap(), vec![4.0, 2.5, 1.0]);
        assert!(parse_weight_list("1,x").is_err());
    }

    proptest! {
        #[test]
        fn normalize_is_scale_invariant(
            v in prop::collection::vec(0.1f64..10.0, 1..10),
            c in 0.01f64..100.0,
        ) {
            let a = normalize(&v).unwrap();
            let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
            let b = normalize(&scaled).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn scenario_focus_ratio(n in 2usize..20, seed in 0usize..1000) {
            let focus = seed % n;
            let most = scenario_weights(n, focus, ScenarioKind::MostWeighted).unwrap();
            let least = scenario_weights(n, focus, ScenarioKind::LeastWeighted).unwrap();
            prop_assert!((most.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!((least.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for j in (0..n).filter(|&j| j != focus) {
                prop_assert!((most[focus] - 2.0 * most[j]).abs() < 1e-12);
                prop_assert!((least[focus] - 0.5 * least[j]).abs() < 1e-12);
            }
        }
    }
}
