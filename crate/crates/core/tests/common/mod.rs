#![allow(dead_code)]

use std::path::PathBuf;

use chrono::NaiveDate;
use vetrank::ingestion::{load_datasets, LinkedDataset, LoadOptions};

pub fn hand_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/hand")
}

pub fn hand_dataset() -> LinkedDataset {
    let dir = hand_dir();
    load_datasets(
        &dir.join("graduates.csv"),
        &dir.join("contracts.csv"),
        &dir.join("sector_map.csv"),
        LoadOptions {
            observation_end: NaiveDate::from_ymd_opt(2016, 12, 31),
        },
    )
    .expect("hand fixture loads")
}

/// `(person, program, values)` rows of the hand worksheet. Fractions are
/// written `a/b` and evaluated as one f64 division.
pub fn hand_expected() -> Vec<(String, String, [Option<f64>; 8])> {
    let mut reader = csv::Reader::from_path(hand_dir().join("expected_criteria.csv")).unwrap();
    reader
        .records()
        .map(|rec| {
            let rec = rec.unwrap();
            let mut values = [None; 8];
            for (j, v) in values.iter_mut().enumerate() {
                let cell = &rec[j + 2];
                *v = match cell.split_once('/') {
                    _ if cell.is_empty() => None,
                    Some((a, b)) => Some(a.parse::<i64>().unwrap() as f64 / b.parse::<i64>().unwrap() as f64),
                    None => Some(cell.parse().unwrap()),
                };
            }
            (rec[0].to_string(), rec[1].to_string(), values)
        })
        .collect()
}

/// Straight-line TOPSIS: vector normalization, weighting, ideal and
/// antiideal per direction, Euclidean distances, closeness.
pub fn oracle_topsis(rows: &[Vec<f64>], benefit: &[bool], weights: &[f64]) -> Vec<f64> {
    let m = rows.len();
    let n = weights.len();
    let mut v = vec![vec![0.0; n]; m];
    for j in 0..n {
        let mut ss = 0.0;
        for row in rows {
            ss += row[j] * row[j];
        }
        let norm = ss.sqrt();
        for i in 0..m {
            v[i][j] = weights[j] * (rows[i][j] / norm);
        }
    }
    let mut best = vec![0.0; n];
    let mut worst = vec![0.0; n];
    for j in 0..n {
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for row in &v {
            hi = hi.max(row[j]);
            lo = lo.min(row[j]);
        }
        if benefit[j] {
            best[j] = hi;
            worst[j] = lo;
        } else {
            best[j] = lo;
            worst[j] = hi;
        }
    }
    let mut scores = Vec::with_capacity(m);
    for row in &v {
        let mut db = 0.0;
        let mut dw = 0.0;
        for j in 0..n {
            db += (row[j] - best[j]) * (row[j] - best[j]);
            dw += (row[j] - worst[j]) * (row[j] - worst[j]);
        }
        let (db, dw) = (db.sqrt(), dw.sqrt());
        scores.push(dw / (dw + db));
    }
    scores
}

/// O(m²) count of pairs ordered differently by two best-first orders.
pub fn brute_kendall(a: &[usize], b: &[usize]) -> f64 {
    let m = a.len();
    let mut pos_a = vec![0; m];
    let mut pos_b = vec![0; m];
    for (k, &x) in a.iter().enumerate() {
        pos_a[x] = k;
    }
    for (k, &x) in b.iter().enumerate() {
        pos_b[x] = k;
    }
    let mut discordant = 0usize;
    for x in 0..m {
        for y in x + 1..m {
            if (pos_a[x] < pos_a[y]) != (pos_b[x] < pos_b[y]) {
                discordant += 1;
            }
        }
    }
    discordant as f64 / (m * (m - 1) / 2) as f64
}

pub fn matrix(
    rows: Vec<Vec<f64>>,
    benefit: &[bool],
) -> vetrank::PerformanceMatrix {
    use vetrank::{CriterionSpec, Direction};
    let alts = (0..rows.len()).map(|i| format!("A{i}")).collect();
    let crits = benefit
        .iter()
        .enumerate()
        .map(|(j, &b)| {
            let dir = if b { Direction::Benefit } else { Direction::Cost };
            CriterionSpec::new(format!("C{}", j + 1), "", dir, 1.0)
        })
        .collect();
    vetrank::PerformanceMatrix::from_rows(alts, crits, rows).unwrap()
}
