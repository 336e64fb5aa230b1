//! CSV and JSON formats for matrices, criteria and analysis outputs.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! values always produce equal bytes.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gsa::MainEffects;
use crate::ingestion::{
    PercentilePanel, PersonCriteria, ProgramStatus, Window, YearAggregate,
};
use crate::model::{CriterionSpec, PerformanceMatrix, RankingResult};
use crate::scenario::ScenarioPanel;

fn num(x: f64) -> String {
    x.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn create(path: &Path) -> Result<File> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    File::create(path).map_err(|e| Error::io(path, e))
}

pub fn read_criteria(path: &Path) -> Result<Vec<CriterionSpec>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_reader(file)?)
}

pub fn write_criteria(path: &Path, criteria: &[CriterionSpec]) -> Result<()> {
    let mut file = create(path)?;
    serde_json::to_writer_pretty(&mut file, criteria)?;
    writeln!(file).map_err(|e| Error::io(path, e))
}

/// `matrix_2015.csv` → `matrix_2015.support.csv`
pub fn support_path(matrix_path: &Path) -> PathBuf {
    let stem = matrix_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    matrix_path.with_file_name(format!("{stem}.support.csv"))
}

fn read_table<T>(
    path: &Path,
    criteria: &[CriterionSpec],
    parse: impl Fn(&str) -> Option<T>,
) -> Result<(Vec<String>, Vec<Vec<T>>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = reader.headers()?.clone();
    let expected = std::iter::once("alternative").chain(criteria.iter().map(|c| c.id.as_str()));
    if header.iter().ne(expected) {
        return Err(Error::parse(
            path,
            1,
            format!(
                "expected header 'alternative,{}'",
                criteria.iter().map(|c| c.id.as_str()).collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        ids.push(rec[0].to_string());
        let row = rec
            .iter()
            .skip(1)
            .zip(criteria)
            .map(|(cell, c)| {
                parse(cell).ok_or_else(|| {
                    Error::parse(path, line, format!("bad value '{cell}' for {}", c.id))
                })
            })
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
    }
    Ok((ids, rows))
}

/// Reads a matrix CSV (`alternative,<criterion ids>`) and, when present, its
/// support file. The header must list `criteria` in order. The matrix is not
/// validated.
pub fn read_matrix(path: &Path, criteria: &[CriterionSpec]) -> Result<PerformanceMatrix> {
    let (ids, rows) = read_table(path, criteria, |s| s.parse::<f64>().ok())?;
    let matrix = PerformanceMatrix::from_rows(ids.clone(), criteria.to_vec(), rows)?;
    let sp = support_path(path);
    if !sp.exists() {
        return Ok(matrix);
    }
    let (support_ids, support) = read_table(&sp, criteria, |s| s.parse::<u32>().ok())?;
    if support_ids != ids {
        return Err(Error::parse(&sp, 1, "alternatives differ from the matrix file"));
    }
    matrix.with_support(support)
}

pub fn write_matrix(path: &Path, matrix: &PerformanceMatrix) -> Result<()> {
    let header: Vec<&str> = std::iter::once("alternative")
        .chain(matrix.criteria().iter().map(|c| c.id.as_str()))
        .collect();
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(&header)?;
    for (i, id) in matrix.alternatives().iter().enumerate() {
        w.write_record(std::iter::once(id.clone()).chain(matrix.row(i).iter().map(|&x| num(x))))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;

    if matrix.has_support() {
        let sp = support_path(path);
        let mut w = csv::Writer::from_writer(create(&sp)?);
        w.write_record(&header)?;
        for (i, id) in matrix.alternatives().iter().enumerate() {
            w.write_record(
                std::iter::once(id.clone()).chain(
                    (0..matrix.n()).map(|j| matrix.support(i, j).unwrap_or(0).to_string()),
                ),
            )?;
        }
        w.flush().map_err(|e| Error::io(&sp, e))?;
    }
    Ok(())
}

/// Reads every `matrix_<year>.csv` in `dir`.
pub fn read_matrices_dir(
    dir: &Path,
    criteria: &[CriterionSpec],
) -> Result<BTreeMap<i32, PerformanceMatrix>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let year = name
            .strip_prefix("matrix_")
            .and_then(|s| s.strip_suffix(".csv"))
            .and_then(|s| s.parse::<i32>().ok());
        if let Some(year) = year {
            out.insert(year, read_matrix(&path, criteria)?);
        }
    }
    if out.is_empty() {
        return Err(Error::parse(dir, 0, "no matrix_<year>.csv files"));
    }
    Ok(out)
}

pub fn write_ranking<W: Write>(out: W, ranking: &RankingResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alternative", "score", "rank", "percentile"])?;
    for i in 0..ranking.len() {
        w.write_record([
            ranking.alternatives[i].clone(),
            num(ranking.scores[i]),
            ranking.ranks[i].to_string(),
            num(ranking.percentiles[i]),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_scenarios<W: Write>(out: W, panel: &ScenarioPanel) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["criterion", "year", "distance"])?;
    for c in &panel.criteria {
        for (year, d) in &c.distances {
            w.write_record([c.criterion_id.clone(), year.to_string(), num(*d)])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_scenario_summary<W: Write>(out: W, panel: &ScenarioPanel) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["criterion", "years", "min", "q1", "median", "q3", "max"])?;
    for c in &panel.criteria {
        let s = c.summary;
        w.write_record([
            c.criterion_id.clone(),
            c.distances.len().to_string(),
            num(s.min),
            num(s.q1),
            num(s.median),
            num(s.q3),
            num(s.max),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// One block of rows per `(scheme, effects)` pair.
pub fn write_gsa<W: Write>(out: W, results: &[(String, MainEffects)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["criterion", "scheme", "eta_sq", "raw_eta_sq", "residual_var"])?;
    for (scheme, fx) in results {
        for (j, id) in fx.criteria.iter().enumerate() {
            let d = &fx.diagnostics[j];
            w.write_record([
                id.clone(),
                scheme.clone(),
                num(fx.eta_sq[j]),
                num(d.raw_eta_sq),
                num(d.residual_variance),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_person_criteria<W: Write>(out: W, scores: &[PersonCriteria]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "person_id", "program_id", "family_id", "year", "c1", "c2", "c3", "c4", "c5", "c6", "c7",
        "c8",
    ])?;
    for s in scores {
        let mut row = vec![
            s.person_id.clone(),
            s.program_id.clone(),
            s.family_id.clone(),
            s.graduation_year.to_string(),
        ];
        row.extend(s.values.iter().map(|v| opt(*v)));
        w.write_record(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Every program-year with its fate: `kept`, `low_support` (first criterion
/// below the threshold) or `year_excluded` (year outside the window).
pub fn write_filter_report<W: Write>(
    out: W,
    years: &BTreeMap<i32, YearAggregate>,
    window: &Window,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["year", "program_id", "family_id", "persons", "status", "detail"])?;
    for (year, agg) in years {
        for p in &agg.programs {
            let (status, detail) = match &p.status {
                ProgramStatus::LowSupport { criterion, support } => {
                    ("low_support", format!("{criterion} support {support}"))
                }
                ProgramStatus::Kept if !window.contains(*year) => (
                    "year_excluded",
                    format!(
                        "{} programs kept, {} required",
                        window.counts[year], window.min_programs
                    ),
                ),
                ProgramStatus::Kept => ("kept", String::new()),
            };
            w.write_record([
                year.to_string(),
                p.program_id.clone(),
                p.family_id.clone(),
                p.persons.to_string(),
                status.to_string(),
                detail,
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_year_counts<W: Write>(
    out: W,
    years: &BTreeMap<i32, YearAggregate>,
    window: &Window,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["year", "programs", "kept", "in_window"])?;
    for (year, agg) in years {
        w.write_record([
            year.to_string(),
            agg.programs.len().to_string(),
            agg.kept().to_string(),
            window.contains(*year).to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Long format, programs in mean-percentile order.
pub fn write_percentiles<W: Write>(out: W, panel: &PercentilePanel) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["program_id", "family_id", "mean_percentile", "year", "percentile"])?;
    for p in &panel.programs {
        for (year, pct) in &p.years {
            w.write_record([
                p.program_id.clone(),
                p.family_id.clone(),
                num(p.mean_percentile),
                year.to_string(),
                num(*pct),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_family_summary<W: Write>(out: W, panel: &PercentilePanel) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["family_id", "year", "mean", "min", "max", "members"])?;
    for f in &panel.families {
        w.write_record([
            f.family_id.clone(),
            f.year.to_string(),
            num(f.mean),
            num(f.min),
            num(f.max),
            f.members.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes `program_id,family_id` pairs.
pub fn write_programs<W: Write>(out: W, families: &BTreeMap<String, String>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["program_id", "family_id"])?;
    for (p, f) in families {
        w.write_record([p, f])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Reads `programs.csv`; returns an empty map when the file is absent.
pub fn read_programs(path: &Path) -> Result<BTreeMap<String, String>> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let mut reader = csv::Reader::from_path(path)?;
    let mut out = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.len() < 2 {
            let line = rec.position().map_or(0, |p| p.line());
            return Err(Error::parse(path, line, "expected program_id,family_id"));
        }
        out.insert(rec[0].to_string(), rec[1].to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingestion::default_criteria;

    #[test]
    fn matrix_round_trip_with_support() {
        let dir = tempfile::tempdir().unwrap();
        let crits = default_criteria();
        let rows = vec![
            vec![1.5, 2.0, 0.25, 0.1, 3.0, 4.0, 0.3, 100.0],
            vec![2.5, 1.0, 0.75, 0.2, 1.0, 2.0, 0.6, 50.0],
        ];
        let m = PerformanceMatrix::from_rows(vec!["A".into(), "B".into()], crits.clone(), rows)
            .unwrap()
            .with_support(vec![vec![6; 8], vec![7; 8]])
            .unwrap();
        let path = dir.path().join("matrix_2015.csv");
        write_matrix(&path, &m).unwrap();
        assert!(dir.path().join("matrix_2015.support.csv").exists());
        let back = read_matrices_dir(dir.path(), &crits).unwrap();
        assert_eq!(back[&2015], m);
    }

    #[test]
    fn bad_cell_names_line() {
        let dir = tempfile::tempdir().unwrap();
        let crits = &default_criteria()[..2];
        let path = dir.path().join("m.csv");
        std::fs::write(&path, "alternative,C1,C2\nA,1,2\nB,x,3\n").unwrap();
        match read_matrix(&path, crits) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("C1"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_must_match_criteria() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        std::fs::write(&path, "alternative,C2,C1\nA,1,2\n").unwrap();
        assert!(matches!(
            read_matrix(&path, &default_criteria()[..2]),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
