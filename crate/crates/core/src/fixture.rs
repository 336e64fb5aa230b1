//! Seeded synthetic data for demos and tests.
//!
//! [`synthetic_records`] produces graduate and contract records with the
//! same schemas as the real inputs, at roughly 1/100 of a regional dataset.
//! [`adversarial_panel`] produces ready-made yearly matrices with two
//! designed criteria: one that runs against the others and one that barely
//! varies across programs.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use chrono::{Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ingestion::{
    default_criteria, ContractRecord, ContractType, GraduateRecord, SectorFamilyMap,
};
use crate::model::{Direction, PerformanceMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub persons: usize,
    pub first_year: i32,
    pub years: i32,
    /// Share of persons holding a second degree from a later year.
    pub second_degree_rate: f64,
    pub observation_end: NaiveDate,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            persons: 280,
            first_year: 2013,
            years: 3,
            second_degree_rate: 0.03,
            observation_end: NaiveDate::from_ymd_opt(2016, 12, 31).unwrap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticRecords {
    pub graduates: Vec<GraduateRecord>,
    pub contracts: Vec<ContractRecord>,
    pub sector_map: SectorFamilyMap,
    pub observation_end: NaiveDate,
}

// (family, programs, sector codes serving it)
const FAMILIES: [(&str, [&str; 3], &[&str]); 4] = [
    ("HOT", ["HOT_COOK", "HOT_SERV", "HOT_TOUR"], &["I55", "I56", "M73"]),
    ("IFC", ["IFC_WEB", "IFC_NET", "IFC_SYS"], &["J62", "J63", "M73"]),
    ("ALA", ["ALA_CROP", "ALA_FOREST", "ALA_LIVE"], &["A01", "A02"]),
    ("COM", ["COM_SALES", "COM_LOG", "COM_MKT"], &["G46", "G47"]),
];
const OTHER_CODES: [&str; 3] = ["F41", "N81", "Q86"];
const UNKNOWN_CODE: &str = "X00";

pub fn synthetic_sector_map() -> SectorFamilyMap {
    let mut pairs: Vec<(&str, &str)> = FAMILIES
        .iter()
        .flat_map(|(fam, _, codes)| codes.iter().map(move |c| (*c, *fam)))
        .collect();
    pairs.extend(OTHER_CODES.iter().map(|c| (*c, "OTHER")));
    SectorFamilyMap::from_pairs(pairs)
}

fn add_days(d: NaiveDate, days: i64) -> NaiveDate {
    if days >= 0 {
        d + Days::new(days as u64)
    } else {
        d - Days::new(days.unsigned_abs())
    }
}

/// Generates a linked-record dataset. Program quality is a fixed latent
/// value; better programs place graduates sooner, more often in-field and
/// on longer, more stable contracts. Program enrolment is uneven so some
/// program-years fall below the support threshold.
pub fn synthetic_records(config: &SyntheticConfig) -> SyntheticRecords {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let programs: Vec<(&str, &str, &[&str], f64, f64)> = FAMILIES
        .iter()
        .flat_map(|(fam, progs, codes)| progs.iter().map(move |p| (*p, *fam, *codes)))
        .enumerate()
        .map(|(k, (p, fam, codes))| {
            let quality = ((k * 5) % 12) as f64 / 11.0;
            let size = [1.3, 1.0, 0.8][k % 3];
            (p, fam, codes, quality, size)
        })
        .collect();
    let total_size: f64 = programs.iter().map(|p| p.4).sum();

    let pick_program = |rng: &mut ChaCha8Rng| {
        let mut u = rng.random::<f64>() * total_size;
        for (k, p) in programs.iter().enumerate() {
            if u < p.4 {
                return k;
            }
            u -= p.4;
        }
        programs.len() - 1
    };

    let obs = config.observation_end;
    let mut graduates = Vec::new();
    let mut contracts = Vec::new();
    for i in 0..config.persons {
        let person_id = format!("S{i:05}");
        let k = pick_program(&mut rng);
        let (program, family, codes, quality, _) = programs[k];
        let year = config.first_year + rng.random_range(0..config.years);
        let grad = NaiveDate::from_ymd_opt(year, 6, rng.random_range(15..=30)).unwrap();
        graduates.push(GraduateRecord {
            person_id: person_id.clone(),
            program_id: program.into(),
            family_id: family.into(),
            graduation_date: grad,
        });
        if rng.random_bool(config.second_degree_rate) && year + 1 < config.first_year + config.years {
            let (p2, f2, _, _, _) = programs[pick_program(&mut rng)];
            if p2 != program {
                graduates.push(GraduateRecord {
                    person_id: person_id.clone(),
                    program_id: p2.into(),
                    family_id: f2.into(),
                    graduation_date: NaiveDate::from_ymd_opt(year + 1, 6, 28).unwrap(),
                });
            }
        }

        // a summer job before graduation for some
        if rng.random_bool(0.15) {
            let start = add_days(grad, -rng.random_range(200..400));
            contracts.push(ContractRecord {
                person_id: person_id.clone(),
                start_date: start,
                end_date: Some(add_days(start, rng.random_range(20..90))),
                contract_type: ContractType::Temporary,
                sector_code: OTHER_CODES[rng.random_range(0..OTHER_CODES.len())].into(),
            });
        }

        let n_contracts = rng.random_range(2..=(4 + (2.0 * quality) as u32));
        let mut cursor = add_days(grad, rng.random_range(0..(40 + (260.0 * (1.0 - quality)) as i64)));
        for c in 0..n_contracts {
            if cursor > obs {
                break;
            }
            let in_field = rng.random_bool(0.6 + 0.3 * quality);
            let sector_code = if in_field {
                codes[rng.random_range(0..codes.len())].to_string()
            } else if rng.random_bool(0.03) {
                UNKNOWN_CODE.to_string()
            } else {
                OTHER_CODES[rng.random_range(0..OTHER_CODES.len())].to_string()
            };
            let temporary = rng.random_bool(0.85 - 0.5 * quality);
            let length = if temporary {
                rng.random_range(15..120)
            } else {
                rng.random_range(120..500)
            };
            let last = c + 1 == n_contracts;
            let end_date = (!(last && !temporary && rng.random_bool(0.5)))
                .then(|| add_days(cursor, length));
            let record = ContractRecord {
                person_id: person_id.clone(),
                start_date: cursor,
                end_date,
                contract_type: if temporary {
                    ContractType::Temporary
                } else {
                    ContractType::Indefinite
                },
                sector_code,
            };
            // a few contracts reported by both labor sources
            if rng.random_bool(0.02) {
                contracts.push(record.clone());
            }
            contracts.push(record);
            let overlap = rng.random_bool(0.1);
            let gap = if overlap {
                -(length / 2)
            } else {
                rng.random_range(0..(30 + (150.0 * (1.0 - quality)) as i64))
            };
            cursor = add_days(cursor, length + gap.max(-length + 1));
        }
    }
    // contracts of people outside the graduate roster
    for i in 0..3 {
        contracts.push(ContractRecord {
            person_id: format!("Z{i:05}"),
            start_date: NaiveDate::from_ymd_opt(config.first_year, 3, 1).unwrap(),
            end_date: None,
            contract_type: ContractType::Indefinite,
            sector_code: "I55".into(),
        });
    }

    SyntheticRecords {
        graduates,
        contracts,
        sector_map: synthetic_sector_map(),
        observation_end: obs,
    }
}

/// Writes `graduates.csv`, `contracts.csv` and `sector_map.csv` into `dir`.
pub fn write_records(records: &SyntheticRecords, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let open = |name: &str| {
        let path = dir.join(name);
        File::create(&path)
            .map(csv::Writer::from_writer)
            .map_err(|e| Error::io(path, e))
    };

    let mut w = open("graduates.csv")?;
    w.write_record(["person_id", "program_id", "family_id", "graduation_date"])?;
    for g in &records.graduates {
        w.write_record([
            g.person_id.as_str(),
            &g.program_id,
            &g.family_id,
            &g.graduation_date.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(dir.join("graduates.csv"), e))?;

    let mut w = open("contracts.csv")?;
    w.write_record(["person_id", "start_date", "end_date", "contract_type", "sector_code"])?;
    for c in &records.contracts {
        w.write_record([
            c.person_id.as_str(),
            &c.start_date.to_string(),
            &c.end_date.map(|d| d.to_string()).unwrap_or_default(),
            c.contract_type.code(),
            &c.sector_code,
        ])?;
    }
    w.flush().map_err(|e| Error::io(dir.join("contracts.csv"), e))?;

    let mut w = open("sector_map.csv")?;
    w.write_record(["sector_code", "family_id"])?;
    for (code, family) in records.sector_map.pairs() {
        w.write_record([code, family])?;
    }
    w.flush().map_err(|e| Error::io(dir.join("sector_map.csv"), e))?;
    Ok(())
}

/// Column of the criterion whose ordering runs against every other criterion.
pub const OPPOSING_CRITERION: usize = 1;
/// Column of the criterion that varies by about 2% across programs.
pub const REDUNDANT_CRITERION: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialConfig {
    pub seed: u64,
    pub programs: usize,
    pub first_year: i32,
    pub years: i32,
    /// How strictly [`OPPOSING_CRITERION`] reverses the latent quality: 1
    /// is an exact reversal, 0 an independent uniform column.
    pub opposition: f64,
}

impl Default for AdversarialConfig {
    fn default() -> Self {
        Self {
            seed: 11,
            programs: 40,
            first_year: 2012,
            years: 5,
            opposition: 0.3,
        }
    }
}

/// Yearly 8-criterion matrices with the default criteria set.
///
/// Every criterion tracks a latent program quality except
/// [`OPPOSING_CRITERION`], which leans towards the programs that are worst on
/// the rest and spreads widely, and [`REDUNDANT_CRITERION`], which tracks
/// quality but stays within about 2% of its mean.
pub fn adversarial_panel(config: &AdversarialConfig) -> BTreeMap<i32, PerformanceMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let criteria = default_criteria();
    let base: Vec<f64> = (0..config.programs).map(|_| rng.random::<f64>()).collect();
    let ids: Vec<String> = (0..config.programs).map(|i| format!("PRG{i:03}")).collect();

    (0..config.years)
        .map(|t| {
            let year = config.first_year + t;
            let rows = base
                .iter()
                .map(|&b| {
                    let q = (b + 0.1 * rng.random::<f64>()).min(1.0);
                    criteria
                        .iter()
                        .enumerate()
                        .map(|(j, c)| {
                            let noise = 0.15 * rng.random::<f64>();
                            // `good` in [0, 1], larger is better for this criterion
                            let good = match j {
                                OPPOSING_CRITERION => {
                                    config.opposition * (1.0 - q)
                                        + (1.0 - config.opposition) * rng.random::<f64>()
                                }
                                _ => (q + noise) / 1.15,
                            };
                            let (lo, hi) = match j {
                                OPPOSING_CRITERION => (5.0, 400.0),
                                REDUNDANT_CRITERION => (300.0, 306.0),
                                _ => (20.0, 200.0),
                            };
                            let frac = match c.direction {
                                Direction::Benefit => good,
                                Direction::Cost => 1.0 - good,
                            };
                            lo + (hi - lo) * frac
                        })
                        .collect()
                })
                .collect();
            let matrix = PerformanceMatrix::from_rows(ids.clone(), criteria.clone(), rows)
                .and_then(PerformanceMatrix::validate)
                .expect("generated matrix is valid");
            (year, matrix)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_seeded() {
        let cfg = SyntheticConfig::default();
        assert_eq!(synthetic_records(&cfg), synthetic_records(&cfg));
        let other = synthetic_records(&SyntheticConfig { seed: 8, ..cfg.clone() });
        assert_ne!(other, synthetic_records(&cfg));
    }

    #[test]
    fn records_shape() {
        let r = synthetic_records(&SyntheticConfig::default());
        let persons: std::collections::BTreeSet<_> =
            r.graduates.iter().map(|g| &g.person_id).collect();
        assert_eq!(persons.len(), 280);
        let programs: std::collections::BTreeSet<_> =
            r.graduates.iter().map(|g| &g.program_id).collect();
        assert_eq!(programs.len(), 12);
        assert!(r.contracts.iter().all(|c| c.end_date.is_none_or(|e| e >= c.start_date)));
    }

    #[test]
    fn panel_is_seeded_and_valid() {
        let cfg = AdversarialConfig::default();
        let a = adversarial_panel(&cfg);
        assert_eq!(a, adversarial_panel(&cfg));
        assert_eq!(a.len(), 5);
        assert!(a.values().all(|m| m.m() == 40 && m.n() == 8));
    }
}
