//! Raw record types and the in-memory join keyed by person.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::path::Path;

use chrono::NaiveDate;
use log::warn;
use serde::{Deserialize, Serialize};

use super::intervals::{day_number, DaySet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GraduateRecord {
    pub person_id: String,
    pub program_id: String,
    pub family_id: String,
    pub graduation_date: NaiveDate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ContractType {
    Temporary,
    Indefinite,
}

impl ContractType {
    pub fn code(self) -> &'static str {
        match self {
            ContractType::Temporary => "T",
            ContractType::Indefinite => "I",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ContractRecord {
    pub person_id: String,
    pub start_date: NaiveDate,
    /// `None` for open-ended contracts.
    pub end_date: Option<NaiveDate>,
    pub contract_type: ContractType,
    pub sector_code: String,
}

impl ContractRecord {
    /// End date capped at `observation_end`.
    pub fn effective_end(&self, observation_end: NaiveDate) -> NaiveDate {
        self.end_date.map_or(observation_end, |e| e.min(observation_end))
    }

    pub fn is_temporary(&self) -> bool {
        self.contract_type == ContractType::Temporary
    }
}

/// Economic sector code → professional families it employs (many-to-many).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectorFamilyMap {
    map: BTreeMap<String, BTreeSet<String>>,
}

impl SectorFamilyMap {
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, S)>) -> Self {
        let mut map: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (code, family) in pairs {
            map.entry(code.into()).or_default().insert(family.into());
        }
        Self { map }
    }

    pub fn contains_code(&self, code: &str) -> bool {
        self.map.contains_key(code)
    }

    /// Whether a contract in `code` counts as in-field for `family`.
    /// Unknown codes map to no family.
    pub fn serves(&self, code: &str, family: &str) -> bool {
        self.map.get(code).is_some_and(|f| f.contains(family))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map
            .iter()
            .flat_map(|(c, fs)| fs.iter().map(move |f| (c.as_str(), f.as_str())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkedPerson {
    pub person_id: String,
    pub graduations: Vec<GraduateRecord>,
    /// Deduplicated contracts sorted by start date.
    pub contracts: Vec<ContractRecord>,
    /// Union of all contract spans, capped at the observation end.
    pub labor: DaySet,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LoadReport {
    pub graduates: usize,
    pub contracts: usize,
    pub duplicate_contracts: usize,
    pub orphan_contracts: usize,
    pub unknown_sector_codes: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Censoring date for open-ended contracts; defaults to the latest date in the data.
    pub observation_end: Option<NaiveDate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkedDataset {
    pub persons: BTreeMap<String, LinkedPerson>,
    pub sector_map: SectorFamilyMap,
    pub observation_end: NaiveDate,
    pub report: LoadReport,
}

impl LinkedDataset {
    /// Joins records by person. Exact duplicate contracts are collapsed and
    /// contracts of unknown persons are counted and dropped.
    pub fn from_records(
        graduates: Vec<GraduateRecord>,
        contracts: Vec<ContractRecord>,
        sector_map: SectorFamilyMap,
        options: LoadOptions,
    ) -> Self {
        let mut report = LoadReport {
            graduates: graduates.len(),
            contracts: contracts.len(),
            ..Default::default()
        };
        let observation_end = options.observation_end.unwrap_or_else(|| {
            graduates
                .iter()
                .map(|g| g.graduation_date)
                .chain(
                    contracts
                        .iter()
                        .flat_map(|c| std::iter::once(c.start_date).chain(c.end_date)),
                )
                .max()
                .unwrap_or(NaiveDate::MIN)
        });

        let mut persons: BTreeMap<String, LinkedPerson> = BTreeMap::new();
        for g in graduates {
            persons
                .entry(g.person_id.clone())
                .or_insert_with(|| LinkedPerson {
                    person_id: g.person_id.clone(),
                    graduations: Vec::new(),
                    contracts: Vec::new(),
                    labor: DaySet::default(),
                })
                .graduations
                .push(g);
        }

        let mut unique = BTreeSet::new();
        for c in contracts {
            if !sector_map.contains_code(&c.sector_code)
                && report.unknown_sector_codes.insert(c.sector_code.clone())
            {
                warn!("sector code '{}' has no family mapping", c.sector_code);
            }
            if !persons.contains_key(&c.person_id) {
                report.orphan_contracts += 1;
                continue;
            }
            if !unique.insert(c) {
                report.duplicate_contracts += 1;
            }
        }
        // BTreeSet order is person, then start date
        for c in unique {
            persons
                .get_mut(&c.person_id)
                .expect("orphans filtered above")
                .contracts
                .push(c);
        }

        for p in persons.values_mut() {
            p.graduations.sort();
            p.labor = DaySet::from_ranges(p.contracts.iter().map(|c| {
                (
                    day_number(c.start_date),
                    day_number(c.effective_end(observation_end)),
                )
            }));
        }

        Self {
            persons,
            sector_map,
            observation_end,
            report,
        }
    }

    /// Program → professional family, from the graduate records.
    pub fn program_families(&self) -> BTreeMap<String, String> {
        self.persons
            .values()
            .flat_map(|p| &p.graduations)
            .map(|g| (g.program_id.clone(), g.family_id.clone()))
            .collect()
    }
}

fn parse_date(path: &Path, line: u64, field: &str, value: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(value.trim(), "%Y-%m-%d")
        .map_err(|e| Error::parse(path, line, format!("{field} '{value}': {e}")))
}

fn open_csv(path: &Path, header: &[&str]) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let got = reader.headers()?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(Error::parse(
            path,
            1,
            format!("expected header '{}'", header.join(",")),
        ));
    }
    Ok(reader)
}

fn records(
    path: &Path,
    header: &[&str],
) -> Result<impl Iterator<Item = Result<(u64, csv::StringRecord)>>> {
    let path_owned = path.to_path_buf();
    let reader = open_csv(path, header)?;
    Ok(reader.into_records().map(move |rec| {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(&path_owned, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        Ok((line, rec))
    }))
}

pub fn read_graduates(path: &Path) -> Result<Vec<GraduateRecord>> {
    records(
        path,
        &["person_id", "program_id", "family_id", "graduation_date"],
    )?
    .map(|r| {
        let (line, rec) = r?;
        Ok(GraduateRecord {
            person_id: rec[0].to_string(),
            program_id: rec[1].to_string(),
            family_id: rec[2].to_string(),
            graduation_date: parse_date(path, line, "graduation_date", &rec[3])?,
        })
    })
    .collect()
}

pub fn read_contracts(path: &Path) -> Result<Vec<ContractRecord>> {
    records(
        path,
        &[
            "person_id",
            "start_date",
            "end_date",
            "contract_type",
            "sector_code",
        ],
    )?
    .map(|r| {
        let (line, rec) = r?;
        let start_date = parse_date(path, line, "start_date", &rec[1])?;
        let end_date = match rec[2].trim() {
            "" => None,
            s => Some(parse_date(path, line, "end_date", s)?),
        };
        if end_date.is_some_and(|e| e < start_date) {
            return Err(Error::parse(path, line, "end_date precedes start_date"));
        }
        let contract_type = match &rec[3] {
            "T" => ContractType::Temporary,
            "I" => ContractType::Indefinite,
            other => {
                return Err(Error::parse(
                    path,
                    line,
                    format!("contract_type '{other}' is not T or I"),
                ))
            }
        };
        Ok(ContractRecord {
            person_id: rec[0].to_string(),
            start_date,
            end_date,
            contract_type,
            sector_code: rec[4].to_string(),
        })
    })
    .collect()
}

pub fn read_sector_map(path: &Path) -> Result<SectorFamilyMap> {
    let pairs = records(path, &["sector_code", "family_id"])?
        .map(|r| r.map(|(_, rec)| (rec[0].to_string(), rec[1].to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(SectorFamilyMap::from_pairs(pairs))
}

pub fn load_datasets(
    graduates_csv: &Path,
    contracts_csv: &Path,
    sector_map_csv: &Path,
    options: LoadOptions,
) -> Result<LinkedDataset> {
    Ok(LinkedDataset::from_records(
        read_graduates(graduates_csv)?,
        read_contracts(contracts_csv)?,
        read_sector_map(sector_map_csv)?,
        options,
    ))
}
