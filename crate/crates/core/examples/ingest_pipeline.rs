//! From raw graduate and contract records to yearly performance matrices.
//!
//! Writes a seeded synthetic record set to a temporary directory, loads it
//! back and prints what the filters kept. The synthetic cohort is small, so
//! the year window threshold is lowered to 6 programs.

use vetrank::fixture::{synthetic_records, write_records, SyntheticConfig};
use vetrank::ingestion::{default_criteria, load_datasets, LoadOptions};
use vetrank::pipeline::{self, IngestOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("vetrank-ingest-example");
    write_records(&synthetic_records(&SyntheticConfig::default()), &dir)?;

    let dataset = load_datasets(
        &dir.join("graduates.csv"),
        &dir.join("contracts.csv"),
        &dir.join("sector_map.csv"),
        LoadOptions::default(),
    )?;
    let r = &dataset.report;
    println!(
        "{} graduates, {} contracts, {} duplicates dropped, {} orphans",
        r.graduates, r.contracts, r.duplicate_contracts, r.orphan_contracts
    );

    let out = pipeline::ingest(
        &dataset,
        &default_criteria(),
        IngestOptions {
            min_programs: 6,
            ..Default::default()
        },
    )?;
    for (year, agg) in &out.years {
        let dropped: Vec<&str> = agg
            .programs
            .iter()
            .filter(|p| !p.is_kept())
            .map(|p| p.program_id.as_str())
            .collect();
        println!(
            "{year}: {} programs kept, dropped {:?}, in window: {}",
            agg.kept(),
            dropped,
            out.window.contains(*year)
        );
    }

    let target = dir.join("out");
    pipeline::write_ingest(&out, &target)?;
    println!("outputs in {}", target.display());
    Ok(())
}
