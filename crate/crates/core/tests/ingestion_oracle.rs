mod common;

use vetrank::ingestion::{all_person_criteria, labor_days};

#[test]
fn hand_fixture_matches_worksheet() {
    let ds = common::hand_dataset();
    let got = all_person_criteria(&ds);
    let expected = common::hand_expected();
    assert_eq!(got.len(), expected.len());
    for (person, program, values) in expected {
        let row = got
            .iter()
            .find(|c| c.person_id == person && c.program_id == program)
            .unwrap_or_else(|| panic!("missing {person}/{program}"));
        assert_eq!(row.values, values, "{person}/{program}");
    }
}

#[test]
fn hand_fixture_load_report() {
    let ds = common::hand_dataset();
    assert_eq!(ds.report.graduates, 9);
    assert_eq!(ds.report.contracts, 14);
    assert_eq!(ds.report.orphan_contracts, 1);
    assert_eq!(ds.report.duplicate_contracts, 1);
    assert_eq!(
        ds.report.unknown_sector_codes.iter().collect::<Vec<_>>(),
        vec!["Z99"]
    );
    assert_eq!(ds.persons["p05"].contracts.len(), 2);
}

#[test]
fn day_identities_hold_per_person() {
    let ds = common::hand_dataset();
    for p in ds.persons.values() {
        for g in &p.graduations {
            let d = labor_days(p, g, &ds.sector_map, ds.observation_end);
            assert_eq!(d.in_field + d.out_of_field, d.total, "{}", p.person_id);
            assert!(d.total <= d.window);
            assert!(d.in_field_temporary <= d.in_field.min(d.temporary));
        }
    }
}

#[test]
fn default_observation_end_is_latest_date() {
    let dir = common::hand_dir();
    let ds = vetrank::ingestion::load_datasets(
        &dir.join("graduates.csv"),
        &dir.join("contracts.csv"),
        &dir.join("sector_map.csv"),
        Default::default(),
    )
    .unwrap();
    assert_eq!(ds.observation_end.to_string(), "2017-03-31");
}
