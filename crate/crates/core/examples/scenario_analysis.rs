//! Most/least weighted scenarios on the adversarial panel. The opposing
//! criterion should move the ranking most; the redundant one hardly at all.

use vetrank::fixture::{adversarial_panel, AdversarialConfig};
use vetrank::scenario::scenario_panel;

fn main() -> vetrank::Result<()> {
    let matrices = adversarial_panel(&AdversarialConfig::default());
    let panel = scenario_panel(&matrices)?;

    println!("{:<4} {:>7} {:>7} {:>7} {:>7} {:>7}", "", "min", "q1", "median", "q3", "max");
    for c in &panel.criteria {
        let s = &c.summary;
        println!(
            "{:<4} {:>7.3} {:>7.3} {:>7.3} {:>7.3} {:>7.3}",
            c.criterion_id, s.min, s.q1, s.median, s.q3, s.max
        );
    }

    let (year, results) = panel.per_year.iter().next().expect("non-empty panel");
    let top = &results[1];
    println!(
        "\n{year}, {}: best program under most weighting is {}, under least weighting {}",
        top.criterion_id,
        top.ranking_most.order().as_slice().first().map(|&i| &top.ranking_most.alternatives[i]).unwrap(),
        top.ranking_least.order().as_slice().first().map(|&i| &top.ranking_least.alternatives[i]).unwrap(),
    );
    Ok(())
}
