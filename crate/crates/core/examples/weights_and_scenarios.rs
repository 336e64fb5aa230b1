//! Relative weights to absolute weights, and the two scenario weightings.

use vetrank::ingestion::default_criteria;
use vetrank::weights::{normalize, scenario_weights, ScenarioKind};

fn main() -> vetrank::Result<()> {
    let criteria = default_criteria();
    let relative: Vec<f64> = criteria.iter().map(|c| c.relative_weight).collect();
    let absolute = normalize(&relative)?;
    for (c, w) in criteria.iter().zip(absolute.iter()) {
        println!("{:<3} {:>4} -> {:.4}  {}", c.id, c.relative_weight, w, c.label);
    }

    let n = criteria.len();
    let most = scenario_weights(n, 0, ScenarioKind::MostWeighted)?;
    let least = scenario_weights(n, 0, ScenarioKind::LeastWeighted)?;
    println!("\nfocus on C1");
    println!("most weighted  {:.4?}", &most[..]);
    println!("least weighted {:.4?}", &least[..]);
    Ok(())
}
