//! Mean percentile per program across years, and per-family spread.

use vetrank::fixture::{adversarial_panel, AdversarialConfig};
use vetrank::ingestion::default_criteria;
use vetrank::pipeline;

fn main() -> vetrank::Result<()> {
    let matrices = adversarial_panel(&AdversarialConfig::default());
    let families = matrices
        .values()
        .flat_map(|m| m.alternatives().to_vec())
        .map(|p| {
            let number: u32 = p.trim_start_matches("PRG").parse().unwrap_or(0);
            let family = format!("F{}", number % 4);
            (p, family)
        })
        .collect();
    let weights = pipeline::resolve_weights(&default_criteria(), None)?;
    let panel = pipeline::percentiles(&matrices, &weights, &families)?;

    println!("top five programs");
    for p in panel.programs.iter().take(5) {
        println!("  {:<8} {:.3} over {} years", p.program_id, p.mean_percentile, p.years.len());
    }
    println!("families");
    for f in &panel.families {
        println!("  {} {}: mean {:.3} [{:.3}, {:.3}] n={}", f.family_id, f.year, f.mean, f.min, f.max, f.members);
    }
    Ok(())
}
