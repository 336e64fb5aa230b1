//! Main effects (eta squared) of each criterion on the TOPSIS score, with
//! both estimators and the least/most/given scheme comparison.

use vetrank::fixture::{adversarial_panel, AdversarialConfig};
use vetrank::gsa::Estimator;
use vetrank::ingestion::default_criteria;
use vetrank::pipeline::{self, Pooling};

fn main() -> vetrank::Result<()> {
    let matrices = adversarial_panel(&AdversarialConfig::default());
    let criteria = default_criteria();
    let given = pipeline::resolve_weights(&criteria, None)?;
    let schemes = pipeline::schemes(&criteria, given, Some("C2"))?;

    for estimator in [Estimator::binned(), Estimator::StateSpaceSmoother] {
        println!("{} estimator, pooled over {} years", estimator.name(), matrices.len());
        for (scheme, fx) in pipeline::gsa(&matrices, &schemes, estimator, Pooling::Pooled)? {
            let cells: Vec<String> = fx
                .criteria
                .iter()
                .zip(&fx.eta_sq)
                .map(|(c, e)| format!("{c}={e:.2}"))
                .collect();
            println!("  {scheme:<8} {}", cells.join(" "));
        }
    }
    Ok(())
}
