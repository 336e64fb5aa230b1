//! Rank four programs on three criteria and print the intermediate values.

use vetrank::topsis::closeness_scores;
use vetrank::weights::normalize;
use vetrank::{CriterionSpec, Direction, PerformanceMatrix};

fn main() -> vetrank::Result<()> {
    let criteria = vec![
        CriterionSpec::new("wait", "days to first job", Direction::Cost, 3.0),
        CriterionSpec::new("fit", "share of days in field", Direction::Benefit, 2.0),
        CriterionSpec::new("temp", "share of temporary days", Direction::Cost, 1.0),
    ];
    let matrix = PerformanceMatrix::from_rows(
        ["welding", "nursing", "cooking", "electrics"].map(String::from).to_vec(),
        criteria,
        vec![
            vec![40.0, 0.62, 0.55],
            vec![12.0, 0.81, 0.70],
            vec![95.0, 0.40, 0.85],
            vec![20.0, 0.74, 0.35],
        ],
    )?
    .validate()?;

    let weights = normalize(&[3.0, 2.0, 1.0])?;
    let (scores, parts) = closeness_scores(&matrix, &weights)?;
    println!("ideal      {:.4?}", parts.ideal);
    println!("anti-ideal {:.4?}", parts.antiideal);

    let ranking = vetrank::topsis::rank(&matrix, &weights)?;
    println!("{:<10} {:>7} {:>5} {:>10}", "program", "score", "rank", "percentile");
    for i in 0..ranking.len() {
        println!(
            "{:<10} {:>7.4} {:>5} {:>10.3}",
            ranking.alternatives[i], scores[i], ranking.ranks[i], ranking.percentiles[i]
        );
    }
    Ok(())
}
