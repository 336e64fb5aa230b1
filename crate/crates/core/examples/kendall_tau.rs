//! Relative Kendall-tau distance between two rankings.

use vetrank::rankcompare::{discordant_pairs, kendall_tau_distance, RankPermutation};

fn main() -> vetrank::Result<()> {
    let a = RankPermutation::new(vec![0, 1, 2, 3, 4, 5])?;
    let b = RankPermutation::new(vec![1, 0, 2, 3, 5, 4])?;
    let reversed = RankPermutation::new((0..6).rev().collect())?;

    println!(
        "two adjacent swaps: {} discordant pairs, distance {:.4}",
        discordant_pairs(&a, &b)?,
        kendall_tau_distance(&a, &b)?
    );
    println!("identical: {}", kendall_tau_distance(&a, &a)?);
    println!("reversed:  {}", kendall_tau_distance(&a, &reversed)?);
    Ok(())
}
