//! Rank permutations and the relative Kendall-tau distance between them.

use crate::error::{Error, Result};

/// Alternative indices (0-based) listed best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankPermutation(Vec<usize>);

impl RankPermutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let len = order.len();
        let mut seen = vec![false; len];
        for &i in &order {
            if i >= len || std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation { len });
            }
        }
        Ok(Self(order))
    }

    pub(crate) fn new_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Self::new(order.clone()).is_ok());
        Self(order)
    }

    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `positions()[alt]` is the 0-based place of `alt` in the ranking.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (p, &alt) in self.0.iter().enumerate() {
            pos[alt] = p;
        }
        pos
    }
}

/// Number of alternative pairs ordered differently by `a` and `b`.
///
/// Reads `a` through `b`'s positions and counts inversions with a bottom-up
/// merge sort, O(m log m).
pub fn discordant_pairs(a: &RankPermutation, b: &RankPermutation) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let pos_b = b.positions();
    let mut seq: Vec<usize> = a.as_slice().iter().map(|&alt| pos_b[alt]).collect();
    Ok(count_inversions(&mut seq))
}

/// Fraction of all `m(m-1)/2` pairs that are discordant, in `[0, 1]`.
pub fn kendall_tau_distance(a: &RankPermutation, b: &RankPermutation) -> Result<f64> {
    let m = a.len();
    let discordant = discordant_pairs(a, b)?;
    if m < 2 {
        return Ok(0.0);
    }
    let pairs = (m as u64) * (m as u64 - 1) / 2;
    Ok(discordant as f64 / pairs as f64)
}

fn count_inversions(seq: &mut [usize]) -> u64 {
    let n = seq.len();
    let mut buf = vec![0usize; n];
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo < n {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if seq[i] <= seq[j] {
                    buf[k] = seq[i];
                    i += 1;
                } else {
                    // every remaining left element exceeds seq[j]
                    inversions += (mid - i) as u64;
                    buf[k] = seq[j];
                    j += 1;
                }
                k += 1;
            }
            buf[k..k + mid - i].copy_from_slice(&seq[i..mid]);
            k += mid - i;
            buf[k..k + hi - j].copy_from_slice(&seq[j..hi]);
            lo = hi;
        }
        seq.copy_from_slice(&buf);
        width *= 2;
    }
    inversions
}
