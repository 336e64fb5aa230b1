//! Sets of calendar days stored as sorted, disjoint, inclusive ranges.

use chrono::{Datelike, NaiveDate};

pub(crate) fn day_number(date: NaiveDate) -> i64 {
    i64::from(date.num_days_from_ce())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DaySet {
    ranges: Vec<(i64, i64)>,
}

impl DaySet {
    /// Union of inclusive `(first, last)` day ranges; empty ranges are ignored.
    pub fn from_ranges(ranges: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut ranges: Vec<(i64, i64)> = ranges.into_iter().filter(|(a, b)| a <= b).collect();
        ranges.sort_unstable();
        let mut merged: Vec<(i64, i64)> = Vec::with_capacity(ranges.len());
        for (a, b) in ranges {
            match merged.last_mut() {
                Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Self { ranges: merged }
    }

    pub fn ranges(&self) -> &[(i64, i64)] {
        &self.ranges
    }

    /// Number of days covered.
    pub fn len(&self) -> i64 {
        self.ranges.iter().map(|(a, b)| b - a + 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn intersection(&self, other: &DaySet) -> DaySet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a0, a1) = self.ranges[i];
            let (b0, b1) = other.ranges[j];
            let (lo, hi) = (a0.max(b0), a1.min(b1));
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        DaySet { ranges: out }
    }

    pub fn difference(&self, other: &DaySet) -> DaySet {
        let mut out = Vec::new();
        let mut j = 0;
        for &(a0, a1) in &self.ranges {
            let mut start = a0;
            while j < other.ranges.len() && other.ranges[j].1 < start {
                j += 1;
            }
            let mut k = j;
            while start <= a1 {
                match other.ranges.get(k) {
                    Some(&(b0, b1)) if b0 <= a1 => {
                        if b0 > start {
                            out.push((start, b0 - 1));
                        }
                        start = start.max(b1 + 1);
                        k += 1;
                    }
                    _ => {
                        out.push((start, a1));
                        break;
                    }
                }
            }
        }
        DaySet { ranges: out }
    }
}
