use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::topk::{SearchTrace, TopKResult};

/// Reference extremes smaller than this in magnitude make relative errors
/// meaningless; such trials are skipped.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Fraction of the optimal selection's indices that the candidate also
/// selected.
pub fn hit_rate(candidate: &TopKResult, optimal: &TopKResult) -> Result<f64> {
    let k = check_same_k(candidate, optimal)?;
    Ok(overlap(&candidate.indices, &optimal.indices) as f64 / k as f64)
}

/// Size of the intersection of two strictly increasing index lists.
pub(crate) fn overlap(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Relative errors of the candidate's largest and smallest selected values
/// against the optimal selection's.
pub fn extreme_errors(candidate: &TopKResult, optimal: &TopKResult) -> Result<(f64, f64)> {
    check_same_k(candidate, optimal)?;
    let extremes = |r: &TopKResult| {
        (
            f64::from(r.max_value().unwrap_or(0.0)),
            f64::from(r.min_value().unwrap_or(0.0)),
        )
    };
    let (c_max, c_min) = extremes(candidate);
    let (o_max, o_min) = extremes(optimal);
    for reference in [o_max, o_min] {
        if reference.abs() < DENOMINATOR_FLOOR {
            return Err(Error::DegenerateDenominator(reference));
        }
    }
    Ok((
        (c_max - o_max).abs() / o_max.abs(),
        (c_min - o_min).abs() / o_min.abs(),
    ))
}

fn check_same_k(candidate: &TopKResult, optimal: &TopKResult) -> Result<usize> {
    let (c, o) = (candidate.k(), optimal.k());
    if c != o || c == 0 {
        return Err(Error::KMismatch {
            candidate: c,
            optimal: o,
        });
    }
    Ok(c)
}

/// Aggregate early-stop quality over many trials, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyStopStats {
    pub e1_pct: f64,
    pub e2_pct: f64,
    pub hit_pct: f64,
    pub trials: usize,
    /// Trials left out of the E1/E2 means because a reference extreme was
    /// within [`DENOMINATOR_FLOOR`] of zero. They still count towards Hit.
    pub skipped: usize,
}

/// Distribution of exit iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitHistogram {
    pub counts: BTreeMap<u32, u64>,
    pub mean_exit: f64,
    /// Percentage of counted runs that exited at or before each iteration.
    pub cumulative_pct: BTreeMap<u32, f64>,
    /// Runs counted in the histogram.
    pub trials: u64,
    /// Runs whose loop body never executed; not part of the histogram.
    pub excluded: u64,
}

impl ExitHistogram {
    /// Cumulative percentage at `iteration`, including iterations with no
    /// exits.
    pub fn cumulative_at(&self, iteration: u32) -> f64 {
        self.cumulative_pct
            .range(..=iteration)
            .next_back()
            .map_or(0.0, |(_, &p)| p)
    }

    pub fn first_iteration(&self) -> u32 {
        *self.counts.keys().next().expect("histogram is non-empty")
    }

    pub fn last_iteration(&self) -> u32 {
        *self
            .counts
            .keys()
            .next_back()
            .expect("histogram is non-empty")
    }
}

/// Histogram of 1-based exit iterations. Runs that exited at iteration 0 are
/// excluded.
pub fn exit_statistics<'a, I>(traces: I) -> Result<ExitHistogram>
where
    I: IntoIterator<Item = &'a SearchTrace>,
{
    let mut counts = BTreeMap::new();
    let mut excluded = 0;
    for t in traces {
        if t.exit_iteration == 0 {
            excluded += 1;
        } else {
            *counts.entry(t.exit_iteration).or_insert(0u64) += 1;
        }
    }
    let trials: u64 = counts.values().sum();
    if trials == 0 {
        return Err(Error::EmptyInput);
    }

    let mut running = 0;
    let mut weighted = 0u128;
    let cumulative_pct = counts
        .iter()
        .map(|(&it, &c)| {
            running += c;
            weighted += u128::from(it) * u128::from(c);
            (it, running as f64 / trials as f64 * 100.0)
        })
        .collect();

    Ok(ExitHistogram {
        counts,
        mean_exit: weighted as f64 / trials as f64,
        cumulative_pct,
        trials,
        excluded,
    })
}
