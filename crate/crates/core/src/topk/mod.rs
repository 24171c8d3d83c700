//! Single-row top-k selection.
//!
//! The selection engine bisects the value range `[min, max]` of a row until a
//! threshold is found that admits exactly `k` elements (exact mode) or until a
//! fixed iteration budget is spent (early-stop mode). A second pass then
//! collects the selected elements in ascending index order. Selected values
//! are never sorted.

mod oracle;
mod search;

pub use oracle::oracle_topk;
pub(crate) use search::topk_into;
pub use search::{
    count_ge, early_stop_search, early_stop_topk, exact_search, exact_search_observed, exact_topk,
    min_max, topk,
};

use crate::error::{Error, Result};

/// One NaN-free, non-empty vector of 32-bit values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row<'a> {
    values: &'a [f32],
}

impl<'a> Row<'a> {
    pub fn new(values: &'a [f32]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyRow);
        }
        if let Some(index) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::NanInput { row: None, index });
        }
        Ok(Self { values })
    }

    /// Caller guarantees the slice is non-empty and NaN-free.
    pub(crate) fn from_validated(values: &'a [f32]) -> Self {
        debug_assert!(!values.is_empty());
        Self { values }
    }

    pub fn values(&self) -> &'a [f32] {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// Bisect until the threshold admits exactly k elements or the interval
    /// falls below the precision bound.
    Exact,
    /// Bisect a fixed number of times and select from the last lower bound.
    EarlyStop,
}

/// Parameters of the threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub mode: SearchMode,
    /// Relative precision. The absolute loop bound is `epsilon_rel * max(row)`,
    /// computed once before the loop. Zero requests full float resolution.
    pub epsilon_rel: f64,
    /// Iteration budget for [`SearchMode::EarlyStop`]; ignored in exact mode.
    pub max_iter: u32,
    /// Absolute iteration bound for [`SearchMode::Exact`].
    pub hard_cap: u32,
}

impl SearchConfig {
    pub const DEFAULT_HARD_CAP: u32 = 64;

    pub fn exact(epsilon_rel: f64) -> Self {
        Self {
            mode: SearchMode::Exact,
            epsilon_rel,
            max_iter: 1,
            hard_cap: Self::DEFAULT_HARD_CAP,
        }
    }

    pub fn early_stop(max_iter: u32) -> Self {
        Self {
            mode: SearchMode::EarlyStop,
            epsilon_rel: 0.0,
            max_iter,
            hard_cap: Self::DEFAULT_HARD_CAP,
        }
    }

    pub fn with_hard_cap(mut self, hard_cap: u32) -> Self {
        self.hard_cap = hard_cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.epsilon_rel.is_finite() || self.epsilon_rel < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon_rel must be a finite non-negative number, got {}",
                self.epsilon_rel
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if self.hard_cap == 0 {
            return Err(Error::InvalidConfig("hard_cap must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self::exact(0.0)
    }
}

/// Bisection state at a loop boundary.
///
/// `cnt` is the number of elements `>= thres`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchState {
    pub min: f32,
    pub max: f32,
    pub thres: f32,
    pub cnt: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExitReason {
    CountEqualsK,
    IntervalBelowEpsilon,
    MaxIterReached,
    HardCapReached,
    /// The loop body never ran: the row is constant or its range is already
    /// within the precision bound.
    DegenerateRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchTrace {
    /// 1-based iteration at which the loop terminated; 0 when it never ran.
    pub exit_iteration: u32,
    pub exit_reason: ExitReason,
}

/// The k selected values of one row and their source indices.
///
/// Indices are strictly increasing; values are in the matching order and are
/// not sorted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TopKResult {
    pub values: Vec<f32>,
    pub indices: Vec<u32>,
}

impl TopKResult {
    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub(crate) fn with_capacity(k: usize) -> Self {
        Self {
            values: Vec::with_capacity(k),
            indices: Vec::with_capacity(k),
        }
    }

    /// Largest selected value, `None` when empty.
    pub fn max_value(&self) -> Option<f32> {
        self.values.iter().copied().reduce(f32::max)
    }

    /// Smallest selected value, `None` when empty.
    pub fn min_value(&self) -> Option<f32> {
        self.values.iter().copied().reduce(f32::min)
    }

    /// Values sorted ascending, for multiset comparison.
    pub fn sorted_values(&self) -> Vec<f32> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("NaN-free result"));
        v
    }
}

pub(crate) fn check_k(k: usize, m: usize) -> Result<()> {
    if k == 0 || k > m {
        Err(Error::KOutOfRange { k, m })
    } else {
        Ok(())
    }
}
