use super::{
    check_k, ExitReason, Row, SearchConfig, SearchMode, SearchState, SearchTrace, TopKResult,
};
use crate::error::{Error, Result};

/// Smallest and largest element of the row.
pub fn min_max(row: &Row<'_>) -> (f32, f32) {
    min_max_slice(row.values())
}

/// Number of elements `>= thres`.
pub fn count_ge(row: &Row<'_>, thres: f32) -> usize {
    count_ge_slice(row.values(), thres)
}

#[inline]
pub(crate) fn min_max_slice(values: &[f32]) -> (f32, f32) {
    let mut lo = values[0];
    let mut hi = values[0];
    for &v in &values[1..] {
        if v < lo {
            lo = v;
        }
        if v > hi {
            hi = v;
        }
    }
    (lo, hi)
}

#[inline]
pub(crate) fn count_ge_slice(values: &[f32], thres: f32) -> usize {
    values.iter().map(|&v| usize::from(v >= thres)).sum()
}

/// Midpoint taken in double precision and rounded back to the row's width.
#[inline]
fn midpoint(lo: f32, hi: f32) -> f32 {
    ((f64::from(lo) + f64::from(hi)) * 0.5) as f32
}

fn trace(exit_iteration: u32, exit_reason: ExitReason) -> SearchTrace {
    SearchTrace {
        exit_iteration,
        exit_reason,
    }
}

fn check_mode(cfg: &SearchConfig, mode: SearchMode) -> Result<()> {
    cfg.validate()?;
    if cfg.mode != mode {
        return Err(Error::InvalidConfig(format!(
            "expected {mode:?} mode, got {:?}",
            cfg.mode
        )));
    }
    Ok(())
}

pub(crate) fn run_exact<F>(
    values: &[f32],
    k: usize,
    epsilon_rel: f64,
    hard_cap: u32,
    mut observe: F,
) -> (SearchState, SearchTrace)
where
    F: FnMut(u32, &SearchState),
{
    let m = values.len();
    let (mut min, mut max) = min_max_slice(values);
    let all = SearchState {
        min,
        max,
        thres: min,
        cnt: m,
    };
    if k == m {
        return (all, trace(0, ExitReason::CountEqualsK));
    }

    let eps = epsilon_rel * f64::from(max);
    let open = |lo: f32, hi: f32| f64::from(hi) - f64::from(lo) > eps;
    if min == max || !open(min, max) {
        return (all, trace(0, ExitReason::DegenerateRow));
    }

    let mut iteration = 0;
    loop {
        iteration += 1;
        let thres = midpoint(min, max);
        let cnt = count_ge_slice(values, thres);
        let reason = if cnt < k {
            max = thres;
            None
        } else if cnt > k {
            min = thres;
            None
        } else {
            Some(ExitReason::CountEqualsK)
        };
        let state = SearchState {
            min,
            max,
            thres,
            cnt,
        };
        observe(iteration, &state);

        let reason = reason.or_else(|| {
            if !open(min, max) {
                Some(ExitReason::IntervalBelowEpsilon)
            } else if iteration >= hard_cap {
                Some(ExitReason::HardCapReached)
            } else {
                None
            }
        });
        if let Some(reason) = reason {
            return (state, trace(iteration, reason));
        }
    }
}

pub(crate) fn run_early_stop(
    values: &[f32],
    k: usize,
    max_iter: u32,
) -> (SearchState, SearchTrace) {
    let m = values.len();
    let (mut min, mut max) = min_max_slice(values);
    if min == max {
        let state = SearchState {
            min,
            max,
            thres: min,
            cnt: m,
        };
        return (state, trace(0, ExitReason::DegenerateRow));
    }

    let mut thres = min;
    let mut cnt = m;
    for _ in 0..max_iter {
        thres = midpoint(min, max);
        cnt = count_ge_slice(values, thres);
        if cnt < k {
            max = thres;
        } else {
            min = thres;
        }
    }
    let state = SearchState {
        min,
        max,
        thres,
        cnt,
    };
    (state, trace(max_iter, ExitReason::MaxIterReached))
}

/// Threshold used by the selection pass of exact mode.
///
/// A loop that stopped on the precision bound or the hard cap with `cnt > k`
/// may hold borderline duplicates at `thres` and larger values after them in
/// index order. Selection then moves to the upper bound, where `cnt(max) < k`
/// unless `max` is the row maximum, so the borderline lies in `[min, max)`.
fn selection_state(
    values: &[f32],
    k: usize,
    state: &SearchState,
    trace: &SearchTrace,
) -> SearchState {
    if trace.exit_iteration > 0 && state.cnt > k {
        SearchState {
            thres: state.max,
            cnt: count_ge_slice(values, state.max),
            ..*state
        }
    } else {
        *state
    }
}

/// Emits the exact-mode selection.
///
/// With `cnt < k` every element `>= thres` is taken and the shortfall is
/// filled from `[min, thres)`; otherwise the first k elements `>= thres` are
/// taken. Both passes run in index order and are merged into one scan.
fn select_exact(values: &[f32], k: usize, state: &SearchState, mut emit: impl FnMut(usize, f32)) {
    let mut taken = 0;
    if state.cnt < k {
        let mut fill = k - state.cnt;
        for (i, &v) in values.iter().enumerate() {
            if v >= state.thres {
                emit(i, v);
                taken += 1;
            } else if fill > 0 && v >= state.min {
                emit(i, v);
                taken += 1;
                fill -= 1;
            }
            if taken == k {
                break;
            }
        }
    } else {
        select_at_least(values, k, state.thres, emit);
    }
}

/// First k elements `>= bound` in index order.
fn select_at_least(values: &[f32], k: usize, bound: f32, mut emit: impl FnMut(usize, f32)) {
    let mut taken = 0;
    for (i, &v) in values.iter().enumerate() {
        if v >= bound {
            emit(i, v);
            taken += 1;
            if taken == k {
                break;
            }
        }
    }
}

/// Runs the configured search on a validated row and writes the k selected
/// values and indices into the output slices.
pub(crate) fn topk_into(
    values: &[f32],
    k: usize,
    cfg: &SearchConfig,
    out_values: &mut [f32],
    out_indices: &mut [u32],
) -> SearchTrace {
    let mut slot = 0;
    let mut emit = |i: usize, v: f32| {
        out_values[slot] = v;
        out_indices[slot] = i as u32;
        slot += 1;
    };
    let trace = match cfg.mode {
        SearchMode::Exact => {
            let (state, trace) = run_exact(values, k, cfg.epsilon_rel, cfg.hard_cap, |_, _| {});
            let state = selection_state(values, k, &state, &trace);
            select_exact(values, k, &state, &mut emit);
            trace
        }
        SearchMode::EarlyStop => {
            let (state, trace) = run_early_stop(values, k, cfg.max_iter);
            select_at_least(values, k, state.min, &mut emit);
            trace
        }
    };
    debug_assert_eq!(slot, k);
    trace
}

fn collect(k: usize, select: impl FnOnce(&mut dyn FnMut(usize, f32))) -> TopKResult {
    let mut out = TopKResult::with_capacity(k);
    select(&mut |i, v| {
        out.values.push(v);
        out.indices.push(i as u32);
    });
    out
}

/// Exact-mode threshold search without the selection pass.
pub fn exact_search(
    row: &Row<'_>,
    k: usize,
    cfg: &SearchConfig,
) -> Result<(SearchState, SearchTrace)> {
    exact_search_observed(row, k, cfg, |_, _| {})
}

/// Like [`exact_search`], calling `observe(iteration, state)` after every
/// loop body with the updated interval.
pub fn exact_search_observed<F>(
    row: &Row<'_>,
    k: usize,
    cfg: &SearchConfig,
    observe: F,
) -> Result<(SearchState, SearchTrace)>
where
    F: FnMut(u32, &SearchState),
{
    check_k(k, row.len())?;
    check_mode(cfg, SearchMode::Exact)?;
    Ok(run_exact(
        row.values(),
        k,
        cfg.epsilon_rel,
        cfg.hard_cap,
        observe,
    ))
}

/// Early-stop threshold search without the selection pass.
pub fn early_stop_search(
    row: &Row<'_>,
    k: usize,
    cfg: &SearchConfig,
) -> Result<(SearchState, SearchTrace)> {
    check_k(k, row.len())?;
    check_mode(cfg, SearchMode::EarlyStop)?;
    Ok(run_early_stop(row.values(), k, cfg.max_iter))
}

/// Exact binary-search top-k selection.
///
/// With `epsilon_rel == 0` the selected values are the k largest of the row
/// as a multiset. When the search stops on the precision bound or the hard
/// cap, borderline elements are taken from `[min, thres)` in index order.
pub fn exact_topk(
    row: &Row<'_>,
    k: usize,
    cfg: &SearchConfig,
) -> Result<(TopKResult, SearchTrace)> {
    let (state, trace) = exact_search(row, k, cfg)?;
    let values = row.values();
    let state = selection_state(values, k, &state, &trace);
    let result = collect(k, |emit| select_exact(values, k, &state, emit));
    Ok((result, trace))
}

/// Binary-search top-k selection with a fixed iteration budget.
///
/// Runs exactly `cfg.max_iter` bisection steps and returns the first k
/// elements (in index order) that are `>=` the final lower bound. The lower
/// bound always admits at least k elements, so the result is never short.
pub fn early_stop_topk(
    row: &Row<'_>,
    k: usize,
    cfg: &SearchConfig,
) -> Result<(TopKResult, SearchTrace)> {
    let (state, trace) = early_stop_search(row, k, cfg)?;
    let values = row.values();
    let result = collect(k, |emit| select_at_least(values, k, state.min, emit));
    Ok((result, trace))
}

/// Dispatches on `cfg.mode`.
pub fn topk(row: &Row<'_>, k: usize, cfg: &SearchConfig) -> Result<(TopKResult, SearchTrace)> {
    match cfg.mode {
        SearchMode::Exact => exact_topk(row, k, cfg),
        SearchMode::EarlyStop => early_stop_topk(row, k, cfg),
    }
}
