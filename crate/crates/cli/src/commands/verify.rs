//! Oracle gate: exact selection against the full-sort reference over a grid
//! of row lengths and k, on a mix of continuous and duplicate-heavy rows.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use rowtopk::datagen::substream;
use rowtopk::parallel::map_indexed;
use rowtopk::{exact_topk, oracle_topk, Row, SearchConfig, TopKResult, Workers};

use super::validation;
use crate::args::VerifyArgs;
use crate::error::CliResult;
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Normal,
    /// N(0,1) rounded to multiples of 1/4.
    Quantized,
    /// Drawn from {-1, -0, 0, 1, 2}.
    FewDistinct,
    /// Integers in [-1000, -997].
    NegativeDuplicates,
    /// A constant with rare spikes one unit higher.
    Plateau,
}

impl RowKind {
    pub const ALL: [RowKind; 5] = [
        RowKind::Normal,
        RowKind::Quantized,
        RowKind::FewDistinct,
        RowKind::NegativeDuplicates,
        RowKind::Plateau,
    ];

    pub fn of(row: u64) -> Self {
        Self::ALL[(row % Self::ALL.len() as u64) as usize]
    }
}

/// Row `row` of the verification stream; reproducible from `(seed, row)`.
pub fn verify_row(seed: u64, m: usize, row: u64) -> Vec<f32> {
    let mut rng = substream(seed, row);
    match RowKind::of(row) {
        RowKind::Normal => (0..m).map(|_| rng.sample(StandardNormal)).collect(),
        RowKind::Quantized => (0..m)
            .map(|_| (rng.sample::<f32, _>(StandardNormal) * 4.0).round() / 4.0)
            .collect(),
        RowKind::FewDistinct => {
            const LEVELS: [f32; 5] = [-1.0, -0.0, 0.0, 1.0, 2.0];
            (0..m)
                .map(|_| LEVELS[rng.random_range(0..LEVELS.len())])
                .collect()
        }
        RowKind::NegativeDuplicates => (0..m)
            .map(|_| -1000.0 + rng.random_range(0..4u8) as f32)
            .collect(),
        RowKind::Plateau => {
            let c: f32 = rng.sample(StandardNormal);
            (0..m)
                .map(|_| if rng.random_bool(0.05) { c + 1.0 } else { c })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub seed: u64,
    pub m: usize,
    pub k: usize,
    pub row: u64,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mismatch: seed={} M={} k={} row={} ({:?}): {}",
            self.seed,
            self.m,
            self.k,
            self.row,
            RowKind::of(self.row),
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub m: usize,
    pub k: usize,
    pub trials: usize,
    pub mismatches: usize,
    pub first: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub cells: Vec<CellReport>,
}

impl VerifyReport {
    pub fn mismatches(&self) -> usize {
        self.cells.iter().map(|c| c.mismatches).sum()
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new("verify", ["M", "k", "trials", "mismatches", "first_row"]);
        for c in &self.cells {
            t.push(vec![
                c.m.to_string(),
                c.k.to_string(),
                c.trials.to_string(),
                c.mismatches.to_string(),
                c.first.as_ref().map_or("-".into(), |x| x.row.to_string()),
            ]);
        }
        t
    }
}

/// `(M, k)` cells: the explicit k list, or `{1, M/4, M/2, M-1, M}`, keeping
/// only `1 <= k <= M`.
pub fn grid(cols: &[usize], ks: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &m in cols {
        let mut cand = if ks.is_empty() {
            vec![1, m / 4, m / 2, m.saturating_sub(1), m]
        } else {
            ks.to_vec()
        };
        cand.retain(|&k| (1..=m).contains(&k));
        cand.sort_unstable();
        cand.dedup();
        out.extend(cand.into_iter().map(|k| (m, k)));
    }
    out
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<VerifyReport> {
    let exact = SearchConfig::exact(0.0);
    verify_with(
        &grid(&args.cols, &args.k),
        args.trials,
        args.seed,
        args.workers,
        |row, k| exact_topk(row, k, &exact).map(|(r, _)| r),
    )
}

/// Runs `select` against the oracle on every cell. Generic over the selector
/// so that deliberately broken variants can be checked to fail.
pub fn verify_with<F>(
    cells: &[(usize, usize)],
    trials: usize,
    seed: u64,
    workers: Workers,
    select: F,
) -> CliResult<VerifyReport>
where
    F: Fn(&Row<'_>, usize) -> rowtopk::Result<TopKResult> + Sync,
{
    if trials == 0 {
        return Err(validation("verify needs at least one trial"));
    }
    if cells.is_empty() {
        return Err(validation("no valid (M, k) pairs to verify"));
    }
    let mut reports = Vec::with_capacity(cells.len());
    for &(m, k) in cells {
        let outcomes = map_indexed(trials, workers.resolve(), |t| {
            let values = verify_row(seed, m, t as u64);
            let row = Row::new(&values)?;
            let want = oracle_topk(&row, k)?;
            let got = select(&row, k)?;
            Ok(compare(&values, &got, &want))
        })
        .into_iter()
        .collect::<rowtopk::Result<Vec<_>>>()?;

        let mut mismatches = 0;
        let mut first = None;
        for (t, detail) in outcomes.into_iter().enumerate() {
            if let Some(detail) = detail {
                mismatches += 1;
                first.get_or_insert(Counterexample {
                    seed,
                    m,
                    k,
                    row: t as u64,
                    detail,
                });
            }
        }
        reports.push(CellReport {
            m,
            k,
            trials,
            mismatches,
            first,
        });
    }
    Ok(VerifyReport {
        seed,
        cells: reports,
    })
}

/// `None` when `got` is a valid selection with the oracle's value multiset.
fn compare(row: &[f32], got: &TopKResult, want: &TopKResult) -> Option<String> {
    let k = want.indices.len();
    if got.indices.len() != k || got.values.len() != k {
        return Some(format!(
            "returned {} elements, expected {k}",
            got.indices.len()
        ));
    }
    if got.indices.windows(2).any(|w| w[0] >= w[1]) {
        return Some("indices not strictly increasing".into());
    }
    for (&i, &v) in got.indices.iter().zip(&got.values) {
        match row.get(i as usize) {
            Some(x) if x.to_bits() == v.to_bits() => {}
            _ => return Some(format!("value {v} does not sit at index {i}")),
        }
    }
    let (g, w) = (got.sorted_values(), want.sorted_values());
    if g != w {
        let at = g.iter().zip(&w).position(|(a, b)| a != b).unwrap_or(0);
        return Some(format!(
            "value multiset differs: ascending position {at} holds {} instead of {}",
            g[at], w[at]
        ));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_keeps_valid_pairs() {
        assert_eq!(
            grid(&[1, 2, 7], &[]),
            vec![(1, 1), (2, 1), (2, 2), (7, 1), (7, 3), (7, 6), (7, 7)]
        );
        assert_eq!(grid(&[4], &[0, 2, 9]), vec![(4, 2)]);
    }

    #[test]
    fn rows_are_replayable_and_cover_all_kinds() {
        for r in 0..5 {
            assert_eq!(verify_row(3, 64, r), verify_row(3, 64, r));
        }
        let kinds: Vec<RowKind> = (0..5).map(RowKind::of).collect();
        assert_eq!(kinds, RowKind::ALL);
        let few = verify_row(3, 256, 2);
        assert!(few.iter().all(|v| [-1.0, 0.0, 1.0, 2.0].contains(v)));
    }

    #[test]
    fn compare_flags_each_defect() {
        let row = [1.0f32, 3.0, 2.0];
        let want = TopKResult {
            values: vec![3.0, 2.0],
            indices: vec![1, 2],
        };
        assert_eq!(compare(&row, &want, &want), None);
        let short = TopKResult {
            values: vec![3.0],
            indices: vec![1],
        };
        assert!(compare(&row, &short, &want).is_some());
        let unordered = TopKResult {
            values: vec![2.0, 3.0],
            indices: vec![2, 1],
        };
        assert!(compare(&row, &unordered, &want).is_some());
        let wrong = TopKResult {
            values: vec![1.0, 3.0],
            indices: vec![0, 1],
        };
        assert!(compare(&row, &wrong, &want).unwrap().contains("multiset"));
    }
}
