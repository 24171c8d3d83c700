//! Monte-Carlo drivers. Trial `t` always uses row `t` of the generator, and
//! per-trial outcomes are reduced in trial order, so results depend only on
//! the seed.

use super::metrics::{exit_statistics, extreme_errors, overlap, EarlyStopStats, ExitHistogram};
use crate::datagen::DataGenSpec;
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, Workers};
use crate::topk::{
    check_k, early_stop_topk, exact_search, oracle_topk, Row, SearchConfig, SearchMode,
};

/// Exit-iteration histogram of the exact search over `trials` generated rows
/// of length `gen.n_cols`.
pub fn exit_experiment(
    gen: &DataGenSpec,
    k: usize,
    search: &SearchConfig,
    trials: usize,
    workers: Workers,
) -> Result<ExitHistogram> {
    if search.mode != SearchMode::Exact {
        return Err(Error::InvalidConfig(
            "exit statistics need exact mode".into(),
        ));
    }
    check_trials(gen, k, trials)?;
    let traces = map_indexed(trials, workers.resolve(), |t| {
        let row = gen.row(t as u64);
        exact_search(&Row::from_validated(&row), k, search).map(|(_, trace)| trace)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    exit_statistics(&traces)
}

/// Outcome of one early-stop trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyStopTrial {
    pub hits: usize,
    /// `None` when the trial was skipped for a degenerate denominator.
    pub errors: Option<(f64, f64)>,
}

impl EarlyStopTrial {
    pub fn run(row: &[f32], k: usize, max_iter: u32) -> Result<Self> {
        let row = Row::new(row)?;
        let (candidate, _) = early_stop_topk(&row, k, &SearchConfig::early_stop(max_iter))?;
        let optimal = oracle_topk(&row, k)?;
        let errors = match extreme_errors(&candidate, &optimal) {
            Ok(e) => Some(e),
            Err(Error::DegenerateDenominator(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            hits: overlap(&candidate.indices, &optimal.indices),
            errors,
        })
    }
}

/// Early-stop selection against the sort oracle over `trials` generated rows.
///
/// Hit is the mean per-trial overlap fraction; E1 and E2 are means of the
/// per-trial relative errors over non-skipped trials.
pub fn early_stop_experiment(
    gen: &DataGenSpec,
    k: usize,
    max_iter: u32,
    trials: usize,
    workers: Workers,
) -> Result<EarlyStopStats> {
    check_trials(gen, k, trials)?;
    SearchConfig::early_stop(max_iter).validate()?;
    let outcomes = map_indexed(trials, workers.resolve(), |t| {
        EarlyStopTrial::run(&gen.row(t as u64), k, max_iter)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(&outcomes, k))
}

pub(crate) fn aggregate(outcomes: &[EarlyStopTrial], k: usize) -> EarlyStopStats {
    let hits: usize = outcomes.iter().map(|o| o.hits).sum();
    let (mut e1, mut e2, mut used) = (0.0, 0.0, 0usize);
    for (a, b) in outcomes.iter().filter_map(|o| o.errors) {
        e1 += a;
        e2 += b;
        used += 1;
    }
    let mean = |s: f64| {
        if used == 0 {
            f64::NAN
        } else {
            100.0 * s / used as f64
        }
    };
    EarlyStopStats {
        e1_pct: mean(e1),
        e2_pct: mean(e2),
        hit_pct: 100.0 * hits as f64 / (outcomes.len() * k) as f64,
        trials: outcomes.len(),
        skipped: outcomes.len() - used,
    }
}

fn check_trials(gen: &DataGenSpec, k: usize, trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::EmptyInput);
    }
    if gen.n_cols == 0 {
        return Err(Error::EmptyRow);
    }
    check_k(k, gen.n_cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_selection_is_perfect() {
        let gen = DataGenSpec::std_normal(1, 32, 3);
        let s = early_stop_experiment(&gen, 32, 2, 200, Workers::Auto).unwrap();
        assert_eq!(s.hit_pct, 100.0);
        assert_eq!((s.e1_pct, s.e2_pct), (0.0, 0.0));
        assert_eq!(s.trials, 200);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let gen = DataGenSpec::std_normal(1, 64, 11);
        let a = early_stop_experiment(&gen, 16, 3, 500, Workers::fixed(1)).unwrap();
        let b = early_stop_experiment(&gen, 16, 3, 500, Workers::fixed(7)).unwrap();
        assert_eq!(a, b);
        let cfg = SearchConfig::exact(1e-4);
        let a = exit_experiment(&gen, 16, &cfg, 500, Workers::fixed(1)).unwrap();
        let b = exit_experiment(&gen, 16, &cfg, 500, Workers::fixed(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_arguments() {
        let gen = DataGenSpec::std_normal(1, 8, 1);
        assert!(early_stop_experiment(&gen, 9, 2, 10, Workers::Auto).is_err());
        assert!(early_stop_experiment(&gen, 2, 2, 0, Workers::Auto).is_err());
        assert!(exit_experiment(&gen, 2, &SearchConfig::early_stop(2), 10, Workers::Auto).is_err());
    }
}
