use rowtopk::analysis::{early_stop_experiment, exit_experiment, EarlyStopStats, ExitHistogram};
use rowtopk::datagen::DataGenSpec;
use rowtopk::SearchConfig;

use super::validation;
use crate::args::{StatsEarlyStopArgs, StatsExitArgs};
use crate::error::CliResult;
use crate::table::{fmt_f64, Table};

/// One histogram per requested k, all over the same seeded rows.
pub fn cmd_stats_exit(args: &StatsExitArgs) -> CliResult<Vec<(usize, ExitHistogram)>> {
    let gen = DataGenSpec::std_normal(1, args.cols, args.seed);
    let search = SearchConfig::exact(args.epsilon_rel).with_hard_cap(args.hard_cap);
    search.validate()?;
    if args.k.is_empty() {
        return Err(validation("no k values given"));
    }
    args.k
        .iter()
        .map(|&k| {
            if k == args.cols {
                return Err(validation(format!(
                    "k = M = {k} never enters the search loop; exit statistics need k < M"
                )));
            }
            let h = exit_experiment(&gen, k, &search, args.trials, args.workers)?;
            Ok((k, h))
        })
        .collect()
}

/// Cumulative exit percentage per iteration, one column per k, closed by a
/// row of mean exit iterations.
pub fn exit_table(hists: &[(usize, ExitHistogram)]) -> Table {
    let mut t = Table::new(
        "exit-histogram",
        std::iter::once("iteration".to_string()).chain(hists.iter().map(|(k, _)| format!("k={k}"))),
    );
    let lo = hists
        .iter()
        .map(|(_, h)| h.first_iteration())
        .min()
        .unwrap_or(1);
    let hi = hists
        .iter()
        .map(|(_, h)| h.last_iteration())
        .max()
        .unwrap_or(0);
    for it in lo..=hi {
        let mut row = vec![it.to_string()];
        row.extend(hists.iter().map(|(_, h)| fmt_f64(h.cumulative_at(it))));
        t.push(row);
    }
    let mut mean = vec!["mean".to_string()];
    mean.extend(hists.iter().map(|(_, h)| fmt_f64(h.mean_exit)));
    t.push(mean);
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarlyStopRow {
    pub k: usize,
    pub max_iter: u32,
    pub stats: EarlyStopStats,
}

pub fn cmd_stats_earlystop(args: &StatsEarlyStopArgs) -> CliResult<Vec<EarlyStopRow>> {
    if args.k.is_empty() || args.max_iter.is_empty() {
        return Err(validation("need at least one k and one max-iter"));
    }
    let gen = DataGenSpec::std_normal(1, args.cols, args.seed);
    let mut rows = Vec::new();
    for &k in &args.k {
        for &max_iter in &args.max_iter {
            let stats = early_stop_experiment(&gen, k, max_iter, args.trials, args.workers)?;
            rows.push(EarlyStopRow { k, max_iter, stats });
        }
    }
    Ok(rows)
}

pub fn earlystop_table(rows: &[EarlyStopRow]) -> Table {
    let mut t = Table::new(
        "early-stop",
        ["k", "max_iter", "e1_pct", "e2_pct", "hit_pct", "skipped"],
    );
    for r in rows {
        t.push(vec![
            r.k.to_string(),
            r.max_iter.to_string(),
            fmt_f64(r.stats.e1_pct),
            fmt_f64(r.stats.e2_pct),
            fmt_f64(r.stats.hit_pct),
            r.stats.skipped.to_string(),
        ]);
    }
    t
}
