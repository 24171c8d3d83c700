use std::hint::black_box;
use std::time::Instant;

use rowtopk::batch::batch_sort_topk;
use rowtopk::datagen::DataGenSpec;
use rowtopk::{batch_topk, BatchConfig, RowMajorMatrix, SearchConfig, Workers};

use super::validation;
use crate::args::{BenchArgs, BenchMode};
use crate::error::CliResult;
use crate::table::{fmt_f64, Table};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub mode: BenchMode,
    pub workers: usize,
    pub median_ms: f64,
    pub min_ms: f64,
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<Vec<BenchRecord>> {
    if args.repeats < 5 {
        return Err(validation(format!(
            "need at least 5 repeats, got {}",
            args.repeats
        )));
    }
    if args.warmup < 1 {
        return Err(validation("need at least one warmup run"));
    }
    let mut out = Vec::new();
    for &n in &args.rows {
        for &m in &args.cols {
            if let Some(&k) = args.k.iter().find(|&&k| k == 0 || k > m) {
                return Err(rowtopk::Error::KOutOfRange { k, m }.into());
            }
            let matrix = DataGenSpec::std_normal(n, m, args.seed).generate(Workers::Auto)?;
            for &k in &args.k {
                for &mode in &args.mode {
                    for &workers in &args.workers {
                        let (median_ms, min_ms) = time_mode(&matrix, k, mode, workers, args)?;
                        out.push(BenchRecord {
                            n,
                            m,
                            k,
                            mode,
                            workers: workers.resolve(),
                            median_ms,
                            min_ms,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn time_mode(
    matrix: &RowMajorMatrix,
    k: usize,
    mode: BenchMode,
    workers: Workers,
    args: &BenchArgs,
) -> CliResult<(f64, f64)> {
    let run = || match mode {
        BenchMode::Sort => batch_sort_topk(matrix, k, workers),
        BenchMode::Exact | BenchMode::EarlyStop => {
            let search = if mode == BenchMode::Exact {
                SearchConfig::exact(args.epsilon_rel)
            } else {
                SearchConfig::early_stop(args.max_iter)
            };
            batch_topk(matrix, &BatchConfig::new(k, search).workers(workers))
        }
    };
    for _ in 0..args.warmup {
        black_box(run()?);
    }
    let mut ms = Vec::with_capacity(args.repeats);
    for _ in 0..args.repeats {
        let start = Instant::now();
        let res = run()?;
        ms.push(start.elapsed().as_secs_f64() * 1e3);
        black_box(res);
    }
    Ok(median_min(&mut ms))
}

fn median_min(ms: &mut [f64]) -> (f64, f64) {
    ms.sort_by(f64::total_cmp);
    let n = ms.len();
    let median = if n % 2 == 1 {
        ms[n / 2]
    } else {
        (ms[n / 2 - 1] + ms[n / 2]) / 2.0
    };
    (median, ms[0])
}

pub fn bench_table(records: &[BenchRecord]) -> Table {
    let mut t = Table::new(
        "bench",
        ["N", "M", "k", "mode", "workers", "median_ms", "min_ms"],
    );
    for r in records {
        t.push(vec![
            r.n.to_string(),
            r.m.to_string(),
            r.k.to_string(),
            r.mode.name().into(),
            r.workers.to_string(),
            fmt_f64(r.median_ms),
            fmt_f64(r.min_ms),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median_min(&mut [3.0, 1.0, 2.0]), (2.0, 1.0));
        assert_eq!(median_min(&mut [4.0, 1.0, 3.0, 2.0]), (2.5, 1.0));
    }
}
