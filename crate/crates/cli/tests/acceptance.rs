//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use rowtopk::analysis::{normal_cdf, normal_quantile};
use rowtopk::datagen::DataGenSpec;
use rowtopk::{batch_topk, BatchConfig, SearchConfig, Workers};
use rowtopk_cli::args::{
    BenchArgs, BenchMode, OutputArgs, StatsEarlyStopArgs, StatsExitArgs, TheoryArgs, VerifyArgs,
};
use rowtopk_cli::commands::{
    cmd_bench, cmd_stats_earlystop, cmd_stats_exit, cmd_theory, cmd_verify, BenchRecord,
};

const SEED: u64 = 42;

/// (M, k, mean exit, E(n)) from the published exit-iteration table.
const EXIT_TABLE: [(usize, usize, f64, f64); 14] = [
    (256, 64, 8.72, 9.08),
    (256, 128, 9.0, 9.41),
    (1024, 64, 9.53, 9.87),
    (1024, 128, 10.31, 10.62),
    (1024, 256, 10.87, 11.24),
    (1024, 512, 11.24, 11.57),
    (4096, 64, 10.07, 10.36),
    (4096, 128, 10.95, 11.2),
    (4096, 256, 11.73, 12.0),
    (4096, 512, 12.46, 12.75),
    (8192, 64, 10.3, 10.54),
    (8192, 128, 11.14, 11.41),
    (8192, 256, 12.02, 12.26),
    (8192, 512, 12.8, 13.06),
];

/// Pairs whose mean exit is measured.
const MEASURED: [(usize, usize); 4] = [(256, 64), (1024, 256), (4096, 256), (8192, 512)];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

fn output() -> OutputArgs {
    OutputArgs::default()
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let report = cmd_verify(&VerifyArgs {
        cols: vec![1, 2, 7, 256, 1024],
        k: vec![],
        trials: 10_000,
        seed: SEED,
        workers: Workers::Auto,
        output: output(),
    })
    .expect("verify runs");
    let secs = start.elapsed().as_secs_f64();
    let cells = report.cells.len();
    let bad = report.mismatches();
    Outcome::new(
        bad == 0 && secs < 120.0,
        format!("{cells} cells x 10^4 rows, {bad} mismatches, {secs:.1}s"),
    )
}

fn table1() -> Outcome {
    let ks = [16, 32, 64, 96, 128];
    let published = [7.60, 8.29, 8.95, 9.52, 9.60];
    let hists = cmd_stats_exit(&StatsExitArgs {
        cols: 256,
        k: ks.to_vec(),
        epsilon_rel: 1e-4,
        hard_cap: SearchConfig::DEFAULT_HARD_CAP,
        trials: 100_000,
        seed: SEED,
        workers: Workers::Auto,
        output: output(),
    })
    .expect("stats-exit runs");
    let mut pass = true;
    let mut parts = Vec::new();
    for ((k, h), want) in hists.iter().zip(published) {
        let cum13 = h.cumulative_at(13);
        let ok = (h.mean_exit - want).abs() <= 0.30 && cum13 >= 95.0;
        pass &= ok;
        parts.push(format!(
            "k={k} mean {:.3} (want {want:.2}±0.30) cum13 {cum13:.2}%{}",
            h.mean_exit,
            if ok { "" } else { " <-" }
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn measured_means() -> Vec<(usize, usize, f64)> {
    MEASURED
        .iter()
        .map(|&(m, k)| {
            let h = cmd_stats_exit(&StatsExitArgs {
                cols: m,
                k: vec![k],
                epsilon_rel: 0.0,
                hard_cap: SearchConfig::DEFAULT_HARD_CAP,
                trials: 10_000,
                seed: SEED,
                workers: Workers::Auto,
                output: output(),
            })
            .expect("stats-exit runs");
            (m, k, h[0].1.mean_exit)
        })
        .collect()
}

fn table_entry(m: usize, k: usize) -> (f64, f64) {
    let e = EXIT_TABLE.iter().find(|e| e.0 == m && e.1 == k).unwrap();
    (e.2, e.3)
}

fn table4(measured: &[(usize, usize, f64)]) -> Outcome {
    let mut pass = true;
    let parts: Vec<String> = measured
        .iter()
        .map(|&(m, k, mean)| {
            let want = table_entry(m, k).0;
            let ok = (mean - want).abs() <= 0.30;
            pass &= ok;
            format!(
                "({m},{k}) {mean:.3} vs {want:.2}{}",
                if ok { "" } else { " <-" }
            )
        })
        .collect();
    Outcome::new(pass, parts.join("; "))
}

fn model() -> Outcome {
    let rows = cmd_theory(&TheoryArgs {
        cols: vec![],
        k: vec![],
        mu: 0.0,
        sigma: 1.0,
        output: output(),
    })
    .expect("theory runs");
    let mut worst: f64 = 0.0;
    let mut worst_log: f64 = 0.0;
    let mut pass = rows.len() == EXIT_TABLE.len();
    for (p, r) in &rows {
        let want = table_entry(p.m, p.k).1;
        let err = (r.expected_iterations - want).abs();
        let log_err = (r.interval_ratio_iterations() - r.expected_iterations).abs();
        pass &= err <= 0.02 && log_err <= 1e-9;
        worst = worst.max(err);
        worst_log = worst_log.max(log_err);
    }
    Outcome::new(
        pass,
        format!(
            "{} pairs, max |E(n) - table| = {worst:.4} (tol 0.02), max |log2(D/delta) - E(n)| = {worst_log:.1e}",
            rows.len()
        ),
    )
}

fn model_ordering(measured: &[(usize, usize, f64)]) -> Outcome {
    let mut pass = true;
    let parts: Vec<String> = measured
        .iter()
        .map(|&(m, k, mean)| {
            let en = cmd_theory(&TheoryArgs {
                cols: vec![m],
                k: vec![k],
                mu: 0.0,
                sigma: 1.0,
                output: output(),
            })
            .expect("theory runs")[0]
                .1
                .expected_iterations;
            let gap = en - mean;
            let ok = gap > 0.0 && gap <= 0.6;
            pass &= ok;
            format!(
                "({m},{k}) E(n)-mean {gap:.3}{}",
                if ok { "" } else { " <-" }
            )
        })
        .collect();
    Outcome::new(pass, parts.join("; "))
}

fn table2() -> Outcome {
    // (k, max_iter, hit, Some((e1, e2)) when the error cells are gated)
    type Cell = (usize, u32, f64, Option<(f64, f64)>);
    let cells: [Cell; 4] = [
        (16, 2, 45.85, None),
        (64, 4, 80.51, Some((2.47, 6.55))),
        (128, 8, 96.86, None),
        (64, 8, 94.35, Some((0.71, 1.72))),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, max_iter, hit, errs) in cells {
        let s = cmd_stats_earlystop(&StatsEarlyStopArgs {
            cols: 256,
            k: vec![k],
            max_iter: vec![max_iter],
            trials: 100_000,
            seed: SEED,
            workers: Workers::Auto,
            output: output(),
        })
        .expect("stats-earlystop runs")[0]
            .stats;
        // Hit is gated for the three headline cells only.
        let hit_ok = (k == 64 && max_iter == 8) || (s.hit_pct - hit).abs() <= 2.0;
        let mut line = format!("(k={k},iter={max_iter}) hit {:.2} vs {hit}", s.hit_pct);
        if !hit_ok {
            line.push_str(" <-");
        }
        pass &= hit_ok;
        if let Some((e1, e2)) = errs {
            let ok1 = (s.e1_pct - e1).abs() <= 1.5;
            let ok2 = (s.e2_pct - e2).abs() <= 1.5;
            pass &= ok1 && ok2;
            line.push_str(&format!(
                ", E1 {:.2} vs {e1}{}, E2 {:.2} vs {e2}{}",
                s.e1_pct,
                if ok1 { "" } else { " <-" },
                s.e2_pct,
                if ok2 { "" } else { " <-" }
            ));
        }
        parts.push(line);
    }
    Outcome::new(pass, parts.join("; "))
}

fn determinism() -> Outcome {
    let m = DataGenSpec::std_normal(1 << 14, 256, SEED)
        .generate(Workers::Auto)
        .expect("matrix");
    let mut pass = true;
    for search in [SearchConfig::exact(0.0), SearchConfig::early_stop(4)] {
        let cfg = BatchConfig::new(32, search);
        let bytes: Vec<Vec<u8>> = [1, 2, 8]
            .iter()
            .map(|&w| {
                batch_topk(&m, &cfg.workers(Workers::fixed(w)))
                    .unwrap()
                    .to_bytes()
            })
            .collect();
        pass &= bytes.windows(2).all(|w| w[0] == w[1]);
    }
    Outcome::new(
        pass,
        "N=2^14 M=256 k=32, exact and early-stop(4), workers 1/2/8".into(),
    )
}

fn bench(rows: usize, modes: Vec<BenchMode>, workers: Vec<Workers>) -> Vec<BenchRecord> {
    cmd_bench(&BenchArgs {
        rows: vec![rows],
        cols: vec![256],
        k: vec![32],
        mode: modes,
        workers,
        repeats: 5,
        warmup: 1,
        epsilon_rel: 0.0,
        max_iter: 4,
        seed: SEED,
        output: output(),
    })
    .expect("bench runs")
}

fn performance() -> Outcome {
    let cores = thread::available_parallelism().map_or(1, |n| n.get());
    let vs_sort = bench(
        1 << 16,
        vec![BenchMode::Exact, BenchMode::Sort],
        vec![Workers::Auto],
    );
    let speedup = vs_sort[1].median_ms / vs_sort[0].median_ms;

    let scaling = bench(
        1 << 20,
        vec![BenchMode::Exact],
        vec![Workers::fixed(1), Workers::fixed(8)],
    );
    let scale = scaling[0].median_ms / scaling[1].median_ms;
    Outcome::new(
        speedup >= 2.0 && scale >= 3.0,
        format!(
            "{cores} cores; exact vs sort at N=2^16: {speedup:.2}x (need 2); \
             1->8 workers at N=2^20: {scale:.2}x (need 3)"
        ),
    )
}

fn special_functions() -> Outcome {
    let grid: Vec<(f64, f64)> = include_str!("../../core/tests/data/normal_quantile_oracle.csv")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let (p, q) = l.split_once(',').unwrap();
            (p.parse().unwrap(), q.parse().unwrap())
        })
        .collect();
    let (mut err, mut round): (f64, f64) = (0.0, 0.0);
    for &(p, q) in &grid {
        let x = normal_quantile(p).unwrap();
        err = err.max((x - q).abs());
        round = round.max((normal_cdf(x) - p).abs());
    }
    Outcome::new(
        grid.len() == 1000 && err <= 1e-9 && round <= 1e-9,
        format!(
            "{} points, max quantile error {err:.1e}, max round trip {round:.1e}",
            grid.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, o: Outcome| {
        println!(
            "{} criterion {id} ({name}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    };
    report(1, "oracle equivalence", oracle_equivalence());
    report(2, "exit histogram, eps' = 1e-4", table1());
    let measured = measured_means();
    report(3, "exit means, eps = 0", table4(&measured));
    report(4, "expected-iteration model", model());
    report(5, "model above measurement", model_ordering(&measured));
    report(6, "early-stop statistics", table2());
    report(7, "worker determinism", determinism());
    report(8, "relative performance", performance());
    report(9, "special functions", special_functions());

    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
