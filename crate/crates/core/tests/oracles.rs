//! Seeded checks against independent reference computations.

use rowtopk::analysis::{early_stop_experiment, normal_cdf, normal_quantile};
use rowtopk::datagen::DataGenSpec;
use rowtopk::topk::{count_ge, min_max};
use rowtopk::{early_stop_topk, exact_topk, oracle_topk, Row, SearchConfig, TopKResult, Workers};

fn normal_row(m: usize, seed: u64) -> Vec<f32> {
    DataGenSpec::std_normal(1, m, seed).row(0)
}

fn sorted_desc(row: &[f32]) -> Vec<f32> {
    let mut v = row.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

#[test]
fn min_max_matches_sort() {
    let row = normal_row(256, 7);
    let sorted = sorted_desc(&row);
    assert_eq!(min_max(&Row::new(&row).unwrap()), (sorted[255], sorted[0]));
}

#[test]
fn count_ge_matches_linear_scan() {
    let row = normal_row(256, 8);
    let mut brute = 0;
    for v in &row {
        if *v >= 0.0 {
            brute += 1;
        }
    }
    assert_eq!(count_ge(&Row::new(&row).unwrap(), 0.0), brute);
}

#[test]
fn exact_matches_sorted_prefix() {
    let row = normal_row(256, 9);
    let (got, _) = exact_topk(&Row::new(&row).unwrap(), 32, &SearchConfig::exact(0.0)).unwrap();
    let mut want = sorted_desc(&row)[..32].to_vec();
    want.reverse();
    assert_eq!(got.sorted_values(), want);
}

#[test]
fn exact_and_oracle_agree_m1024() {
    let row = normal_row(1024, 10);
    let r = Row::new(&row).unwrap();
    let (got, _) = exact_topk(&r, 256, &SearchConfig::exact(0.0)).unwrap();
    let want = oracle_topk(&r, 256).unwrap();
    assert_eq!(got.sorted_values(), want.sorted_values());
}

/// Statement-by-statement early-stop selection, written without the
/// library's helpers.
fn early_stop_reference(v: &[f32], k: usize, max_iter: u32) -> TopKResult {
    let mut min = v.iter().cloned().fold(f32::INFINITY, f32::min);
    let mut max = v.iter().cloned().fold(f32::NEG_INFINITY, f32::max);
    for _ in 1..=max_iter {
        let thres = (min + max) / 2.0;
        let cnt = v.iter().filter(|&&x| x >= thres).count();
        if cnt < k {
            max = thres;
        } else {
            min = thres;
        }
    }
    let pairs: Vec<(f32, u32)> = v
        .iter()
        .enumerate()
        .filter(|(_, &x)| x >= min)
        .map(|(i, &x)| (x, i as u32))
        .take(k)
        .collect();
    TopKResult {
        values: pairs.iter().map(|p| p.0).collect(),
        indices: pairs.iter().map(|p| p.1).collect(),
    }
}

#[test]
fn early_stop_matches_reference() {
    for seed in 0..50 {
        let row = normal_row(256, seed);
        let (got, _) =
            early_stop_topk(&Row::new(&row).unwrap(), 64, &SearchConfig::early_stop(4)).unwrap();
        assert_eq!(got, early_stop_reference(&row, 64, 4), "seed {seed}");
    }
}

#[test]
fn early_stop_experiment_matches_trial_by_trial_recomputation() {
    let (m, k, max_iter, trials) = (8, 2, 2, 1000);
    let gen = DataGenSpec::std_normal(1, m, 2024);
    let stats = early_stop_experiment(&gen, k, max_iter, trials, Workers::fixed(3)).unwrap();

    let (mut hits, mut e1, mut e2, mut used) = (0usize, 0.0f64, 0.0f64, 0usize);
    for t in 0..trials {
        let row = gen.row(t as u64);
        let cand = early_stop_reference(&row, k, max_iter);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| row[b].partial_cmp(&row[a]).unwrap().then(a.cmp(&b)));
        let best = &order[..k];
        hits += cand
            .indices
            .iter()
            .filter(|&&i| best.contains(&(i as usize)))
            .count();

        let o_max = f64::from(row[best[0]]);
        let o_min = f64::from(row[best[k - 1]]);
        if o_max.abs() < 1e-12 || o_min.abs() < 1e-12 {
            continue;
        }
        let c_max = cand
            .values
            .iter()
            .map(|&v| f64::from(v))
            .fold(f64::MIN, f64::max);
        let c_min = cand
            .values
            .iter()
            .map(|&v| f64::from(v))
            .fold(f64::MAX, f64::min);
        e1 += (c_max - o_max).abs() / o_max.abs();
        e2 += (c_min - o_min).abs() / o_min.abs();
        used += 1;
    }
    let hit_pct = 100.0 * hits as f64 / (trials * k) as f64;
    assert!((stats.hit_pct - hit_pct).abs() < 1e-12);
    assert!((stats.e1_pct - 100.0 * e1 / used as f64).abs() < 1e-9);
    assert!((stats.e2_pct - 100.0 * e2 / used as f64).abs() < 1e-9);
    assert_eq!(stats.skipped, trials - used);
}

/// `p,quantile` pairs from a 40-digit reference computation.
fn quantile_grid() -> Vec<(f64, f64)> {
    include_str!("data/normal_quantile_oracle.csv")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let (p, q) = l.split_once(',').unwrap();
            (p.parse().unwrap(), q.parse().unwrap())
        })
        .collect()
}

#[test]
fn quantile_matches_reference_grid() {
    let grid = quantile_grid();
    assert_eq!(grid.len(), 1000);
    for (p, q) in grid {
        let got = normal_quantile(p).unwrap();
        assert!((got - q).abs() <= 1e-9, "p = {p}: {got} vs {q}");
        assert!((normal_cdf(got) - p).abs() <= 1e-9, "round trip at p = {p}");
    }
}

#[test]
fn expected_iterations_grow_with_m_and_peak_at_median() {
    use rowtopk::analysis::{theory_report, TheoryParams};
    let en = |m, k| {
        theory_report(&TheoryParams::standard(m, k))
            .unwrap()
            .expected_iterations
    };
    for frac in [8, 4, 2] {
        let ms = [256, 1024, 4096, 8192];
        let row: Vec<f64> = ms.iter().map(|&m| en(m, m / frac)).collect();
        assert!(row.windows(2).all(|w| w[0] < w[1]), "k = M/{frac}: {row:?}");
    }
    let m = 1024;
    let peak = en(m, m / 2);
    assert!((1..m).filter(|&k| k != m / 2).all(|k| en(m, k) < peak));
}
