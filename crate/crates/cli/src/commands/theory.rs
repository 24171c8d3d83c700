use rowtopk::analysis::{theory_report, TheoryParams, TheoryReport};

use super::validation;
use crate::args::TheoryArgs;
use crate::error::CliResult;
use crate::table::Table;

/// The (M, k) grid of the published exit-iteration table.
pub const STANDARD_PAIRS: [(usize, usize); 14] = [
    (256, 64),
    (256, 128),
    (1024, 64),
    (1024, 128),
    (1024, 256),
    (1024, 512),
    (4096, 64),
    (4096, 128),
    (4096, 256),
    (4096, 512),
    (8192, 64),
    (8192, 128),
    (8192, 256),
    (8192, 512),
];

pub fn cmd_theory(args: &TheoryArgs) -> CliResult<Vec<(TheoryParams, TheoryReport)>> {
    let pairs: Vec<(usize, usize)> = if args.cols.is_empty() {
        STANDARD_PAIRS.to_vec()
    } else {
        args.cols
            .iter()
            .flat_map(|&m| args.k.iter().map(move |&k| (m, k)))
            .collect()
    };
    pairs
        .into_iter()
        .map(|(m, k)| {
            if k >= m {
                return Err(validation(format!("pair (M = {m}, k = {k}) needs k < M")));
            }
            let p = TheoryParams {
                m,
                k,
                mu: args.mu,
                sigma: args.sigma,
            };
            Ok((p, theory_report(&p)?))
        })
        .collect()
}

pub fn theory_table(rows: &[(TheoryParams, TheoryReport)]) -> Table {
    let mut t = Table::new(
        "theory",
        [
            "M",
            "k",
            "expected_thres",
            "borderline_delta",
            "initial_interval",
            "expected_iterations",
        ],
    );
    for (p, r) in rows {
        t.push(vec![
            p.m.to_string(),
            p.k.to_string(),
            r.expected_thres.to_string(),
            r.borderline_delta.to_string(),
            r.initial_interval.to_string(),
            r.expected_iterations.to_string(),
        ]);
    }
    t
}
