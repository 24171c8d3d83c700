mod bench;
mod files;
mod stats;
mod theory;
mod verify;

use std::fs;

pub use bench::{bench_table, cmd_bench, BenchRecord};
pub use files::{cmd_gen, cmd_run};
pub use stats::{cmd_stats_earlystop, cmd_stats_exit, earlystop_table, exit_table, EarlyStopRow};
pub use theory::{cmd_theory, theory_table, STANDARD_PAIRS};
pub use verify::{
    cmd_verify, verify_row, verify_with, CellReport, Counterexample, RowKind, VerifyReport,
};

use crate::args::{Cli, Command, OutputArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::table::Table;

/// Runs one parsed invocation. `argv` is recorded in manifests.
pub fn execute(cli: &Cli, argv: &[String]) -> CliResult<()> {
    let name = cli.command.name();
    let manifest =
        |seed: Option<u64>, config: serde_json::Value| RunManifest::new(name, argv, seed, config);
    match &cli.command {
        Command::Gen(a) => {
            let m = cmd_gen(a)?;
            manifest(Some(a.seed), echo(a)).write_next_to(&a.out)?;
            eprintln!(
                "wrote {}x{} matrix to {}",
                m.n_rows(),
                m.n_cols(),
                a.out.display()
            );
        }
        Command::Run(a) => {
            let r = cmd_run(a)?;
            manifest(None, echo(a)).write_next_to(&a.out)?;
            eprintln!(
                "wrote {}x{} selection to {}",
                r.n_rows,
                r.k,
                a.out.display()
            );
        }
        Command::StatsExit(a) => {
            let t = exit_table(&cmd_stats_exit(a)?);
            emit(&t, &a.output, manifest(Some(a.seed), echo(a)))?;
        }
        Command::StatsEarlystop(a) => {
            let t = earlystop_table(&cmd_stats_earlystop(a)?);
            emit(&t, &a.output, manifest(Some(a.seed), echo(a)))?;
        }
        Command::Theory(a) => {
            let t = theory_table(&cmd_theory(a)?);
            emit(&t, &a.output, manifest(None, echo(a)))?;
        }
        Command::Verify(a) => {
            let report = cmd_verify(a)?;
            for c in report.cells.iter().filter_map(|c| c.first.as_ref()) {
                eprintln!("{c}");
            }
            emit(
                &report.to_table(),
                &a.output,
                manifest(Some(a.seed), echo(a)),
            )?;
            if report.mismatches() > 0 {
                return Err(CliError::Verification(format!(
                    "{} mismatching rows; replay with the printed seed and row",
                    report.mismatches()
                )));
            }
        }
        Command::Bench(a) => {
            let t = bench_table(&cmd_bench(a)?);
            emit(&t, &a.output, manifest(Some(a.seed), echo(a)))?;
        }
    }
    Ok(())
}

/// Writes `table` to `--out` (plus manifest) or prints it to stdout.
pub fn emit(table: &Table, output: &OutputArgs, manifest: RunManifest) -> CliResult<()> {
    match &output.out {
        Some(path) => {
            fs::write(path, table.to_csv())?;
            manifest.write_next_to(path)?;
            eprintln!("wrote {}", path.display());
        }
        None if output.csv => print!("{}", table.to_csv()),
        None => print!("{}", table.to_text()),
    }
    Ok(())
}

fn echo<T: serde::Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}
