use rowtopk::batch::save_result;
use rowtopk::datagen::DataGenSpec;
use rowtopk::matrix::{load_matrix, save_matrix};
use rowtopk::{batch_topk, BatchConfig, BatchResult, RowMajorMatrix};

use crate::args::{GenArgs, RunArgs};
use crate::error::CliResult;

pub fn cmd_gen(args: &GenArgs) -> CliResult<RowMajorMatrix> {
    let m = DataGenSpec::std_normal(args.rows, args.cols, args.seed).generate(args.workers)?;
    save_matrix(&m, &args.out)?;
    Ok(m)
}

pub fn cmd_run(args: &RunArgs) -> CliResult<BatchResult> {
    let search = args.search();
    search.validate()?;
    let m = load_matrix(&args.matrix)?;
    let res = batch_topk(&m, &BatchConfig::new(args.k, search).workers(args.workers))?;
    save_result(&res, &args.out)?;
    Ok(res)
}
