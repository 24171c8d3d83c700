//! Seeded input generation.
//!
//! Every row (or trial) draws from its own ChaCha8 stream selected by
//! `(seed, index)`, so rows can be generated in any order or on any number of
//! workers and changing the row count never perturbs earlier rows.

use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::RowMajorMatrix;
use crate::parallel::{chunk_len, Workers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distribution {
    #[default]
    StdNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DataGenSpec {
    pub n_rows: usize,
    pub n_cols: usize,
    pub distribution: Distribution,
    pub seed: u64,
}

impl DataGenSpec {
    pub fn std_normal(n_rows: usize, n_cols: usize, seed: u64) -> Self {
        Self {
            n_rows,
            n_cols,
            distribution: Distribution::StdNormal,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rows == 0 || self.n_cols == 0 {
            return Err(Error::EmptyMatrix {
                n_rows: self.n_rows,
                n_cols: self.n_cols,
            });
        }
        Ok(())
    }

    /// Fills `out` with row `index` of this spec; `out.len()` may differ from
    /// `n_cols` when the spec is used as a per-trial generator.
    pub fn fill_row(&self, index: u64, out: &mut [f32]) {
        let mut rng = substream(self.seed, index);
        match self.distribution {
            Distribution::StdNormal => out.iter_mut().for_each(|v| *v = rng.sample(StandardNormal)),
        }
    }

    pub fn row(&self, index: u64) -> Vec<f32> {
        let mut out = vec![0.0; self.n_cols];
        self.fill_row(index, &mut out);
        out
    }

    pub fn generate(&self, workers: Workers) -> Result<RowMajorMatrix> {
        self.validate()?;
        let len = self.n_rows.checked_mul(self.n_cols).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "{}x{} matrix is too large",
                self.n_rows, self.n_cols
            ))
        })?;
        let mut data = vec![0.0f32; len];
        let per = chunk_len(self.n_rows, workers.resolve());
        // Rows are filled in place; each worker owns a contiguous block.
        thread::scope(|scope| {
            for (c, block) in data.chunks_mut(per * self.n_cols).enumerate() {
                scope.spawn(move || {
                    for (j, row) in block.chunks_exact_mut(self.n_cols).enumerate() {
                        self.fill_row((c * per + j) as u64, row);
                    }
                });
            }
        });
        RowMajorMatrix::new(self.n_rows, self.n_cols, data)
    }
}

/// Independent generator keyed by `(seed, index)`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
