//! Row-parallel application of the single-row selection.
//!
//! Rows are split into contiguous chunks, one per worker. Every row owns a
//! fixed output slot at `row * k`, so workers never share output memory and
//! the result is identical for any worker count.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::thread;

use crate::error::{Error, Result};
use crate::matrix::{decode_header, encode_header, expect_payload, RowMajorMatrix, HEADER_LEN};
use crate::parallel::{chunk_len, Workers};
use crate::topk::{check_k, topk_into, SearchConfig, SearchTrace};

pub const RESULT_MAGIC: [u8; 4] = *b"RTKR";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchConfig {
    pub k: usize,
    pub search: SearchConfig,
    pub workers: Workers,
    /// Traces are only needed by the statistics harness; off by default.
    pub collect_traces: bool,
}

impl BatchConfig {
    pub fn new(k: usize, search: SearchConfig) -> Self {
        Self {
            k,
            search,
            workers: Workers::Auto,
            collect_traces: false,
        }
    }

    pub fn workers(mut self, workers: Workers) -> Self {
        self.workers = workers;
        self
    }

    pub fn collect_traces(mut self, on: bool) -> Self {
        self.collect_traces = on;
        self
    }
}

/// `n_rows x k` selected values and indices, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchResult {
    pub n_rows: usize,
    pub k: usize,
    pub values: Vec<f32>,
    pub indices: Vec<u32>,
    pub traces: Option<Vec<SearchTrace>>,
}

impl BatchResult {
    pub fn row_values(&self, r: usize) -> &[f32] {
        &self.values[r * self.k..(r + 1) * self.k]
    }

    pub fn row_indices(&self, r: usize) -> &[u32] {
        &self.indices[r * self.k..(r + 1) * self.k]
    }

    /// `RTKR` encoding: the matrix header with `n_cols = k`, then the values
    /// as binary32 followed by the indices as `u32`. Traces are not stored.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.values.len() * 8);
        out.extend_from_slice(&encode_header(RESULT_MAGIC, self.n_rows, self.k));
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for i in &self.indices {
            out.extend_from_slice(&i.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (n_rows, k) = decode_header(bytes, RESULT_MAGIC)?;
        let len = n_rows.checked_mul(k).ok_or(Error::TruncatedFile {
            expected: u64::MAX,
            found: bytes.len() as u64,
        })?;
        let payload = expect_payload(bytes, len, 8)?;
        let (vals, idx) = payload.split_at(len * 4);
        Ok(Self {
            n_rows,
            k,
            values: vals
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
                .collect(),
            indices: idx
                .chunks_exact(4)
                .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
                .collect(),
            traces: None,
        })
    }
}

pub fn save_result(result: &BatchResult, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(&result.to_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn load_result(path: impl AsRef<Path>) -> Result<BatchResult> {
    BatchResult::from_bytes(&fs::read(path)?)
}

/// Disjoint per-worker view of the output buffers.
struct Slots<'a> {
    first_row: usize,
    values: &'a mut [f32],
    indices: &'a mut [u32],
    traces: Option<&'a mut [SearchTrace]>,
}

fn split_slots<'a>(
    k: usize,
    rows_per_worker: usize,
    values: &'a mut [f32],
    indices: &'a mut [u32],
    traces: Option<&'a mut [SearchTrace]>,
) -> Vec<Slots<'a>> {
    let step = rows_per_worker * k;
    let mut trace_chunks = traces.map(|t| t.chunks_mut(rows_per_worker));
    values
        .chunks_mut(step)
        .zip(indices.chunks_mut(step))
        .enumerate()
        .map(|(c, (values, indices))| Slots {
            first_row: c * rows_per_worker,
            values,
            indices,
            traces: trace_chunks.as_mut().and_then(Iterator::next),
        })
        .collect()
}

fn run_slots(m: &RowMajorMatrix, k: usize, search: &SearchConfig, slots: Slots<'_>) {
    // Staging buffer for the current row.
    let mut scratch = Vec::with_capacity(m.n_cols());
    let Slots {
        first_row,
        values,
        indices,
        mut traces,
    } = slots;
    for (j, (out_v, out_i)) in values
        .chunks_exact_mut(k)
        .zip(indices.chunks_exact_mut(k))
        .enumerate()
    {
        scratch.clear();
        scratch.extend_from_slice(m.row_slice(first_row + j));
        let trace = topk_into(&scratch, k, search, out_v, out_i);
        if let Some(t) = traces.as_deref_mut() {
            t[j] = trace;
        }
    }
}

/// Selects the top k of every row of `m` with `cfg.search`.
///
/// Row `r` of the output is bit-identical to the single-row selection on
/// row `r`, independent of the worker count.
pub fn batch_topk(m: &RowMajorMatrix, cfg: &BatchConfig) -> Result<BatchResult> {
    let k = cfg.k;
    check_k(k, m.n_cols())?;
    cfg.search.validate()?;
    if m.n_cols() > u32::MAX as usize {
        return Err(Error::InvalidConfig(format!(
            "row length {} exceeds the u32 index range",
            m.n_cols()
        )));
    }

    let n = m.n_rows();
    let mut values = vec![0.0f32; n * k];
    let mut indices = vec![0u32; n * k];
    let placeholder = SearchTrace {
        exit_iteration: 0,
        exit_reason: crate::topk::ExitReason::DegenerateRow,
    };
    let mut traces = cfg.collect_traces.then(|| vec![placeholder; n]);

    let workers = cfg.workers.resolve().min(n).max(1);
    let per = chunk_len(n, workers);
    let slots = split_slots(k, per, &mut values, &mut indices, traces.as_deref_mut());
    if workers == 1 {
        slots
            .into_iter()
            .for_each(|s| run_slots(m, k, &cfg.search, s));
    } else {
        thread::scope(|scope| {
            for s in slots {
                scope.spawn(|| run_slots(m, k, &cfg.search, s));
            }
        });
    }

    Ok(BatchResult {
        n_rows: n,
        k,
        values,
        indices,
        traces,
    })
}

/// Baseline: full sort of every row, then the first k. Output indices are
/// ascending within each row, matching [`batch_topk`]'s layout.
pub fn batch_sort_topk(m: &RowMajorMatrix, k: usize, workers: Workers) -> Result<BatchResult> {
    check_k(k, m.n_cols())?;
    let n = m.n_rows();
    let mut values = vec![0.0f32; n * k];
    let mut indices = vec![0u32; n * k];

    let run = |slots: Slots<'_>| {
        let mut order: Vec<u32> = Vec::with_capacity(m.n_cols());
        for (j, (out_v, out_i)) in slots
            .values
            .chunks_exact_mut(k)
            .zip(slots.indices.chunks_exact_mut(k))
            .enumerate()
        {
            let row = m.row_slice(slots.first_row + j);
            order.clear();
            order.extend(0..row.len() as u32);
            order.sort_unstable_by(|&a, &b| {
                row[b as usize]
                    .partial_cmp(&row[a as usize])
                    .expect("matrix is NaN-free")
                    .then(a.cmp(&b))
            });
            let top = &mut order[..k];
            top.sort_unstable();
            for (slot, &i) in top.iter().enumerate() {
                out_i[slot] = i;
                out_v[slot] = row[i as usize];
            }
        }
    };

    let workers = workers.resolve().min(n).max(1);
    let per = chunk_len(n, workers);
    let slots = split_slots(k, per, &mut values, &mut indices, None);
    if workers == 1 {
        slots.into_iter().for_each(run);
    } else {
        thread::scope(|scope| {
            for s in slots {
                scope.spawn(|| run(s));
            }
        });
    }

    Ok(BatchResult {
        n_rows: n,
        k,
        values,
        indices,
        traces: None,
    })
}
