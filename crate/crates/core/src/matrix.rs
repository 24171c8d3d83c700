//! Dense row-major matrix and its little-endian file format.
//!
//! Layout: magic `RTKM` (4 bytes), version `u32 = 1`, `n_rows: u64`,
//! `n_cols: u64`, then `n_rows * n_cols` binary32 values row-major.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::topk::Row;

pub const MATRIX_MAGIC: [u8; 4] = *b"RTKM";
pub const FORMAT_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 24;

/// Rows beyond this length are accepted but lie outside the regime the
/// iteration model and batch sizing were validated for.
pub const SOFT_MAX_COLS: usize = 8192;

#[derive(Debug, Clone, PartialEq)]
pub struct RowMajorMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f32>,
}

impl RowMajorMatrix {
    /// Validates shape and NaN-freedom.
    pub fn new(n_rows: usize, n_cols: usize, data: Vec<f32>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::EmptyMatrix { n_rows, n_cols });
        }
        let expected = n_rows.checked_mul(n_cols).ok_or(Error::DimensionMismatch {
            expected: usize::MAX,
            found: data.len(),
        })?;
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| v.is_nan()) {
            return Err(Error::NanInput {
                row: Some(pos / n_cols),
                index: pos % n_cols,
            });
        }
        Ok(Self {
            n_rows,
            n_cols,
            data,
        })
    }

    pub fn from_rows<R: AsRef<[f32]>>(rows: &[R]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * n_cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), n_cols, data)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Row<'_> {
        Row::from_validated(self.row_slice(r))
    }

    pub fn row_slice(&self, r: usize) -> &[f32] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f32]> + '_ {
        self.data.chunks_exact(self.n_cols)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.data.len() * 4);
        out.extend_from_slice(&encode_header(MATRIX_MAGIC, self.n_rows, self.n_cols));
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (n_rows, n_cols) = decode_header(bytes, MATRIX_MAGIC)?;
        let len = n_rows.checked_mul(n_cols).ok_or(Error::TruncatedFile {
            expected: u64::MAX,
            found: bytes.len() as u64,
        })?;
        let payload = expect_payload(bytes, len, 4)?;
        let data = payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::new(n_rows, n_cols, data)
    }
}

/// Reads an `RTKM` file.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<RowMajorMatrix> {
    RowMajorMatrix::from_bytes(&fs::read(path)?)
}

/// Writes an `RTKM` file.
pub fn save_matrix(m: &RowMajorMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(&m.to_bytes())?;
    w.flush()?;
    Ok(())
}

pub(crate) fn encode_header(magic: [u8; 4], n_rows: usize, n_cols: usize) -> [u8; HEADER_LEN] {
    let mut h = [0u8; HEADER_LEN];
    h[0..4].copy_from_slice(&magic);
    h[4..8].copy_from_slice(&FORMAT_VERSION.to_le_bytes());
    h[8..16].copy_from_slice(&(n_rows as u64).to_le_bytes());
    h[16..24].copy_from_slice(&(n_cols as u64).to_le_bytes());
    h
}

pub(crate) fn decode_header(bytes: &[u8], magic: [u8; 4]) -> Result<(usize, usize)> {
    if bytes.len() < HEADER_LEN {
        if bytes.len() >= 4 && bytes[0..4] != magic {
            return Err(bad_magic(bytes, magic));
        }
        return Err(Error::TruncatedFile {
            expected: HEADER_LEN as u64,
            found: bytes.len() as u64,
        });
    }
    if bytes[0..4] != magic {
        return Err(bad_magic(bytes, magic));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let n_rows = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let n_cols = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let to_usize = |v: u64| {
        usize::try_from(v).map_err(|_| Error::TruncatedFile {
            expected: u64::MAX,
            found: bytes.len() as u64,
        })
    };
    Ok((to_usize(n_rows)?, to_usize(n_cols)?))
}

/// Payload after the header, checked to hold exactly `count` items of
/// `width` bytes.
pub(crate) fn expect_payload(bytes: &[u8], count: usize, width: usize) -> Result<&[u8]> {
    let found = bytes.len() - HEADER_LEN;
    let expected = count.checked_mul(width).ok_or(Error::TruncatedFile {
        expected: u64::MAX,
        found: bytes.len() as u64,
    })?;
    if found < expected {
        return Err(Error::TruncatedFile {
            expected: (HEADER_LEN + expected) as u64,
            found: bytes.len() as u64,
        });
    }
    if found > expected {
        return Err(Error::DimensionMismatch {
            expected: HEADER_LEN + expected,
            found: bytes.len(),
        });
    }
    Ok(&bytes[HEADER_LEN..])
}

fn bad_magic(bytes: &[u8], expected: [u8; 4]) -> Error {
    Error::BadMagic {
        expected,
        found: bytes[0..4].try_into().unwrap(),
    }
}
