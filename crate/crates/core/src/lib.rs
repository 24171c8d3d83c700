//! Row-wise top-k selection by binary search over the value domain.
//!
//! - [`topk`]: single-row exact and early-stop selection plus a sort oracle.
//! - [`batch`]: parallel application over the rows of a matrix.
//! - [`matrix`]: row-major matrix type and its binary file format.
//! - [`analysis`]: hit rate, extreme-element errors, exit-iteration
//!   histograms, and the closed-form iteration model for normal inputs.
//! - [`datagen`]: seeded normal data with per-row substreams.

pub mod analysis;
pub mod batch;
pub mod datagen;
pub mod error;
pub mod matrix;
pub mod parallel;
pub mod topk;

pub use batch::{batch_topk, BatchConfig, BatchResult};
pub use error::{Error, Result};
pub use matrix::RowMajorMatrix;
pub use parallel::Workers;
pub use topk::{
    early_stop_topk, exact_topk, oracle_topk, ExitReason, Row, SearchConfig, SearchMode,
    SearchState, SearchTrace, TopKResult,
};
