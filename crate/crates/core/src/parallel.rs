//! Scoped-thread helpers that split work into contiguous index ranges.
//!
//! Every helper returns results in index order, so output never depends on
//! the worker count.

use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;
use std::thread;

/// Number of worker threads, or `Auto` for the available parallelism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    #[default]
    Auto,
    Fixed(NonZeroUsize),
}

impl Workers {
    pub fn fixed(n: usize) -> Self {
        NonZeroUsize::new(n).map_or(Workers::Auto, Workers::Fixed)
    }

    pub fn resolve(self) -> usize {
        match self {
            Workers::Fixed(n) => n.get(),
            Workers::Auto => thread::available_parallelism().map_or(1, NonZeroUsize::get),
        }
    }
}

impl fmt::Display for Workers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Workers::Auto => f.write_str("auto"),
            Workers::Fixed(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Workers {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Workers::Auto);
        }
        s.parse::<NonZeroUsize>()
            .map(Workers::Fixed)
            .map_err(|_| format!("expected a positive integer or `auto`, got `{s}`"))
    }
}

/// Rows per worker when `n` items are split over `workers` contiguous chunks.
pub fn chunk_len(n: usize, workers: usize) -> usize {
    n.div_ceil(workers.max(1)).max(1)
}

/// Evaluates `f(i)` for `i in 0..n` on up to `workers` threads.
pub fn map_indexed<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let per = chunk_len(n, workers);
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = (0..n)
            .step_by(per)
            .map(|start| {
                let end = (start + per).min(n);
                s.spawn(move || (start..end).map(f).collect::<Vec<T>>())
            })
            .collect();
        let mut out = Vec::with_capacity(n);
        for h in handles {
            out.extend(h.join().expect("worker panicked"));
        }
        out
    })
}
