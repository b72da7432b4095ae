//! Pair scans with a deterministic reduction, run on rayon when the
//! `parallel` feature is enabled and sequentially otherwise.
//!
//! Every reduction here is order-independent: maxima and minima break
//! ties on the lexicographically smallest pair, and searches return the
//! first hit in lexicographic order. Results are therefore identical for
//! any worker count and for both execution modes.

use std::cmp::Ordering;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a scan is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// A scored unordered pair `(i, j)` with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scored {
    pub value: f64,
    pub pair: (usize, usize),
}

fn better_max(a: Scored, b: Scored) -> Scored {
    match a.value.total_cmp(&b.value) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.pair <= b.pair {
                a
            } else {
                b
            }
        }
    }
}

fn better_min(a: Scored, b: Scored) -> Scored {
    match a.value.total_cmp(&b.value) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if a.pair <= b.pair {
                a
            } else {
                b
            }
        }
    }
}

fn pick(a: Option<Scored>, b: Option<Scored>, f: fn(Scored, Scored) -> Scored) -> Option<Scored> {
    match (a, b) {
        (Some(a), Some(b)) => Some(f(a, b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn reduce_rows<F>(
    rows: usize,
    exec: Execution,
    row: F,
    f: fn(Scored, Scored) -> Scored,
) -> Option<Scored>
where
    F: Fn(usize) -> Option<Scored> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..rows)
            .into_par_iter()
            .map(&row)
            .reduce(|| None, |a, b| pick(a, b, f)),
        _ => (0..rows).map(row).fold(None, |a, b| pick(a, b, f)),
    }
}

fn row_best<F>(i: usize, cols: impl Iterator<Item = usize>, score: &F, f: fn(Scored, Scored) -> Scored) -> Option<Scored>
where
    F: Fn(usize, usize) -> Option<f64>,
{
    cols.filter_map(|j| score(i, j).map(|value| Scored { value, pair: (i, j) }))
        .fold(None, |acc, s| pick(acc, Some(s), f))
}

/// Maximum of `score(i, j)` over all `0 <= i < j < n`; pairs scored
/// `None` are skipped.
pub fn max_over_pairs<F>(n: usize, exec: Execution, score: F) -> Option<Scored>
where
    F: Fn(usize, usize) -> Option<f64> + Sync + Send,
{
    reduce_rows(n, exec, |i| row_best(i, i + 1..n, &score, better_max), better_max)
}

/// Minimum counterpart of [`max_over_pairs`].
pub fn min_over_pairs<F>(n: usize, exec: Execution, score: F) -> Option<Scored>
where
    F: Fn(usize, usize) -> Option<f64> + Sync + Send,
{
    reduce_rows(n, exec, |i| row_best(i, i + 1..n, &score, better_min), better_min)
}

/// Maximum over ordered pairs `(i, j)` with `i in 0..rows`, `j in 0..cols`.
pub fn max_over_grid<F>(rows: usize, cols: usize, exec: Execution, score: F) -> Option<Scored>
where
    F: Fn(usize, usize) -> Option<f64> + Sync + Send,
{
    reduce_rows(rows, exec, |i| row_best(i, 0..cols, &score, better_max), better_max)
}

/// Lexicographically first unordered pair satisfying `hit`.
pub fn first_pair<F>(n: usize, exec: Execution, hit: F) -> Option<(usize, usize)>
where
    F: Fn(usize, usize) -> bool + Sync + Send,
{
    let row = |i: usize| (i + 1..n).find(|&j| hit(i, j)).map(|j| (i, j));
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().find_map_first(row),
        _ => (0..n).find_map(row),
    }
}

/// `(0..n).map(f).collect()`, in parallel when requested.
pub fn map_indices<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}
