//! Replicated experiments fanned out over a worker pool. Results are always
//! assembled in replicate order, so the worker count never changes outputs.

use crate::error::{CliError, CliResult, Context};
use palab_core::estimators::{hill_replicate, hill_summarize, HillResult, HillSummary};
use palab_core::limits::tail_region_mass;
use palab_core::stats_tests::{
    concentration_replicate, concentration_summarize, ConcentrationRow, ConcentrationSummary, TailSnapshot,
};
use palab_core::ModelParams;
use rayon::prelude::*;

pub fn pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if jobs > 0 {
        b = b.num_threads(jobs);
    }
    b.build().map_err(|e| CliError::Config(format!("cannot start {jobs} workers: {e}")))
}

/// `f(0), ..., f(count - 1)` on the pool, in index order.
pub fn par_map<T, F>(pool: &rayon::ThreadPool, count: usize, f: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> CliResult<T> + Sync + Send,
{
    pool.install(|| (0..count).into_par_iter().map(&f).collect())
}

pub fn check_sizes(n_list: &[usize], min: usize) -> CliResult<()> {
    if n_list.is_empty() {
        return Err(CliError::Config("n: empty size list".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config("n: sizes must be strictly ascending".into()));
    }
    if n_list[0] < min {
        return Err(CliError::Config(format!("n: sizes must be at least {min}")));
    }
    Ok(())
}

pub fn hill_experiment(
    pool: &rayon::ThreadPool,
    params: &ModelParams,
    n_list: &[usize],
    replicates: usize,
    k: Option<usize>,
    seed: u64,
) -> CliResult<(Vec<Vec<HillResult>>, Vec<HillSummary>)> {
    check_sizes(n_list, 1000)?;
    if let Some(k) = k {
        if k == 0 || k + 1 >= n_list[0] {
            return Err(CliError::Config(format!("k={k} is not below the smallest size")));
        }
    }
    let per = par_map(pool, replicates, |r| {
        hill_replicate(params, n_list, k, seed, r as u64).context(format!("hill replicate {r}"))
    })?;
    let summary = hill_summarize(&per);
    Ok((per, summary))
}

pub fn concentration_experiment(
    pool: &rayon::ThreadPool,
    params: &ModelParams,
    n_list: &[usize],
    replicates: usize,
    seed: u64,
) -> CliResult<(Vec<ConcentrationRow>, Vec<ConcentrationSummary>)> {
    check_sizes(n_list, 2)?;
    if replicates < 2 {
        return Err(CliError::Config("replicates: need at least two".into()));
    }
    let per: Vec<Vec<TailSnapshot>> = par_map(pool, replicates, |r| {
        concentration_replicate(params, n_list, seed, r as u64).context(format!("concentration replicate {r}"))
    })?;
    concentration_summarize(n_list, &per, seed).context("concentration summary")
}

/// Limit-measure masses of `(x, inf] x (y, inf]` for each point.
pub fn tail_masses(pool: &rayon::ThreadPool, params: &ModelParams, points: &[(f64, f64)]) -> CliResult<Vec<f64>> {
    par_map(pool, points.len(), |i| {
        let (x, y) = points[i];
        tail_region_mass(params, x, y).context(format!("tail mass at ({x}, {y})"))
    })
}
