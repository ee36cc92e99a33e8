//! Hill estimators, intermediate sequences, scaling functions and tail
//! empirical measures.

use crate::census::DegreeCensus;
use crate::error::{Error, Result};
use crate::limits::{tail_constant, tail_region_mass};
use crate::pa_graph::GraphState;
use crate::params::{ModelParams, Side};
use crate::rng::replicate_rng;
use crate::stats_tests::{check_n_list, median, quantile};

/// Positive entries sorted in descending order.
fn descending_positive(values: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|&x| x > 0.0).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn check_k(len: usize, positive: usize, k: usize) -> Result<()> {
    if k == 0 || k >= len {
        return Err(Error::Argument(format!("k must lie in 1..{len}, got {k}")));
    }
    if k + 1 > positive {
        return Err(Error::DegenerateTail(format!(
            "the ({})-th largest value is zero: only {positive} positive entries",
            k + 1
        )));
    }
    Ok(())
}

/// Hill estimator from the `k` upper order statistics.
///
/// Zero entries are dropped; ties are kept as repeats.
pub fn hill(values: &[f64], k: usize) -> Result<f64> {
    let d = descending_positive(values);
    check_k(values.len(), d.len(), k)?;
    let base = d[k].ln();
    Ok(d[..k].iter().map(|x| x.ln() - base).sum::<f64>() / k as f64)
}

pub fn hill_degrees(degrees: &[u32], k: usize) -> Result<f64> {
    let v: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
    hill(&v, k)
}

/// Hill estimator as `int_1^inf nu(y, inf] dy / y` for the empirical measure
/// `nu` of the top values normalized by the `(k+1)`-th largest.
pub fn hill_via_measure(values: &[f64], k: usize) -> Result<f64> {
    let d = descending_positive(values);
    check_k(values.len(), d.len(), k)?;
    // nu(y, inf] = m / k on [r_{m+1}, r_m) with r_m = d_m / d_{k+1}
    let ratios: Vec<f64> = d[..=k].iter().map(|x| x / d[k]).collect();
    let mut total = 0.0;
    for m in 1..=k {
        let (hi, lo) = (ratios[m - 1], ratios[m]);
        if hi > lo {
            total += m as f64 / k as f64 * (hi / lo).ln();
        }
    }
    Ok(total)
}

/// Default intermediate sequence `ceil(sqrt(n ln n))`, clamped to `[1, n - 2]`.
pub fn kn_default(n: usize) -> usize {
    assert!(n >= 3, "kn_default needs n >= 3");
    let nf = n as f64;
    let k = (nf * nf.ln()).sqrt().ceil() as usize;
    k.clamp(1, n - 2)
}

/// Scaling function `b(t) = (C t)^c`, where `C t^{-iota}` is the tail of the
/// limiting degree on `side`.
pub fn scaling_b(params: &ModelParams, side: Side, t: f64) -> f64 {
    let c = params.c(side);
    (tail_constant(params, side) * t).powf(c)
}

/// How degrees are normalized in the tail empirical measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailNormalization {
    /// Divide by `b(n / k)`.
    Scaling,
    /// Divide by the `(k+1)`-th largest degree.
    OrderStatistic,
}

/// One-dimensional tail empirical measure `y -> (1/k) #{v : D_v / scale > y}`.
#[derive(Debug, Clone)]
pub struct TailMeasure1d {
    pub k: usize,
    pub scale: f64,
    /// Positive degrees, descending.
    sorted: Vec<f64>,
}

impl TailMeasure1d {
    pub fn mass_above(&self, y: f64) -> f64 {
        let t = y * self.scale;
        // count of entries strictly greater than t in a descending vector
        let count = self.sorted.partition_point(|&d| d > t);
        count as f64 / self.k as f64
    }
}

pub fn tail_empirical_1d(
    degrees: &[u32],
    side: Side,
    params: &ModelParams,
    k: usize,
    normalization: TailNormalization,
) -> Result<TailMeasure1d> {
    let v: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
    let sorted = descending_positive(&v);
    check_k(degrees.len(), sorted.len(), k)?;
    let scale = match normalization {
        TailNormalization::Scaling => scaling_b(params, side, degrees.len() as f64 / k as f64),
        TailNormalization::OrderStatistic => sorted[k],
    };
    Ok(TailMeasure1d { k, scale, sorted })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailGridPoint {
    pub x: f64,
    pub y: f64,
    pub empirical_mass: f64,
    pub theoretical_mass: f64,
}

/// Empirical and limiting masses of upper rectangles `(x, inf] x (y, inf]`
/// after scaling in-degrees by `(n/k)^{c_in}` and out-degrees by `(n/k)^{c_out}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailGrid {
    pub scale_x: f64,
    pub scale_y: f64,
    pub k: usize,
    pub points: Vec<TailGridPoint>,
}

/// Empirical rectangle masses only.
pub fn tail_empirical_2d_counts(census: &DegreeCensus, params: &ModelParams, k: usize, xs: &[f64], ys: &[f64]) -> Result<TailGrid> {
    let n = census.n() as usize;
    if k == 0 || k >= n {
        return Err(Error::Argument(format!("k must lie in 1..{n}, got {k}")));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Argument("grid coordinates must be positive and finite".into()));
    }
    let ratio = n as f64 / k as f64;
    let (sx, sy) = (ratio.powf(params.c_in()), ratio.powf(params.c_out()));
    let mut points = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        for &y in ys {
            let ti = (x * sx).floor() as u32;
            let to = (y * sy).floor() as u32;
            points.push(TailGridPoint {
                x,
                y,
                empirical_mass: census.joint_tail(ti, to) as f64 / k as f64,
                theoretical_mass: f64::NAN,
            });
        }
    }
    Ok(TailGrid { scale_x: sx, scale_y: sy, k, points })
}

/// Empirical rectangle masses paired with the limit measure's masses.
pub fn tail_empirical_2d(census: &DegreeCensus, params: &ModelParams, k: usize, xs: &[f64], ys: &[f64]) -> Result<TailGrid> {
    let mut grid = tail_empirical_2d_counts(census, params, k, xs, ys)?;
    for p in &mut grid.points {
        p.theoretical_mass = tail_region_mass(params, p.x, p.y)?;
    }
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillResult {
    pub k: usize,
    pub n: usize,
    pub estimate: f64,
    pub target: f64,
    pub side: Side,
}

/// One replicate of the consistency experiment: a single graph grown through
/// the sizes in `n_list`, with the Hill estimate of each side at each size.
pub fn hill_replicate(params: &ModelParams, n_list: &[usize], k_override: Option<usize>, master: u64, r: u64) -> Result<Vec<HillResult>> {
    let mut g = GraphState::with_rng(*params, replicate_rng(master, r));
    let mut out = Vec::with_capacity(2 * n_list.len());
    for &n in n_list {
        g.evolve(n)?;
        let k = k_override.unwrap_or_else(|| kn_default(n));
        for side in Side::BOTH {
            out.push(HillResult { k, n, estimate: hill_degrees(g.degrees(side), k)?, target: params.c(side), side });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillSummary {
    pub n: usize,
    pub side: Side,
    pub k: usize,
    pub target: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub median_abs_error: f64,
}

pub fn hill_summarize(results: &[Vec<HillResult>]) -> Vec<HillSummary> {
    let Some(first) = results.first() else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(first.len());
    for (idx, proto) in first.iter().enumerate() {
        let mut est: Vec<f64> = results.iter().map(|r| r[idx].estimate).collect();
        est.sort_by(f64::total_cmp);
        let errs: Vec<f64> = est.iter().map(|e| (e - proto.target).abs()).collect();
        out.push(HillSummary {
            n: proto.n,
            side: proto.side,
            k: proto.k,
            target: proto.target,
            median: quantile(&est, 0.5),
            q25: quantile(&est, 0.25),
            q75: quantile(&est, 0.75),
            median_abs_error: median(&errs),
        });
    }
    out
}

/// Hill estimates of both sides across replicates and sizes, with summaries.
pub fn hill_consistency_experiment(
    params: &ModelParams,
    n_list: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<(Vec<Vec<HillResult>>, Vec<HillSummary>)> {
    check_n_list(n_list)?;
    if n_list[0] < 1000 {
        return Err(Error::Argument("sizes must be at least 1000".into()));
    }
    let per: Vec<Vec<HillResult>> =
        (0..replicates as u64).map(|r| hill_replicate(params, n_list, None, seed, r)).collect::<Result<_>>()?;
    let summary = hill_summarize(&per);
    Ok((per, summary))
}
