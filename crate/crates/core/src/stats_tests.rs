//! Goodness-of-fit kernels (Kolmogorov–Smirnov, Pearson chi-square), Monte
//! Carlo bands, and the fluctuation experiment for joint tail counts.

use crate::census::DegreeCensus;
use crate::error::{Error, Result};
use crate::params::{ModelParams, Side};
use crate::rng::{replicate_rng, rng_from_seed};
use crate::special::gamma_p;
use rand::Rng;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    P01,
    P05,
}

impl Level {
    pub fn value(self) -> f64 {
        match self {
            Level::P01 => 0.01,
            Level::P05 => 0.05,
        }
    }

    /// Asymptotic Kolmogorov distribution quantile.
    pub fn ks_coefficient(self) -> f64 {
        match self {
            Level::P01 => 1.628,
            Level::P05 => 1.358,
        }
    }

    fn normal_quantile(self) -> f64 {
        match self {
            Level::P01 => 2.326_347_874_040_841,
            Level::P05 => 1.644_853_626_951_472_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestReport {
    pub statistic: f64,
    pub critical_value: f64,
    pub sample_size: u64,
    pub level: f64,
    pub accept: bool,
    /// Degrees of freedom for chi-square tests.
    pub df: Option<usize>,
}

impl TestReport {
    fn new(statistic: f64, critical_value: f64, sample_size: u64, level: Level, df: Option<usize>) -> Self {
        Self { statistic, critical_value, sample_size, level: level.value(), accept: statistic <= critical_value, df }
    }
}

/// One-sample KS test of a sorted sample against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F, level: Level) -> Result<TestReport> {
    if sample.is_empty() {
        return Err(Error::Argument("empty sample".into()));
    }
    if sample.iter().any(|x| x.is_nan()) {
        return Err(Error::Argument("sample contains NaN".into()));
    }
    if sample.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Argument("sample must be sorted ascending".into()));
    }
    let m = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        d = d.max((k + 1) as f64 / m - f).max(f - k as f64 / m);
    }
    Ok(TestReport::new(d, level.ks_coefficient() / m.sqrt(), sample.len() as u64, level, None))
}

/// Two-sample KS test; inputs need not be sorted.
pub fn ks_two_sample(a: &[f64], b: &[f64], level: Level) -> Result<TestReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("empty sample".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    if a.iter().chain(&b).any(|x| x.is_nan()) {
        return Err(Error::Argument("sample contains NaN".into()));
    }
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (m, n) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < m && j < n {
        let x = a[i].min(b[j]);
        while i < m && a[i] <= x {
            i += 1;
        }
        while j < n && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / m as f64 - j as f64 / n as f64).abs());
    }
    let (mf, nf) = (m as f64, n as f64);
    let crit = level.ks_coefficient() * ((mf + nf) / (mf * nf)).sqrt();
    Ok(TestReport::new(d, crit, (m + n) as u64, level, None))
}

/// Regularized lower incomplete gamma: the `Gamma(shape, 1)` cdf.
pub fn gamma_cdf(shape: f64, x: f64) -> Result<f64> {
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(Error::Argument(format!("shape must be positive, got {shape}")));
    }
    if !(x >= 0.0) {
        return Err(Error::Argument(format!("x must be nonnegative, got {x}")));
    }
    Ok(gamma_p(shape, x))
}

/// Upper critical value of the chi-square distribution.
///
/// Exact table values for `df <= 4`, Wilson–Hilferty above.
pub fn chisq_critical(df: usize, level: Level) -> f64 {
    const TABLE_01: [f64; 4] = [6.634_896_601_021_214, 9.210_340_371_976_182, 11.344_866_730_144_37, 13.276_704_135_987_62];
    const TABLE_05: [f64; 4] = [3.841_458_820_694_124, 5.991_464_547_107_979, 7.814_727_903_251_178, 9.487_729_036_781_154];
    assert!(df >= 1);
    if df <= 4 {
        return match level {
            Level::P01 => TABLE_01[df - 1],
            Level::P05 => TABLE_05[df - 1],
        };
    }
    let k = df as f64;
    let h = 2.0 / (9.0 * k);
    k * (1.0 - h + level.normal_quantile() * h.sqrt()).powi(3)
}

/// Minimum expected count per cell after pooling.
pub const MIN_EXPECTED: f64 = 10.0;

/// Pearson goodness-of-fit test.
///
/// `observed[c]` is the count in cell `c` and `expected_probs[c]` its model
/// probability. Any leftover probability and any counts not in the listed
/// cells form a residual cell. Cells with expected count below
/// [`MIN_EXPECTED`] are pooled together; a pool that is itself too small is
/// merged into the smallest retained cell.
pub fn chisq_test(observed: &[u64], expected_probs: &[f64], total: u64, level: Level) -> Result<TestReport> {
    if observed.len() != expected_probs.len() {
        return Err(Error::Argument("observed and expected lengths differ".into()));
    }
    if total == 0 {
        return Err(Error::Argument("total must be positive".into()));
    }
    let nt = total as f64;
    let listed: u64 = observed.iter().sum();
    if listed > total {
        return Err(Error::Argument(format!("observed counts sum to {listed} > total {total}")));
    }
    let mut cells: Vec<(f64, f64)> = observed.iter().zip(expected_probs).map(|(&o, &p)| (o as f64, p * nt)).collect();
    let p_sum: f64 = expected_probs.iter().sum();
    cells.push(((total - listed) as f64, (1.0 - p_sum).max(0.0) * nt));
    let (keep, pooled) = pool(cells);
    pearson(keep, pooled, total, level)
}

fn pool(cells: Vec<(f64, f64)>) -> (Vec<(f64, f64)>, (f64, f64)) {
    let mut keep = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (o, e) in cells {
        if e >= MIN_EXPECTED {
            keep.push((o, e));
        } else {
            pooled.0 += o;
            pooled.1 += e;
        }
    }
    (keep, pooled)
}

fn pearson(mut keep: Vec<(f64, f64)>, pooled: (f64, f64), total: u64, level: Level) -> Result<TestReport> {
    if pooled.1 >= MIN_EXPECTED {
        keep.push(pooled);
    } else if pooled.0 > 0.0 || pooled.1 > 0.0 {
        if let Some(smallest) = keep.iter_mut().min_by(|a, b| a.1.total_cmp(&b.1)) {
            smallest.0 += pooled.0;
            smallest.1 += pooled.1;
        }
    }
    if keep.len() < 2 {
        return Err(Error::Degenerate(format!("only {} cell(s) left after pooling", keep.len())));
    }
    let stat: f64 = keep.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let df = keep.len() - 1;
    Ok(TestReport::new(stat, chisq_critical(df, level), total, level, Some(df)))
}

/// Two-sample chi-square test of homogeneity over shared cells.
pub fn chisq_two_sample(a: &[u64], b: &[u64], level: Level) -> Result<TestReport> {
    if a.len() != b.len() {
        return Err(Error::Argument("count vectors differ in length".into()));
    }
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(Error::Argument("both samples must be nonempty".into()));
    }
    let fa = na as f64 / (na + nb) as f64;
    let fb = 1.0 - fa;
    // pool on the smaller of the two expected counts
    let mut keep: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let s = (x + y) as f64;
        if s * fa.min(fb) >= MIN_EXPECTED {
            keep.push((x as f64, y as f64));
        } else {
            pooled.0 += x as f64;
            pooled.1 += y as f64;
        }
    }
    let ps = pooled.0 + pooled.1;
    if ps * fa.min(fb) >= MIN_EXPECTED {
        keep.push(pooled);
    } else if ps > 0.0 {
        if let Some(smallest) = keep.iter_mut().min_by(|p, q| (p.0 + p.1).total_cmp(&(q.0 + q.1))) {
            smallest.0 += pooled.0;
            smallest.1 += pooled.1;
        }
    }
    if keep.len() < 2 {
        return Err(Error::Degenerate(format!("only {} cell(s) left after pooling", keep.len())));
    }
    let stat: f64 = keep
        .iter()
        .map(|&(x, y)| {
            let s = x + y;
            let (ea, eb) = (s * fa, s * fb);
            (x - ea).powi(2) / ea + (y - eb).powi(2) / eb
        })
        .sum();
    let df = keep.len() - 1;
    Ok(TestReport::new(stat, chisq_critical(df, level), na + nb, level, Some(df)))
}

/// `mean ± sigmas * sd` interval for a Binomial(trials, p) count.
pub fn binomial_band(trials: u64, p: f64, sigmas: f64) -> (f64, f64) {
    let n = trials as f64;
    let sd = (n * p * (1.0 - p)).sqrt();
    (n * p - sigmas * sd, n * p + sigmas * sd)
}

/// Sample quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile(&v, 0.5)
}

/// Percentile bootstrap interval for the median.
pub fn bootstrap_median_ci(values: &[f64], resamples: usize, coverage: f64, seed: u64) -> (f64, f64) {
    let mut rng = rng_from_seed(seed);
    let m = values.len();
    let mut meds = Vec::with_capacity(resamples);
    let mut buf = vec![0.0; m];
    for _ in 0..resamples {
        for slot in buf.iter_mut() {
            *slot = values[rng.random_range(0..m)];
        }
        buf.sort_by(f64::total_cmp);
        meds.push(quantile(&buf, 0.5));
    }
    meds.sort_by(f64::total_cmp);
    let tail = (1.0 - coverage) / 2.0;
    (quantile(&meds, tail), quantile(&meds, 1.0 - tail))
}

/// Tail counts of one replicate at one graph size.
#[derive(Debug, Clone)]
pub struct TailSnapshot {
    pub census: DegreeCensus,
}

/// Grows one graph through the ascending sizes in `n_list`, recording the
/// degree census at each.
pub fn concentration_replicate(params: &ModelParams, n_list: &[usize], master: u64, r: u64) -> Result<Vec<TailSnapshot>> {
    let mut g = crate::pa_graph::GraphState::with_rng(*params, replicate_rng(master, r));
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        g.evolve(n)?;
        out.push(TailSnapshot { census: DegreeCensus::from_degrees(g.in_degrees(), g.out_degrees()) });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationRow {
    pub n: usize,
    pub replicate: usize,
    pub max_dev_joint: f64,
    pub max_dev_in: f64,
    pub max_dev_out: f64,
    /// `max_dev_joint / (1 + sqrt(n ln n))`
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationSummary {
    pub n: usize,
    pub replicates: usize,
    pub median_max_dev: f64,
    pub median_ratio: f64,
    pub ratio_ci: (f64, f64),
    pub median_ratio_in: f64,
    pub median_ratio_out: f64,
    /// Largest standard error of the cross-replicate mean over the grid,
    /// relative to the normalizer `1 + sqrt(n ln n)`.
    pub mean_se_ratio: f64,
}

pub fn concentration_normalizer(n: usize) -> f64 {
    let nf = n as f64;
    1.0 + (nf * nf.ln()).sqrt()
}

fn distinct_thresholds(snaps: &[&DegreeCensus], side: Side) -> Vec<u32> {
    let mut set = BTreeSet::new();
    set.insert(0u32);
    for c in snaps {
        for (d, &cnt) in c.marginal(side).iter().enumerate() {
            if cnt > 0 {
                set.insert(d as u32);
            }
        }
    }
    set.into_iter().collect()
}

/// Per-replicate maximal deviations of joint and marginal tail counts from
/// their cross-replicate mean, plus per-size summaries.
///
/// `per_replicate[r][s]` is replicate `r` at size `n_list[s]`. Tail counts only
/// change at observed degree values, so the maximum over all `(i, j)` is taken
/// on the lattice of distinct observed degrees.
pub fn concentration_summarize(
    n_list: &[usize],
    per_replicate: &[Vec<TailSnapshot>],
    seed: u64,
) -> Result<(Vec<ConcentrationRow>, Vec<ConcentrationSummary>)> {
    let reps = per_replicate.len();
    if reps < 2 {
        return Err(Error::Argument("need at least two replicates".into()));
    }
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (s, &n) in n_list.iter().enumerate() {
        let snaps: Vec<&DegreeCensus> = per_replicate.iter().map(|r| &r[s].census).collect();
        let ti = distinct_thresholds(&snaps, Side::In);
        let to = distinct_thresholds(&snaps, Side::Out);
        let grids: Vec<Vec<u64>> = snaps.iter().map(|c| c.joint_tail_grid(&ti, &to)).collect();
        let cells = ti.len() * to.len();
        let mut mean = vec![0.0f64; cells];
        let mut sq = vec![0.0f64; cells];
        for g in &grids {
            for (k, &v) in g.iter().enumerate() {
                let v = v as f64;
                mean[k] += v;
                sq[k] += v * v;
            }
        }
        let rf = reps as f64;
        let mut max_se: f64 = 0.0;
        for k in 0..cells {
            mean[k] /= rf;
            let var = (sq[k] / rf - mean[k] * mean[k]).max(0.0) * rf / (rf - 1.0);
            max_se = max_se.max((var / rf).sqrt());
        }
        let marg = |side: Side, th: &[u32]| -> Vec<Vec<f64>> {
            snaps.iter().map(|c| th.iter().map(|&t| c.marginal_tail(side, t) as f64).collect()).collect()
        };
        let min_ = marg(Side::In, &ti);
        let mout = marg(Side::Out, &to);
        let col_mean = |m: &Vec<Vec<f64>>| -> Vec<f64> {
            let len = m[0].len();
            (0..len).map(|k| m.iter().map(|row| row[k]).sum::<f64>() / rf).collect()
        };
        let mean_in = col_mean(&min_);
        let mean_out = col_mean(&mout);
        let norm = concentration_normalizer(n);
        let mut ratios = Vec::with_capacity(reps);
        let mut ratios_in = Vec::with_capacity(reps);
        let mut ratios_out = Vec::with_capacity(reps);
        let mut devs = Vec::with_capacity(reps);
        for r in 0..reps {
            let dj = grids[r].iter().zip(&mean).map(|(&v, &m)| (v as f64 - m).abs()).fold(0.0, f64::max);
            let di = min_[r].iter().zip(&mean_in).map(|(v, m)| (v - m).abs()).fold(0.0, f64::max);
            let dout = mout[r].iter().zip(&mean_out).map(|(v, m)| (v - m).abs()).fold(0.0, f64::max);
            rows.push(ConcentrationRow {
                n,
                replicate: r,
                max_dev_joint: dj,
                max_dev_in: di,
                max_dev_out: dout,
                ratio: dj / norm,
            });
            ratios.push(dj / norm);
            ratios_in.push(di / norm);
            ratios_out.push(dout / norm);
            devs.push(dj);
        }
        summaries.push(ConcentrationSummary {
            n,
            replicates: reps,
            median_max_dev: median(&devs),
            median_ratio: median(&ratios),
            ratio_ci: bootstrap_median_ci(&ratios, 1000, 0.95, seed ^ n as u64),
            median_ratio_in: median(&ratios_in),
            median_ratio_out: median(&ratios_out),
            mean_se_ratio: max_se / norm,
        });
    }
    Ok((rows, summaries))
}

/// Sequential driver: replicates with seeds derived from `seed`.
pub fn concentration_experiment(
    params: &ModelParams,
    n_list: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<(Vec<ConcentrationRow>, Vec<ConcentrationSummary>)> {
    check_n_list(n_list)?;
    let per: Vec<Vec<TailSnapshot>> = (0..replicates as u64)
        .map(|r| concentration_replicate(params, n_list, seed, r))
        .collect::<Result<_>>()?;
    concentration_summarize(n_list, &per, seed)
}

pub(crate) fn check_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() {
        return Err(Error::Argument("empty size list".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument("sizes must be strictly ascending".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Exp1};

    #[test]
    fn ks_single_point_at_median() {
        let r = ks_statistic(&[0.0], |x| if x < 0.0 { 0.0 } else { 0.5 }, Level::P01).unwrap();
        assert!((r.statistic - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_rejects_shifted_sample() {
        let mut rng = rng_from_seed(3);
        let mut s: Vec<f64> = (0..10_000).map(|_| { let e: f64 = Exp1.sample(&mut rng); 1.0 + e }).collect();
        s.sort_by(f64::total_cmp);
        let r = ks_statistic(&s, |x| if x <= 0.0 { 0.0 } else { 1.0 - (-x).exp() }, Level::P01).unwrap();
        assert!(r.statistic >= 1.0 - (-1.0f64).exp() - 1e-12);
        assert!(!r.accept);
    }

    #[test]
    fn ks_rejects_unsorted() {
        assert!(ks_statistic(&[2.0, 1.0], |_| 0.5, Level::P01).is_err());
        assert!(ks_statistic(&[], |_| 0.5, Level::P01).is_err());
    }

    #[test]
    fn ks_calibration() {
        let mut rng = rng_from_seed(99);
        let trials = 200;
        let mut accepted = 0;
        for _ in 0..trials {
            let mut s: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
            s.sort_by(f64::total_cmp);
            if ks_statistic(&s, |x| x.clamp(0.0, 1.0), Level::P01).unwrap().accept {
                accepted += 1;
            }
        }
        assert!(accepted as f64 >= 0.98 * trials as f64, "{accepted}/{trials}");
    }

    #[test]
    fn ks_two_sample_detects_identity_and_shift() {
        let a: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        let r = ks_two_sample(&a, &a, Level::P01).unwrap();
        assert_eq!(r.statistic, 0.0);
        let b: Vec<f64> = a.iter().map(|x| x + 500.0).collect();
        let r = ks_two_sample(&a, &b, Level::P01).unwrap();
        assert!((r.statistic - 0.5).abs() < 1e-12);
        assert!(!r.accept);
    }

    #[test]
    fn gamma_cdf_examples() {
        assert!((gamma_cdf(2.0, 2.0).unwrap() - (1.0 - 3.0 * (-2.0f64).exp())).abs() < 1e-14);
        assert!((gamma_cdf(2.0, 2.0).unwrap() - 0.59399).abs() < 1e-5);
        assert_eq!(gamma_cdf(3.5, 0.0).unwrap(), 0.0);
        assert!((gamma_cdf(3.5, 500.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(gamma_cdf(0.0, 1.0).is_err());
        assert!(gamma_cdf(1.0, -1.0).is_err());
    }

    #[test]
    fn gamma_cdf_derivative_matches_density() {
        use crate::special::ln_gamma;
        for &a in &[0.5, 1.0, 2.0, 6.5] {
            let mut prev = 0.0;
            for k in 1..=1000 {
                let x = k as f64 * 0.02;
                let f = gamma_cdf(a, x).unwrap();
                assert!(f >= prev);
                prev = f;
                let h = 1e-5;
                let num = (gamma_cdf(a, x + h).unwrap() - gamma_cdf(a, x - h).unwrap()) / (2.0 * h);
                let dens = ((a - 1.0) * x.ln() - x - ln_gamma(a)).exp();
                assert!((num - dens).abs() < 1e-6, "a={a} x={x}");
            }
        }
    }

    #[test]
    fn chisq_critical_values() {
        assert!((chisq_critical(1, Level::P01) - 6.635).abs() < 1e-3);
        assert!((chisq_critical(4, Level::P05) - 9.488).abs() < 1e-3);
        // df = 10: 23.209 and 18.307
        assert!((chisq_critical(10, Level::P01) - 23.209).abs() < 0.05);
        assert!((chisq_critical(10, Level::P05) - 18.307).abs() < 0.05);
        // df = 100: 135.807
        assert!((chisq_critical(100, Level::P01) - 135.807).abs() < 0.1);
    }

    #[test]
    fn chisq_proportional_is_zero() {
        let r = chisq_test(&[250, 500, 250], &[0.25, 0.5, 0.25], 1000, Level::P01).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        assert_eq!(r.df, Some(2));
        assert!(r.accept);
    }

    #[test]
    fn chisq_pools_small_cells() {
        // cells with expected 3 and 4 pool into 7, which then merges into the smallest kept cell
        let r = chisq_test(&[483, 510, 3, 4], &[0.483, 0.51, 0.003, 0.004], 1000, Level::P01).unwrap();
        assert_eq!(r.df, Some(1));
        assert!(matches!(chisq_test(&[1000], &[1.0], 1000, Level::P01), Err(Error::Degenerate(_))));
    }

    #[test]
    fn chisq_coin_calibration() {
        let mut rng = rng_from_seed(5);
        let trials = 100;
        let mut accepted = 0;
        for _ in 0..trials {
            let heads = (0..1_000_000).filter(|_| rng.random::<bool>()).count() as u64;
            let r = chisq_test(&[heads, 1_000_000 - heads], &[0.5, 0.5], 1_000_000, Level::P01).unwrap();
            accepted += r.accept as usize;
        }
        assert!(accepted >= 96, "{accepted}/{trials}");
    }

    #[test]
    fn two_sample_chisq() {
        let r = chisq_two_sample(&[100, 200, 300], &[100, 200, 300], Level::P01).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        let r = chisq_two_sample(&[100, 200, 300], &[300, 200, 100], Level::P01).unwrap();
        assert!(!r.accept);
    }

    #[test]
    fn quantiles() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        let (lo, hi) = bootstrap_median_ci(&(0..101).map(|k| k as f64).collect::<Vec<_>>(), 500, 0.95, 1);
        assert!(lo < 50.0 && hi > 50.0);
    }

    #[test]
    fn concentration_mean_stabilizes_at_small_n() {
        // standard error of the mean tail count shrinks below 1% of its value
        let p = ModelParams::new(0.5, 1.0, 1.0).unwrap();
        let per: Vec<_> = (0..400).map(|r| concentration_replicate(&p, &[100], 17, r).unwrap()).collect();
        let counts: Vec<f64> = per.iter().map(|s| s[0].census.marginal_tail(Side::In, 0) as f64).collect();
        let m = counts.iter().sum::<f64>() / counts.len() as f64;
        let var = counts.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (counts.len() - 1) as f64;
        assert!((var / counts.len() as f64).sqrt() / m < 0.01);
        let (rows, summ) = concentration_summarize(&[100], &per, 1).unwrap();
        assert_eq!(rows.len(), 400);
        assert!(summ[0].median_ratio > 0.0);
    }
}
