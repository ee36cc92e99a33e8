//! Limit laws of the degree distribution.
//!
//! * Marginal pmfs and ccdfs of the limiting in- and out-degree, in log-gamma
//!   space.
//! * The joint pmf `p_ij`, a mixture over `T ~ Exp(1)` of products of negative
//!   binomial pmfs with success probabilities `e^{-c_in T}` and `e^{-c_out T}`.
//! * Samplers for the joint limit pair and for the scaled degrees of a fixed
//!   node.
//! * The densities of the two components of the joint tail measure and the
//!   mass the limit measure `gamma V1 + alpha V2` gives to upper rectangles.

use crate::bi_sbi::sample_nb;
use crate::error::{Error, Result};
use crate::params::{ModelParams, Side};
use crate::quadrature::{gk21_rule, integrate_panels, QuadOptions};
use crate::special::{gamma_q, ln_gamma};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use std::collections::BTreeMap;
use std::io::{self, Write};

fn bracket(params: &ModelParams, side: Side) -> f64 {
    let c = params.c(side);
    let d = params.delta(side);
    let own = params.scheme_prob(side);
    let other = 1.0 - own;
    own * d / (1.0 + c * d) + other / c
}

/// Constant `C` in `P(D > i) ~ C i^{-iota}` for the limiting degree on `side`.
pub fn tail_constant(params: &ModelParams, side: Side) -> f64 {
    let c = params.c(side);
    let d = params.delta(side);
    let iota = params.iota(side);
    c * (ln_gamma(1.0 + d + iota) - ln_gamma(1.0 + d)).exp() * bracket(params, side)
}

/// Limiting probability that a uniformly chosen node has degree `i` on `side`.
pub fn marginal_pmf(params: &ModelParams, side: Side, i: u64) -> f64 {
    let c = params.c(side);
    let d = params.delta(side);
    if i == 0 {
        return params.scheme_prob(side) / (1.0 + c * d);
    }
    let iota = params.iota(side);
    let fi = i as f64;
    (ln_gamma(fi + d) - ln_gamma(fi + 1.0 + d + iota) + ln_gamma(1.0 + d + iota) - ln_gamma(1.0 + d)
        + bracket(params, side).ln())
    .exp()
}

/// Limiting probability that a uniformly chosen node has degree above `i`.
pub fn marginal_ccdf(params: &ModelParams, side: Side, i: u64) -> f64 {
    let c = params.c(side);
    let d = params.delta(side);
    let iota = params.iota(side);
    let fi = i as f64;
    c * (ln_gamma(fi + 1.0 + d) - ln_gamma(fi + 1.0 + d + iota) + ln_gamma(1.0 + d + iota) - ln_gamma(1.0 + d)
        + bracket(params, side).ln())
    .exp()
}

pub fn marginal_pmf_in(params: &ModelParams, i: u64) -> f64 {
    marginal_pmf(params, Side::In, i)
}
pub fn marginal_pmf_out(params: &ModelParams, j: u64) -> f64 {
    marginal_pmf(params, Side::Out, j)
}
pub fn marginal_ccdf_in(params: &ModelParams, i: u64) -> f64 {
    marginal_ccdf(params, Side::In, i)
}
pub fn marginal_ccdf_out(params: &ModelParams, j: u64) -> f64 {
    marginal_ccdf(params, Side::Out, j)
}

/// Smallest `i <= cap` with `P(D > i) < tol`, or `cap` if none.
pub fn marginal_truncation(params: &ModelParams, side: Side, tol: f64, cap: u64) -> u64 {
    if marginal_ccdf(params, side, 0) < tol {
        return 0;
    }
    let mut hi = 1u64;
    while hi < cap && marginal_ccdf(params, side, hi) >= tol {
        hi = (hi * 2).min(cap);
    }
    if marginal_ccdf(params, side, hi) >= tol {
        return cap;
    }
    let mut lo = hi / 2;
    // ccdf(lo) >= tol > ccdf(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if marginal_ccdf(params, side, mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Options for single-cell joint pmf evaluation.
#[derive(Debug, Clone, Copy)]
pub struct JointOptions {
    pub quad: QuadOptions,
    /// Upper end of the `t` range; the neglected mass is below `e^{-horizon}`.
    pub horizon: f64,
    pub panel_width: f64,
}

impl Default for JointOptions {
    fn default() -> Self {
        Self { quad: QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 4000 }, horizon: 40.0, panel_width: 2.0 }
    }
}

fn ln_nb_coef(a: f64, k: u64) -> f64 {
    if k == 0 {
        0.0
    } else {
        ln_gamma(a + k as f64) - ln_gamma(a) - ln_gamma(k as f64 + 1.0)
    }
}

/// `ln nb(a, e^{-c t}; k)` given the precomputed coefficient.
fn ln_nb_at(coef: f64, a: f64, c: f64, t: f64, k: u64) -> f64 {
    let base = coef - a * c * t;
    if k == 0 {
        base
    } else {
        base + k as f64 * (-(-c * t).exp_m1()).ln()
    }
}

struct JointCell {
    i: u64,
    j: u64,
    alpha: f64,
    gamma: f64,
    c_in: f64,
    c_out: f64,
    d_in: f64,
    d_out: f64,
    coef_a: Option<(f64, f64)>,
    coef_b: Option<(f64, f64)>,
}

impl JointCell {
    fn new(params: &ModelParams, i: u64, j: u64) -> Self {
        let (d_in, d_out) = (params.delta_in(), params.delta_out());
        let coef_a = (j >= 1).then(|| (ln_nb_coef(d_in, i), ln_nb_coef(1.0 + d_out, j - 1)));
        let coef_b = (i >= 1).then(|| (ln_nb_coef(1.0 + d_in, i - 1), ln_nb_coef(d_out, j)));
        Self {
            i,
            j,
            alpha: params.alpha(),
            gamma: params.gamma(),
            c_in: params.c_in(),
            c_out: params.c_out(),
            d_in,
            d_out,
            coef_a,
            coef_b,
        }
    }

    fn integrand(&self, t: f64) -> f64 {
        let mut s = 0.0;
        if let Some((ca, cb)) = self.coef_a {
            let l = ln_nb_at(ca, self.d_in, self.c_in, t, self.i) + ln_nb_at(cb, 1.0 + self.d_out, self.c_out, t, self.j - 1);
            s += self.alpha * l.exp();
        }
        if let Some((ca, cb)) = self.coef_b {
            let l = ln_nb_at(ca, 1.0 + self.d_in, self.c_in, t, self.i - 1) + ln_nb_at(cb, self.d_out, self.c_out, t, self.j);
            s += self.gamma * l.exp();
        }
        (-t).exp() * s
    }
}

fn panel_breaks(horizon: f64, width: f64) -> Vec<f64> {
    let panels = (horizon / width).ceil().max(1.0) as usize;
    (0..=panels).map(|k| (k as f64 * width).min(horizon)).collect()
}

/// Joint limit pmf `p_ij` with the quadrature error estimate.
pub fn joint_pmf_with(params: &ModelParams, i: u64, j: u64, opts: &JointOptions) -> Result<(f64, f64)> {
    if i == 0 && j == 0 {
        return Ok((0.0, 0.0));
    }
    let cell = JointCell::new(params, i, j);
    let r = integrate_panels(&mut |t| cell.integrand(t), &panel_breaks(opts.horizon, opts.panel_width), opts.quad)?;
    Ok((r.value, r.error + (-opts.horizon).exp()))
}

/// Joint limit pmf `p_ij` of the (in, out) degree of a uniformly chosen node.
pub fn joint_pmf(params: &ModelParams, i: u64, j: u64) -> Result<f64> {
    joint_pmf_with(params, i, j, &JointOptions::default()).map(|r| r.0)
}

/// Construction options for [`LimitLawTable`].
#[derive(Debug, Clone, Copy)]
pub struct TableOptions {
    /// Marginal tables run until the ccdf drops below this.
    pub tail_tol: f64,
    pub max_marginal_index: u64,
    /// Joint cells kept: `i + j <= k_max`. `None` picks the smallest value whose
    /// truncation bound is below `joint_tail_tol`, capped at `k_max_cap`.
    pub k_max: Option<u32>,
    pub joint_tail_tol: f64,
    pub k_max_cap: u32,
    pub quadrature_tolerance: f64,
    pub horizon: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            tail_tol: 1e-10,
            max_marginal_index: 10_000_000,
            k_max: None,
            joint_tail_tol: 1e-7,
            k_max_cap: 1000,
            quadrature_tolerance: 1e-10,
            horizon: 40.0,
        }
    }
}

/// Precomputed limit laws for one parameter set.
#[derive(Debug, Clone)]
pub struct LimitLawTable {
    params: ModelParams,
    pub pin: Vec<f64>,
    pub pout: Vec<f64>,
    pub pin_ccdf: Vec<f64>,
    pub pout_ccdf: Vec<f64>,
    k_max: u32,
    joint: Vec<f64>,
    /// Largest per-cell quadrature error estimate.
    pub quadrature_tolerance: f64,
    /// Upper bound on the joint mass outside `i + j <= k_max`.
    pub joint_truncation_bound: f64,
}

fn row_start(i: usize, k: usize) -> usize {
    // rows r < i hold k + 1 - r entries each
    i * (k + 1) - i * i.saturating_sub(1) / 2
}

impl LimitLawTable {
    pub fn build(params: &ModelParams, opts: &TableOptions) -> Result<Self> {
        let imax = marginal_truncation(params, Side::In, opts.tail_tol, opts.max_marginal_index);
        let jmax = marginal_truncation(params, Side::Out, opts.tail_tol, opts.max_marginal_index);
        let pin: Vec<f64> = (0..=imax).map(|i| marginal_pmf(params, Side::In, i)).collect();
        let pout: Vec<f64> = (0..=jmax).map(|j| marginal_pmf(params, Side::Out, j)).collect();
        let pin_ccdf: Vec<f64> = (0..=imax).map(|i| marginal_ccdf(params, Side::In, i)).collect();
        let pout_ccdf: Vec<f64> = (0..=jmax).map(|j| marginal_ccdf(params, Side::Out, j)).collect();

        let bound = |k: u32| -> f64 {
            let h = (k / 2) as u64;
            marginal_ccdf(params, Side::In, h) + marginal_ccdf(params, Side::Out, h)
        };
        let k_max = match opts.k_max {
            Some(k) => k,
            None => {
                let mut k = 2u32;
                while k < opts.k_max_cap && bound(k) >= opts.joint_tail_tol {
                    k += 2;
                }
                k.min(opts.k_max_cap)
            }
        };
        let mut width = 0.25;
        loop {
            let (joint, err) = joint_table(params, k_max, opts.horizon, width);
            if err <= opts.quadrature_tolerance || width < 0.01 {
                if err > opts.quadrature_tolerance {
                    return Err(Error::Quadrature { achieved: err, requested: opts.quadrature_tolerance });
                }
                return Ok(Self {
                    params: *params,
                    pin,
                    pout,
                    pin_ccdf,
                    pout_ccdf,
                    k_max,
                    joint,
                    quadrature_tolerance: err,
                    joint_truncation_bound: bound(k_max),
                });
            }
            width /= 2.0;
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// `p_ij` if `i + j <= k_max`.
    pub fn joint(&self, i: u32, j: u32) -> Option<f64> {
        (i + j <= self.k_max).then(|| self.joint[row_start(i as usize, self.k_max as usize) + j as usize])
    }

    /// All stored cells as a sorted map.
    pub fn joint_map(&self) -> BTreeMap<(u32, u32), f64> {
        let mut m = BTreeMap::new();
        for i in 0..=self.k_max {
            for j in 0..=(self.k_max - i) {
                m.insert((i, j), self.joint(i, j).expect("in range"));
            }
        }
        m
    }

    pub fn write_marginal_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "side,i,p,p_ccdf")?;
        for (side, p, cc) in [(Side::In, &self.pin, &self.pin_ccdf), (Side::Out, &self.pout, &self.pout_ccdf)] {
            for (i, (a, b)) in p.iter().zip(cc.iter()).enumerate() {
                writeln!(out, "{side},{i},{a:.16e},{b:.16e}")?;
            }
        }
        Ok(())
    }

    pub fn write_joint_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "i,j,p_ij")?;
        for i in 0..=self.k_max {
            for j in 0..=(self.k_max - i) {
                writeln!(out, "{i},{j},{:.16e}", self.joint(i, j).expect("in range"))?;
            }
        }
        Ok(())
    }
}

/// Fixed-node composite Gauss–Kronrod over `t` for every cell at once.
/// Returns the triangular table and the largest Kronrod-vs-Gauss discrepancy.
fn joint_table(params: &ModelParams, k_max: u32, horizon: f64, width: f64) -> (Vec<f64>, f64) {
    let k = k_max as usize;
    let cells = (k + 1) * (k + 2) / 2;
    let mut kron = vec![0.0f64; cells];
    let mut gauss = vec![0.0f64; cells];
    let (alpha, gamma) = (params.alpha(), params.gamma());
    let (c_in, c_out) = (params.c_in(), params.c_out());
    let (d_in, d_out) = (params.delta_in(), params.delta_out());
    let mut a_v = vec![0.0; k + 1];
    let mut b_v = vec![0.0; k + 1];
    let mut c_v = vec![0.0; k + 1];
    let mut d_v = vec![0.0; k + 1];
    let nodes = gk21_rule();
    for brk in panel_breaks(horizon, width).windows(2) {
        let (lo, hi) = (brk[0], brk[1]);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for &(x, wk, wg) in &nodes {
            let t = mid + half * x;
            let (p_in, p_out) = ((-c_in * t).exp(), (-c_out * t).exp());
            nb_vector(d_in, p_in, &mut a_v, 0);
            nb_vector(1.0 + d_out, p_out, &mut b_v, 1);
            nb_vector(1.0 + d_in, p_in, &mut c_v, 1);
            nb_vector(d_out, p_out, &mut d_v, 0);
            let et = (-t).exp() * half;
            let (fk, fg) = (wk * et, wg * et);
            let mut idx = 0;
            for i in 0..=k {
                let (ai, ci) = (alpha * a_v[i], gamma * c_v[i]);
                for j in 0..=(k - i) {
                    let v = ai * b_v[j] + ci * d_v[j];
                    kron[idx] += fk * v;
                    gauss[idx] += fg * v;
                    idx += 1;
                }
            }
        }
    }
    let err = kron.iter().zip(&gauss).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    (kron, err)
}

/// Fills `out[k] = nb(a, p; k - shift)` (zero for `k < shift`).
fn nb_vector(a: f64, p: f64, out: &mut [f64], shift: usize) {
    for v in out.iter_mut().take(shift) {
        *v = 0.0;
    }
    if out.len() <= shift {
        return;
    }
    let q = 1.0 - p;
    let mut cur = p.powf(a);
    out[shift] = cur;
    for m in 0..out.len() - shift - 1 {
        cur *= (a + m as f64) / (m as f64 + 1.0) * q;
        out[shift + m + 1] = cur;
    }
}

/// Draws `(I, O)` from the joint limit law.
pub fn sample_limit_pair<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> (u64, u64) {
    let t: f64 = Exp1.sample(rng);
    let p_in = (-params.c_in() * t).exp();
    let p_out = (-params.c_out() * t).exp();
    if rng.random::<f64>() < params.gamma() {
        (1 + sample_nb(1.0 + params.delta_in(), p_in, rng), sample_nb(params.delta_out(), p_out, rng))
    } else {
        (sample_nb(params.delta_in(), p_in, rng), 1 + sample_nb(1.0 + params.delta_out(), p_out, rng))
    }
}

fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, 1.0).expect("positive shape").sample(rng)
}

/// Draws the limit of `(D_v^in(n) / n^{c_in}, D_v^out(n) / n^{c_out})` as
/// `(sigma_in e^{-c_in T_v / s} / W^{c_in}, sigma_out e^{-c_out T_v / s} / W^{c_out})`
/// with `W ~ Exp(1)`, `T_v` a sum of independent `Exp(k / s)` for
/// `k < v`, `s = c_in + c_out`, and `(sigma_in, sigma_out)` independent Gammas
/// whose shapes depend on the node's initial degrees.
pub fn sample_fixed_node_limit<R: Rng + ?Sized>(params: &ModelParams, v: usize, rng: &mut R) -> Result<(f64, f64)> {
    if v == 0 {
        return Err(Error::Argument("node ids start at 1".into()));
    }
    let (c_in, c_out) = (params.c_in(), params.c_out());
    let s = c_in + c_out;
    let w: f64 = Exp1.sample(rng);
    let mut t_v = 0.0;
    for k in 1..v {
        let e: f64 = Exp1.sample(rng);
        t_v += e * s / k as f64;
    }
    let (a_in, a_out) = if v == 1 {
        (1.0 + params.delta_in(), 1.0 + params.delta_out())
    } else if rng.random::<f64>() < params.alpha() {
        (params.delta_in(), 1.0 + params.delta_out())
    } else {
        (1.0 + params.delta_in(), params.delta_out())
    };
    let si = sample_gamma(a_in, rng);
    let so = sample_gamma(a_out, rng);
    Ok((si * (-c_in * t_v / s).exp() / w.powf(c_in), so * (-c_out * t_v / s).exp() / w.powf(c_out)))
}

/// Which component of the joint tail measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailBranch {
    /// Weight `gamma`: in-coordinate shape `1 + delta_in`, out-coordinate shape `delta_out`.
    One,
    /// Weight `alpha`: in-coordinate shape `delta_in`, out-coordinate shape `1 + delta_out`.
    Two,
}

/// `ln` of `int_0^inf z^{-p} exp(-x/z - y/z^a) dz`, by the substitution
/// `z = e^u` around the mode of the log-integrand.
pub fn ln_z_integral(p: f64, x: f64, y: f64, a: f64) -> Result<f64> {
    if !(p > 1.0) || x < 0.0 || y < 0.0 || (x == 0.0 && y == 0.0) {
        return Err(Error::Argument(format!("z-integral needs p > 1 and (x, y) != 0, got p={p} x={x} y={y}")));
    }
    let phi = |u: f64| -(p - 1.0) * u - x * (-u).exp() - y * (-a * u).exp();
    let dphi = |u: f64| -(p - 1.0) + x * (-u).exp() + a * y * (-a * u).exp();
    let mut lo = -1.0;
    while dphi(lo) <= 0.0 {
        lo -= 1.0 + lo.abs();
    }
    let mut hi = 1.0;
    while dphi(hi) >= 0.0 {
        hi += 1.0 + hi.abs();
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dphi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * (1.0 + mid.abs()) {
            break;
        }
    }
    let mode = 0.5 * (lo + hi);
    let peak = phi(mode);
    let drop = 60.0;
    let mut left = mode;
    while phi(left) - peak > -drop {
        left -= 1.0;
    }
    let mut right = mode;
    while phi(right) - peak > -drop {
        right += 1.0;
    }
    let breaks: Vec<f64> = {
        let n = ((right - left) / 1.0).round() as usize;
        (0..=n).map(|k| left + k as f64).collect()
    };
    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-12, max_intervals: 2000 };
    let r = integrate_panels(&mut |u| (phi(u) - peak).exp(), &breaks, opts)?;
    Ok(peak + r.value.ln())
}

/// Lebesgue density of one component of the joint tail measure at `(x, y)`.
pub fn tail_density(params: &ModelParams, branch: TailBranch, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Argument(format!("density needs x, y > 0, got ({x}, {y})")));
    }
    Ok(ln_tail_density(params, branch, x, y)?.exp())
}

fn ln_tail_density(params: &ModelParams, branch: TailBranch, x: f64, y: f64) -> Result<f64> {
    let c = params.c_in();
    let a = params.c_out() / c;
    let iota = 1.0 / c;
    let (di, dout) = (params.delta_in(), params.delta_out());
    let (pref, p) = match branch {
        TailBranch::One => (
            di * x.ln() + (dout - 1.0) * y.ln() - c.ln() - ln_gamma(1.0 + di) - ln_gamma(dout),
            2.0 + iota + di + a * dout,
        ),
        TailBranch::Two => (
            (di - 1.0) * x.ln() + dout * y.ln() - c.ln() - ln_gamma(di) - ln_gamma(1.0 + dout),
            1.0 + a + iota + di + a * dout,
        ),
    };
    Ok(pref + ln_z_integral(p, x, y, a)?)
}

/// Density of the limit measure `gamma V1 + alpha V2`.
pub fn limit_tail_density(params: &ModelParams, x: f64, y: f64) -> Result<f64> {
    Ok(params.gamma() * tail_density(params, TailBranch::One, x, y)?
        + params.alpha() * tail_density(params, TailBranch::Two, x, y)?)
}

/// Integrates `f` over `(lo, inf)`.
///
/// Above `max(lo, 1)` the substitution `u = e^s` turns the power-law tail into
/// an exponentially decaying, smooth integrand, truncated at `s = span`. When
/// `lo = 0` the piece `(0, 1]` uses `u = r^power` to absorb a `u^{delta - 1}`
/// singularity at the origin.
fn integrate_half_line<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, power: f64, span: f64, opts: QuadOptions) -> Result<f64> {
    let mut failure: Option<Error> = None;
    let mut eval = |u: f64, jac: f64| -> f64 {
        if failure.is_some() || jac == 0.0 || !u.is_finite() {
            return 0.0;
        }
        match f(u) {
            Ok(v) => v * jac,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let start = lo.max(1.0);
    let ln_start = start.ln();
    let n = (span / 3.0).ceil() as usize;
    let breaks: Vec<f64> = (0..=n).map(|k| k as f64 * span / n as f64).collect();
    let mut total = integrate_panels(
        &mut |s: f64| {
            let u = (ln_start + s).exp();
            eval(u, u)
        },
        &breaks,
        opts,
    )?
    .value;
    if lo < 1.0 {
        total += if lo > 0.0 {
            let (a, b) = (lo.ln(), 0.0);
            integrate_panels(
                &mut |s: f64| {
                    let u = s.exp();
                    eval(u, u)
                },
                &[a, 0.5 * (a + b), b],
                opts,
            )?
            .value
        } else {
            let m = power;
            integrate_panels(
                &mut |r: f64| if r <= 0.0 { 0.0 } else { eval(r.powf(m), m * r.powf(m - 1.0)) },
                &[0.0, 0.5, 0.8, 0.9, 1.0],
                opts,
            )?
            .value
        };
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Mass of `gamma V1 + alpha V2` on `(x, inf] x (y, inf]`, by two-dimensional
/// quadrature of the densities. Needs `x > 0` or `y > 0`.
pub fn tail_region_mass(params: &ModelParams, x: f64, y: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || (x == 0.0 && y == 0.0) {
        return Err(Error::Argument(format!("rectangle corner ({x}, {y}) must be nonnegative and away from the origin")));
    }
    let outer = QuadOptions { abs_tol: 1e-9, rel_tol: 1e-8, max_intervals: 400 };
    let inner = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-9, max_intervals: 400 };
    let p_x = (2.0 / params.delta_in()).max(1.0);
    let p_y = (2.0 / params.delta_out()).max(1.0);
    let span = 36.0 / params.iota_in().min(params.iota_out());
    integrate_half_line(
        |u| integrate_half_line(|v| limit_tail_density(params, u, v), y, p_y, span, inner),
        x,
        p_x,
        span,
        outer,
    )
}

/// Mass of `gamma V1 + alpha V2` on `(x, inf] x (y, inf]` from its mixture
/// representation: the limit measure is the law of `(z G1, z^a G2)` under
/// `z` with density `iota z^{-iota-1} / (c_in iota)`, with Gamma coordinates
/// whose shapes depend on the branch. Independent of [`tail_region_mass`].
pub fn tail_region_mass_mixture(params: &ModelParams, x: f64, y: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || (x == 0.0 && y == 0.0) {
        return Err(Error::Argument(format!("rectangle corner ({x}, {y}) must be nonnegative and away from the origin")));
    }
    let c = params.c_in();
    let a = params.c_out() / c;
    let iota = 1.0 / c;
    let (al, ga) = (params.alpha(), params.gamma());
    let (di, dout) = (params.delta_in(), params.delta_out());
    let surv = |shape: f64, s: f64| if s <= 0.0 { 1.0 } else { gamma_q(shape, s) };
    // in u = ln z
    let f = |u: f64| {
        let z = u.exp();
        let (sx, sy) = (x / z, y / z.powf(a));
        let mix = al * surv(di, sx) * surv(1.0 + dout, sy) + ga * surv(1.0 + di, sx) * surv(dout, sy);
        (1.0 / c) * (-iota * u).exp() * mix
    };
    // below u_lo one survival factor is below Q(shape, e^8); above u_hi the
    // weight e^{-iota u} is negligible
    let bound_x = if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
    let bound_y = if y > 0.0 { y.ln() / a } else { f64::NEG_INFINITY };
    let u_lo = (bound_x - 8.0).max(if y > 0.0 { (y.ln() - 8.0) / a } else { f64::NEG_INFINITY });
    let u_hi = bound_x.max(bound_y) + 45.0 / iota;
    let n = ((u_hi - u_lo) / 0.5).ceil() as usize;
    let breaks: Vec<f64> = (0..=n).map(|k| u_lo + k as f64 * (u_hi - u_lo) / n as f64).collect();
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 4000 };
    let r = integrate_panels(&mut |u| f(u), &breaks, opts)?;
    Ok(r.value)
}
