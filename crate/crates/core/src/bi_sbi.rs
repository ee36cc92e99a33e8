//! Birth-immigration (BI) processes and switched pairs of them.
//!
//! A BI process with lifetime rate `lambda` and immigration rate `theta` jumps
//! `k -> k + 1` at rate `lambda * k + theta`. Started at 0 its value at time `t`
//! is negative binomial `NB(theta / lambda, e^{-lambda t})`, and `e^{-lambda t} Z(t)`
//! converges to a `Gamma(init + theta / lambda, 1)` variable.
//!
//! A switched pair draws `J ~ Bernoulli(p)` and runs two independent BI
//! processes: the in-coordinate with rates `(1-p)(k + delta1)` from `J`, the
//! out-coordinate with rates `p (k + delta2)` from `1 - J`. In the embedding,
//! `delta1` plays the role of `delta_in` and `delta2` the role of `delta_out`.

use crate::error::{Error, Result};
use crate::special::{ln_factorial, ln_gamma};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson};

/// Default cap on the number of jumps simulated for one trajectory.
pub const DEFAULT_JUMP_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BIParams {
    lambda: f64,
    theta: f64,
    init: u64,
}

impl BIParams {
    pub fn new(lambda: f64, theta: f64, init: u64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::ParameterDomain(format!("lambda must be positive, got {lambda}")));
        }
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::ParameterDomain(format!("theta must be nonnegative, got {theta}")));
        }
        if theta == 0.0 && init == 0 {
            return Err(Error::ParameterDomain("a process with theta = 0 must start at init >= 1".into()));
        }
        Ok(Self { lambda, theta, init })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn init(&self) -> u64 {
        self.init
    }

    /// Shape of the limiting Gamma law of `e^{-lambda t} Z(t)`.
    pub fn limit_shape(&self) -> f64 {
        self.init as f64 + self.theta / self.lambda
    }
}

fn run_bi<R: Rng + ?Sized>(
    rng: &mut R,
    lambda: f64,
    theta: f64,
    init: u64,
    t_end: f64,
    budget: u64,
    mut jumps: Option<&mut Vec<f64>>,
) -> Result<u64> {
    if !(t_end >= 0.0) {
        return Err(Error::Argument(format!("t_end must be nonnegative, got {t_end}")));
    }
    let mut k = init;
    let mut t = 0.0;
    let mut count = 0u64;
    loop {
        let rate = lambda * k as f64 + theta;
        if rate <= 0.0 {
            return Ok(k);
        }
        let hold: f64 = Exp1.sample(rng);
        t += hold / rate;
        if t > t_end {
            return Ok(k);
        }
        count += 1;
        if count > budget {
            return Err(Error::BudgetExceeded { budget, t_end });
        }
        k += 1;
        if let Some(j) = jumps.as_deref_mut() {
            j.push(t);
        }
    }
}

/// `Z(t_end)` by exact sequential holding times.
pub fn simulate_bi<R: Rng + ?Sized>(params: &BIParams, t_end: f64, rng: &mut R, budget: u64) -> Result<u64> {
    run_bi(rng, params.lambda, params.theta, params.init, t_end, budget, None)
}

/// Like [`simulate_bi`] but also returns the jump times.
pub fn simulate_bi_path<R: Rng + ?Sized>(
    params: &BIParams,
    t_end: f64,
    rng: &mut R,
    budget: u64,
) -> Result<(u64, Vec<f64>)> {
    let mut jumps = Vec::new();
    let z = run_bi(rng, params.lambda, params.theta, params.init, t_end, budget, Some(&mut jumps))?;
    Ok((z, jumps))
}

/// `Z(t_end)` from the shot-noise construction: immigrants arrive as a
/// Poisson process of rate `theta`, each founding an independent Yule process.
pub fn simulate_bi_shotnoise<R: Rng + ?Sized>(params: &BIParams, t_end: f64, rng: &mut R, budget: u64) -> Result<u64> {
    if params.init != 0 {
        return Err(Error::Argument("shot-noise construction needs init = 0".into()));
    }
    if !(t_end >= 0.0) {
        return Err(Error::Argument(format!("t_end must be nonnegative, got {t_end}")));
    }
    let mut total = 0u64;
    let mut arrival = 0.0;
    loop {
        let gap: f64 = Exp1.sample(rng);
        arrival += gap / params.theta;
        if arrival > t_end {
            return Ok(total);
        }
        let remaining = budget.saturating_sub(total);
        let family = run_bi(rng, params.lambda, 0.0, 1, t_end - arrival, remaining, None)
            .map_err(|_| Error::BudgetExceeded { budget, t_end })?;
        total += family;
    }
}

/// Log of the negative binomial pmf `Gamma(a+k)/(Gamma(a) k!) p^a (1-p)^k`.
pub fn nb_ln_pmf(a: f64, p: f64, k: u64) -> f64 {
    if p == 1.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let kf = k as f64;
    let coef = if k == 0 { 0.0 } else { ln_gamma(a + kf) - ln_gamma(a) - ln_factorial(k) };
    coef + a * p.ln() + kf * (-p).ln_1p()
}

/// Negative binomial pmf with generating function `p^a (1 - (1-p) s)^{-a}`.
pub fn nb_pmf(a: f64, p: f64, k: u64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Argument(format!("shape must be positive, got {a}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Argument(format!("success probability must lie in (0,1], got {p}")));
    }
    Ok(nb_ln_pmf(a, p, k).exp())
}

/// Draws `NB(a, p)` as a Poisson variable with Gamma-distributed mean.
pub fn sample_nb<R: Rng + ?Sized>(a: f64, p: f64, rng: &mut R) -> u64 {
    debug_assert!(a > 0.0 && p > 0.0 && p <= 1.0);
    if p >= 1.0 {
        return 0;
    }
    let scale = (1.0 - p) / p;
    let mean = Gamma::new(a, scale).expect("valid gamma").sample(rng);
    sample_poisson(mean, rng)
}

pub(crate) fn sample_poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if !(mean > 0.0) {
        return 0;
    }
    if mean > 1e15 {
        // beyond exact integer resolution the fluctuation is negligible
        return mean.round() as u64;
    }
    let x: f64 = Poisson::new(mean).expect("finite positive mean").sample(rng);
    x as u64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SBIPairParams {
    p: f64,
    delta1: f64,
    delta2: f64,
}

impl SBIPairParams {
    pub fn new(p: f64, delta1: f64, delta2: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ParameterDomain(format!("switch probability must lie in (0,1), got {p}")));
        }
        if !(delta1 > 0.0 && delta2 > 0.0 && delta1.is_finite() && delta2.is_finite()) {
            return Err(Error::ParameterDomain(format!("deltas must be positive, got {delta1}, {delta2}")));
        }
        Ok(Self { p, delta1, delta2 })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn delta1(&self) -> f64 {
        self.delta1
    }
    pub fn delta2(&self) -> f64 {
        self.delta2
    }

    /// In-coordinate process given the switch value.
    pub fn in_process(&self, j: u8) -> BIParams {
        let lam = 1.0 - self.p;
        BIParams { lambda: lam, theta: lam * self.delta1, init: j as u64 }
    }

    /// Out-coordinate process given the switch value.
    pub fn out_process(&self, j: u8) -> BIParams {
        BIParams { lambda: self.p, theta: self.p * self.delta2, init: 1 - j as u64 }
    }

    /// Horizon at which both coordinates have grown by a factor `growth`.
    pub fn default_t_large(&self, growth: f64) -> f64 {
        growth.ln() / self.p.min(1.0 - self.p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SbiOutcome {
    pub i: u64,
    pub o: u64,
    pub j: u8,
    pub in_jumps: Vec<f64>,
    pub out_jumps: Vec<f64>,
}

/// Simulates one switched pair to `t_end`, keeping the jump times.
pub fn simulate_sbi_pair<R: Rng + ?Sized>(
    params: &SBIPairParams,
    t_end: f64,
    rng: &mut R,
    budget: u64,
) -> Result<SbiOutcome> {
    let j = u8::from(rng.random::<f64>() < params.p);
    let ip = params.in_process(j);
    let op = params.out_process(j);
    let mut in_jumps = Vec::new();
    let mut out_jumps = Vec::new();
    let i = run_bi(rng, ip.lambda, ip.theta, ip.init, t_end, budget, Some(&mut in_jumps))?;
    let o = run_bi(rng, op.lambda, op.theta, op.init, t_end, budget, Some(&mut out_jumps))?;
    Ok(SbiOutcome { i, o, j, in_jumps, out_jumps })
}

/// One approximate draw `(e^{-(1-p)t} I(t), e^{-p t} O(t), J)` from the
/// scaled limit of a switched pair.
pub fn scaled_limit_sample<R: Rng + ?Sized>(
    params: &SBIPairParams,
    t_large: f64,
    rng: &mut R,
    budget: u64,
) -> Result<(f64, f64, u8)> {
    let j = u8::from(rng.random::<f64>() < params.p);
    let ip = params.in_process(j);
    let op = params.out_process(j);
    let i = run_bi(rng, ip.lambda, ip.theta, ip.init, t_large, budget, None)?;
    let o = run_bi(rng, op.lambda, op.theta, op.init, t_large, budget, None)?;
    let x = (-(1.0 - params.p) * t_large).exp() * i as f64;
    let y = (-params.p * t_large).exp() * o as f64;
    Ok((x, y, j))
}
