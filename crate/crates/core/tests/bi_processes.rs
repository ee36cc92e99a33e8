use palab_core::bi_sbi::{
    nb_pmf, scaled_limit_sample, simulate_bi, simulate_bi_shotnoise, simulate_sbi_pair, BIParams, SBIPairParams,
    DEFAULT_JUMP_BUDGET,
};
use palab_core::rng::replicate_rng;
use palab_core::stats_tests::{chisq_test, chisq_two_sample, gamma_cdf, ks_statistic, Level};

/// Transient pmf of a birth-immigration chain from its forward equations,
/// integrated by RK4 on the states `0..cap`.
fn forward_equation_pmf(lambda: f64, theta: f64, init: usize, t: f64, cap: usize) -> Vec<f64> {
    let rate = |k: usize| lambda * k as f64 + theta;
    let deriv = |p: &[f64]| -> Vec<f64> {
        (0..cap)
            .map(|k| {
                let inflow = if k > 0 { rate(k - 1) * p[k - 1] } else { 0.0 };
                inflow - rate(k) * p[k]
            })
            .collect()
    };
    let mut p = vec![0.0; cap];
    p[init] = 1.0;
    let steps = 20_000;
    let h = t / steps as f64;
    let axpy = |p: &[f64], k: &[f64], s: f64| -> Vec<f64> { p.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    for _ in 0..steps {
        let k1 = deriv(&p);
        let k2 = deriv(&axpy(&p, &k1, h / 2.0));
        let k3 = deriv(&axpy(&p, &k2, h / 2.0));
        let k4 = deriv(&axpy(&p, &k3, h));
        for i in 0..cap {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    p
}

fn histogram(values: &[u64], cap: usize) -> Vec<u64> {
    let mut h = vec![0u64; cap];
    for &v in values {
        if (v as usize) < cap {
            h[v as usize] += 1;
        }
    }
    h
}

#[test]
fn forward_equations_agree_with_negative_binomial_formula() {
    let (lambda, theta) = (1.3, 0.9);
    for &t in &[0.5, 1.0, 2.0] {
        let ode = forward_equation_pmf(lambda, theta, 0, t, 400);
        let q = (-lambda * t).exp();
        for k in 0..60 {
            let nb = nb_pmf(theta / lambda, q, k as u64).unwrap();
            assert!((ode[k] - nb).abs() < 1e-9, "t={t} k={k}");
        }
    }
}

#[test]
fn transient_law_is_negative_binomial() {
    let (lambda, theta) = (1.0, 1.5);
    let bp = BIParams::new(lambda, theta, 0).unwrap();
    let reps = 100_000;
    for (idx, &t) in [0.5, 1.0, 2.0].iter().enumerate() {
        let mut rng = replicate_rng(21, idx as u64);
        let zs: Vec<u64> = (0..reps).map(|_| simulate_bi(&bp, t, &mut rng, DEFAULT_JUMP_BUDGET).unwrap()).collect();
        let q = (-lambda * t).exp();
        let cap = 200;
        let probs: Vec<f64> = (0..cap).map(|k| nb_pmf(theta / lambda, q, k as u64).unwrap()).collect();
        let rep = chisq_test(&histogram(&zs, cap), &probs, reps as u64, Level::P01).unwrap();
        assert!(rep.accept, "t={t}: {rep:?}");
        let zeros = zs.iter().filter(|&&z| z == 0).count() as f64 / reps as f64;
        assert!((zeros - q.powf(theta / lambda)).abs() < 4.0 * (zeros * (1.0 - zeros) / reps as f64).sqrt());
    }
}

#[test]
fn yule_law_from_forward_equations() {
    let bp = BIParams::new(1.0, 0.0, 1).unwrap();
    let ode = forward_equation_pmf(1.0, 0.0, 1, 1.0, 300);
    for k in 1..40 {
        let closed = (-1f64).exp() * (1.0 - (-1f64).exp()).powi(k as i32 - 1);
        assert!((ode[k] - closed).abs() < 1e-10);
    }
    let reps = 100_000;
    let mut rng = replicate_rng(22, 0);
    let zs: Vec<u64> = (0..reps).map(|_| simulate_bi(&bp, 1.0, &mut rng, DEFAULT_JUMP_BUDGET).unwrap()).collect();
    let rep = chisq_test(&histogram(&zs, 300), &ode, reps as u64, Level::P01).unwrap();
    assert!(rep.accept, "{rep:?}");
}

#[test]
fn shot_noise_matches_sequential_simulation() {
    let bp = BIParams::new(0.8, 1.2, 0).unwrap();
    let reps = 100_000;
    let mut ra = replicate_rng(23, 0);
    let mut rb = replicate_rng(23, 1);
    let a: Vec<u64> = (0..reps).map(|_| simulate_bi(&bp, 1.0, &mut ra, DEFAULT_JUMP_BUDGET).unwrap()).collect();
    let b: Vec<u64> =
        (0..reps).map(|_| simulate_bi_shotnoise(&bp, 1.0, &mut rb, DEFAULT_JUMP_BUDGET).unwrap()).collect();
    let cap = 1 + *a.iter().chain(&b).max().unwrap() as usize;
    let rep = chisq_two_sample(&histogram(&a, cap), &histogram(&b, cap), Level::P01).unwrap();
    assert!(rep.accept, "{rep:?}");
}

#[test]
fn scaled_limit_is_gamma() {
    let reps = 10_000;
    let triples = [(1.0, 0.0, 1u64), (0.5, 1.0, 0), (2.0, 1.0, 3)];
    for (idx, &(lambda, theta, init)) in triples.iter().enumerate() {
        let bp = BIParams::new(lambda, theta, init).unwrap();
        let t = 1000f64.ln() / lambda;
        let mut rng = replicate_rng(24, idx as u64);
        let mut xs: Vec<f64> = (0..reps)
            .map(|_| (-lambda * t).exp() * simulate_bi(&bp, t, &mut rng, DEFAULT_JUMP_BUDGET).unwrap() as f64)
            .collect();
        xs.sort_by(f64::total_cmp);
        let shape = bp.limit_shape();
        let rep = ks_statistic(&xs, |x| gamma_cdf(shape, x.max(0.0)).unwrap(), Level::P01).unwrap();
        assert!(rep.accept, "({lambda}, {theta}, {init}): {rep:?}");
    }
}

#[test]
fn switched_pair_marginals_are_gamma() {
    let sp = SBIPairParams::new(0.5, 0.7, 1.4).unwrap();
    let t = sp.default_t_large(1000.0);
    let mut rng = replicate_rng(25, 0);
    let mut by_switch: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    for _ in 0..20_000 {
        let (x, y, j) = scaled_limit_sample(&sp, t, &mut rng, DEFAULT_JUMP_BUDGET).unwrap();
        by_switch[j as usize].push((x, y));
    }
    // J = 0 starts at (0, 1), J = 1 at (1, 0)
    let shapes = [(0.7, 2.4), (1.7, 1.4)];
    for j in 0..2 {
        let mut xs: Vec<f64> = by_switch[j].iter().map(|p| p.0).collect();
        let mut ys: Vec<f64> = by_switch[j].iter().map(|p| p.1).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let rx = ks_statistic(&xs, |x| gamma_cdf(shapes[j].0, x).unwrap(), Level::P01).unwrap();
        let ry = ks_statistic(&ys, |y| gamma_cdf(shapes[j].1, y).unwrap(), Level::P01).unwrap();
        assert!(rx.accept && ry.accept, "J={j}: {rx:?} {ry:?}");
    }
    let all: Vec<f64> = by_switch.iter().flatten().map(|p| p.0).collect();
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    let target = 0.5 * 0.7 + 0.5 * 1.7;
    let sd = (all.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / all.len() as f64).sqrt();
    assert!((mean - target).abs() < 4.0 * sd / (all.len() as f64).sqrt(), "{mean} vs {target}");
}

#[test]
fn switched_pair_components_are_independent() {
    let sp = SBIPairParams::new(0.4, 1.0, 1.0).unwrap();
    let mut rng = replicate_rng(26, 0);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for _ in 0..20_000 {
        let out = simulate_sbi_pair(&sp, 3.0, &mut rng, DEFAULT_JUMP_BUDGET).unwrap();
        if out.j == 0 && !out.in_jumps.is_empty() && !out.out_jumps.is_empty() {
            a.push(out.in_jumps[0]);
            b.push(out.out_jumps[0]);
        }
    }
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n;
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum::<f64>() / n;
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum::<f64>() / n;
    let r = cov / (va * vb).sqrt();
    assert!(r.abs() < 4.0 / n.sqrt(), "r={r} n={n}");
}
