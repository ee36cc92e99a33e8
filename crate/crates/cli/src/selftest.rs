//! Fast internal consistency suite.

use crate::error::CliResult;
use palab_core::estimators::{hill_degrees, hill_via_measure, kn_default};
use palab_core::limits::{joint_pmf, marginal_ccdf, marginal_pmf, marginal_truncation, LimitLawTable, TableOptions};
use palab_core::{generate, ModelParams, Side};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn tol(name: &'static str, worst: f64, tol: f64) -> Self {
        Self { name, pass: worst <= tol, detail: format!("worst {worst:.3e} (tolerance {tol:.0e})") }
    }
}

fn param_sets() -> Vec<ModelParams> {
    vec![
        ModelParams::new(0.5, 1.0, 1.0).expect("valid"),
        ModelParams::new(0.3, 0.4, 2.5).expect("valid"),
        ModelParams::new(0.75, 2.0, 0.5).expect("valid"),
    ]
}

fn normalization_and_marginalization() -> CliResult<(Check, Check)> {
    let mut worst_norm: f64 = 0.0;
    let mut worst_marg: f64 = 0.0;
    for p in param_sets() {
        let t = LimitLawTable::build(&p, &TableOptions::default())
            .map_err(|e| crate::error::CliError::Numeric { context: format!("table for {p}"), source: e })?;
        worst_norm = worst_norm
            .max((t.pin.iter().sum::<f64>() - 1.0).abs())
            .max((t.pout.iter().sum::<f64>() - 1.0).abs())
            .max((t.joint_map().values().sum::<f64>() - 1.0).abs());
        let k = t.k_max();
        for i in 0..20u32 {
            let row: f64 = (0..=k - i).filter_map(|j| t.joint(i, j)).sum();
            let col: f64 = (0..=k - i).filter_map(|j| t.joint(j, i)).sum();
            worst_marg = worst_marg.max((row - t.pin[i as usize]).abs()).max((col - t.pout[i as usize]).abs());
        }
        // the single-cell quadrature path, independent of the table
        let row: f64 = (0..=k as u64 - 1).map(|j| joint_pmf(&p, 1, j).unwrap_or(f64::NAN)).sum();
        worst_marg = worst_marg.max((row - marginal_pmf(&p, Side::In, 1)).abs());
    }
    Ok((Check::tol("pmf normalization", worst_norm, 1e-6), Check::tol("joint marginalization", worst_marg, 1e-6)))
}

fn telescoping() -> Check {
    let mut worst: f64 = 0.0;
    for p in param_sets() {
        for side in Side::BOTH {
            let imax = marginal_truncation(&p, side, 1e-10, 10_000_000).min(20_000);
            let mut prev = 1.0;
            for i in 0..=imax {
                let c = marginal_ccdf(&p, side, i);
                worst = worst.max((prev - c - marginal_pmf(&p, side, i)).abs());
                prev = c;
            }
        }
    }
    Check::tol("ccdf telescoping", worst, 1e-10)
}

fn hill_identity() -> CliResult<Check> {
    let mut worst: f64 = 0.0;
    for (idx, p) in param_sets().into_iter().enumerate() {
        let n = 100_000;
        let g = generate(p, n, 1000 + idx as u64)
            .map_err(|e| crate::error::CliError::Numeric { context: "hill identity graph".into(), source: e })?;
        for side in Side::BOTH {
            let d: Vec<f64> = g.degrees(side).iter().map(|&x| x as f64).collect();
            for k in [10, 100, kn_default(n)] {
                let a = hill_degrees(g.degrees(side), k);
                let b = hill_via_measure(&d, k);
                worst = match (a, b) {
                    (Ok(a), Ok(b)) => worst.max((a - b).abs()),
                    _ => f64::INFINITY,
                };
            }
        }
    }
    Ok(Check::tol("Hill integral identity", worst, 1e-8))
}

fn read_dir_bytes(dir: &Path) -> std::io::Result<Vec<(PathBuf, Vec<u8>)>> {
    let mut files: Vec<(PathBuf, Vec<u8>)> = std::fs::read_dir(dir)?
        .map(|e| {
            let path = e?.path();
            let bytes = std::fs::read(&path)?;
            Ok((PathBuf::from(path.file_name().unwrap_or_default()), bytes))
        })
        .collect::<std::io::Result<_>>()?;
    files.sort();
    Ok(files)
}

fn determinism() -> Check {
    let base = std::env::temp_dir().join(format!("palab-selftest-{}", std::process::id()));
    let runs: [(&str, &[&str]); 3] = [
        ("generate", &["--n", "200000", "--seed", "3"]),
        ("hill", &["--n", "2000,8000", "--replicates", "6", "--seed", "4"]),
        ("bi-sim", &["--replicates", "500", "--theta", "0.5", "--seed", "5"]),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (cmd, args) in runs {
        let mut outs = Vec::new();
        for (tag, jobs) in [("a", "1"), ("b", "3")] {
            let dir = base.join(format!("{cmd}-{tag}"));
            let mut argv: Vec<String> = vec!["palab".into(), cmd.into()];
            argv.extend(args.iter().map(|s| s.to_string()));
            argv.extend(["--out-dir".into(), dir.display().to_string(), "--jobs".into(), jobs.into()]);
            let code = crate::cli::run(argv, &mut std::io::sink());
            outs.push((code, read_dir_bytes(&dir).unwrap_or_default()));
        }
        let same = outs[0].0 == 0 && outs[1].0 == 0 && !outs[0].1.is_empty() && outs[0].1 == outs[1].1;
        ok &= same;
        detail.push(format!("{cmd} {}", if same { "identical" } else { "DIFFERENT" }));
    }
    let _ = std::fs::remove_dir_all(&base);
    Check { name: "determinism", pass: ok, detail: detail.join(", ") }
}

pub fn run_selftest() -> CliResult<Vec<Check>> {
    let (norm, marg) = normalization_and_marginalization()?;
    Ok(vec![norm, telescoping(), marg, hill_identity()?, determinism()])
}
