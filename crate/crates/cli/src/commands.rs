//! One function per subcommand. Each writes its CSV files under the output
//! directory, prints a short report and returns the written paths.

use crate::error::{CliError, CliResult, Context};
use crate::experiments::{concentration_experiment, hill_experiment, par_map, pool, tail_masses};
use crate::output::{fmt_f, CsvFile, Metadata};
use crate::settings::Settings;
use palab_core::bi_sbi::{simulate_bi, simulate_bi_shotnoise, BIParams, DEFAULT_JUMP_BUDGET};
use palab_core::census::DegreeCensus;
use palab_core::embedding::run_embedding;
use palab_core::estimators::{kn_default, tail_empirical_1d, tail_empirical_2d_counts, TailNormalization};
use palab_core::limits::{joint_pmf, marginal_ccdf, marginal_pmf, LimitLawTable, TableOptions};
use palab_core::rng::replicate_rng;
use palab_core::stats_tests::{gamma_cdf, ks_statistic, Level};
use palab_core::{generate, Side};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Shared state of one invocation.
pub struct Ctx<'a> {
    pub command: &'static str,
    pub settings: &'a Settings,
    pub out_dir: PathBuf,
    pub pool: rayon::ThreadPool,
    pub report: Box<dyn Write + 'a>,
}

impl<'a> Ctx<'a> {
    pub fn new(command: &'static str, settings: &'a Settings, report: Box<dyn Write + 'a>) -> CliResult<Self> {
        let out_dir = PathBuf::from(settings.get_silent::<String>("out-dir")?.unwrap_or_else(|| ".".into()));
        let jobs = settings.get_silent::<usize>("jobs")?.unwrap_or(0);
        Ok(Self { command, settings, out_dir, pool: pool(jobs)?, report })
    }

    fn meta(&self, seed: Option<u64>, replicates: usize) -> Metadata {
        Metadata { command: self.command.into(), config: self.settings.echo(), master_seed: seed, replicates }
    }

    fn csv(&self, name: &str, meta: &Metadata, columns: &[&str]) -> CliResult<CsvFile> {
        CsvFile::create(&self.out_dir, name, meta, columns)
    }

    fn say(&mut self, line: impl AsRef<str>) -> CliResult<()> {
        writeln!(self.report, "{}", line.as_ref())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

pub fn cmd_generate(ctx: &mut Ctx) -> CliResult<Vec<PathBuf>> {
    let s = ctx.settings;
    let params = s.params()?;
    let n = s.count_or("n", 100_000)?;
    let seed = s.seed()?;
    let edges = s.flag("edges")?;
    if n == 0 {
        return Err(CliError::Config("n: must be at least 1".into()));
    }
    let mut g = palab_core::new_graph(params, seed);
    if edges {
        g = g.record_edges();
    }
    g.evolve(n).context("generate")?;
    let census = DegreeCensus::from_degrees(g.in_degrees(), g.out_degrees());
    let meta = ctx.meta(Some(seed), 0);
    let mut f = ctx.csv("generate_census.csv", &meta, &["in_degree", "out_degree", "count"])?;
    for (&(i, j), &c) in census.joint() {
        f.row(&[i.to_string(), j.to_string(), c.to_string()])?;
    }
    let mut paths = vec![f.finish()?];
    if edges {
        let path = ctx.out_dir.join("generate_edges.tsv");
        let file = std::fs::File::create(&path).map_err(io_err(&path))?;
        let mut w = std::io::BufWriter::new(file);
        g.write_edges(&mut w).map_err(io_err(&path))?;
        w.flush().map_err(io_err(&path))?;
        paths.push(path);
    }
    let nf = n as f64;
    for i in 0..2u32 {
        let frac = census.marginal_count(Side::In, i) as f64 / nf;
        ctx.say(format!("N_{i}^in/n = {frac:.6} (limit {:.6})", marginal_pmf(&params, Side::In, i as u64)))?;
    }
    Ok(paths)
}

pub fn cmd_embed(ctx: &mut Ctx) -> CliResult<Vec<PathBuf>> {
    let s = ctx.settings;
    let params = s.params()?;
    let n = s.count_or("n", 1000)?;
    let seed = s.seed()?;
    let run = run_embedding(&params, n, seed).context("embed")?;
    let meta = ctx.meta(Some(seed), 0);
    let mut f = ctx.csv("embed_run.csv", &meta, &[])?;
    let path = ctx.out_dir.join("embed_run.csv");
    run.write_csv(f.writer()).map_err(io_err(&path))?;
    let p = f.finish()?;
    ctx.say(format!("T_n = {:.6} after {n} births", run.birth_times.last().copied().unwrap_or(0.0)))?;
    Ok(vec![p])
}

pub fn cmd_bi_sim(ctx: &mut Ctx) -> CliResult<Vec<PathBuf>> {
    let s = ctx.settings;
    let lambda = s.get_or("lambda", 1.0)?;
    let theta = s.get_or("theta", 1.0)?;
    let init = s.get_or("init", 0u64)?;
    let bp = BIParams::new(lambda, theta, init).context("bi-sim parameters")?;
    let t = s.get_or("t", 1000f64.ln() / lambda)?;
    let reps = s.count_or("replicates", 10_000)?;
    let shot = s.flag("shotnoise")?;
    let budget = s.get_or("budget", DEFAULT_JUMP_BUDGET)?;
    let seed = s.seed()?;
    let values = par_map(&ctx.pool, reps, |r| {
        let mut rng = replicate_rng(seed, r as u64);
        let z = if shot {
            simulate_bi_shotnoise(&bp, t, &mut rng, budget)
        } else {
            simulate_bi(&bp, t, &mut rng, budget)
        };
        z.context(format!("bi-sim replicate {r}"))
    })?;
    let scale = (-lambda * t).exp();
    let meta = ctx.meta(Some(seed), reps);
    let mut f = ctx.csv("bi_sim.csv", &meta, &["replicate", "z", "scaled"])?;
    for (r, &z) in values.iter().enumerate() {
        f.row(&[r.to_string(), z.to_string(), fmt_f(scale * z as f64)])?;
    }
    let path = f.finish()?;
    if reps > 0 {
        let mut xs: Vec<f64> = values.iter().map(|&z| scale * z as f64).collect();
        xs.sort_by(f64::total_cmp);
        let shape = bp.limit_shape();
        let rep = ks_statistic(&xs, |x| gamma_cdf(shape, x.max(0.0)).unwrap_or(f64::NAN), Level::P01)
            .context("KS against the gamma limit")?;
        ctx.say(format!(
            "KS vs Gamma({shape}, 1): D = {:.5}, critical {:.5} at 0.01 -> {}",
            rep.statistic,
            rep.critical_value,
            if rep.accept { "accept" } else { "reject" }
        ))?;
    }
    Ok(vec![path])
}

pub fn cmd_limits(ctx: &mut Ctx) -> CliResult<Vec<PathBuf>> {
    let s = ctx.settings;
    let params = s.params()?;
    let table = s.flag("table")?;
    let tail_tol = s.get_or("tail-tol", 1e-10)?;
    let k_max: Option<u32> = s.get("k-max")?;
    let opts = TableOptions { tail_tol, k_max: if table { k_max } else { Some(0) }, ..Default::default() };
    let t = LimitLawTable::build(&params, &opts).context("limit law table")?;
    let meta = ctx.meta(None, 0);
    let mut f = ctx.csv("limits_marginal.csv", &meta, &[])?;
    let path = ctx.out_dir.join("limits_marginal.csv");
    t.write_marginal_csv(f.writer()).map_err(io_err(&path))?;
    let mut paths = vec![f.finish()?];
    let closure_in = t.pin.iter().sum::<f64>() + t.pin_ccdf.last().copied().unwrap_or(0.0);
    let closure_out = t.pout.iter().sum::<f64>() + t.pout_ccdf.last().copied().unwrap_or(0.0);
    ctx.say(format!("in: {} cells, sum + remainder = {closure_in:.12}", t.pin.len()))?;
    ctx.say(format!("out: {} cells, sum + remainder = {closure_out:.12}", t.pout.len()))?;
    if table {
        let mut f = ctx.csv("limits_joint.csv", &meta, &[])?;
        let path = ctx.out_dir.join("limits_joint.csv");
        t.write_joint_csv(f.writer()).map_err(io_err(&path))?;
        paths.push(f.finish()?);
        let k = t.k_max();
        let total: f64 = t.joint_map().values().sum();
        let mut worst: f64 = 0.0;
        for i in 0..k.min(20) {
            let row: f64 = (0..=k - i).filter_map(|j| t.joint(i, j)).sum();
            let col: f64 = (0..=k - i).filter_map(|j| t.joint(j, i)).sum();
            worst = worst.max((row - t.pin[i as usize]).abs()).max((col - t.pout[i as usize]).abs());
        }
        ctx.say(format!(
            "joint: i+j <= {k}, total mass {total:.12}, truncation bound {:.3e}, quadrature error {:.3e}",
            t.joint_truncation_bound, t.quadrature_tolerance
        ))?;
        ctx.say(format!("joint: worst marginalization error over i, j < 20: {worst:.3e}"))?;
    }
    let i: Option<u64> = s.get("i")?;
    let j: Option<u64> = s.get("j")?;
    if let Some(i) = i {
        let (p, c) = (marginal_pmf(&params, Side::In, i), marginal_ccdf(&params, Side::In, i));
        ctx.say(format!("p_in({i}) = {}  p_in(>{i}) = {}", fmt_f(p), fmt_f(c)))?;
    }
    if let Some(j) = j {
        let (p, c) = (marginal_pmf(&params, Side::Out, j), marginal_ccdf(&params, Side::Out, j));
        ctx.say(format!("p_out({j}) = {}  p_out(>{j}) = {}", fmt_f(p), fmt_f(c)))?;
    }
    if let (Some(i), Some(j)) = (i, j) {
        let v = joint_pmf(&params, i, j).context("joint pmf")?;
        ctx.say(format!("p({i},{j}) = {}", fmt_f(v)))?;
    }
    Ok(paths)
}

pub fn cmd_hill(ctx: &mut Ctx) -> CliResult<Vec<PathBuf>> {
    let s = ctx.settings;
    let params = s.params()?;
    let n_list = s.count_list_or("n", &[10_000, 100_000, 1_000_000])?;
    let reps = s.count_or("replicates", 50)?;
    let k = s.get_with("k", crate::settings::parse_count)?;
    let seed = s.seed()?;
    let (per, summary) = hill_experiment(&ctx.pool, &params, &n_list, reps, k, seed)?;
    let meta = ctx.meta(Some(seed), reps);
    let mut f = ctx.csv("hill_estimates.csv", &meta, &["n", "replicate", "side", "k", "H"])?;
    for (r, rows) in per.iter().enumerate() {
        for h in rows {
            f.row(&[h.n.to_string(), r.to_string(), h.side.to_string(), h.k.to_string(), fmt_f(h.estimate)])?;
        }
    }
    let p1 = f.finish()?;
    let cols = ["n", "side", "k", "target", "median", "q25", "q75", "median_abs_error"];
    let mut f = ctx.csv("hill_summary.csv", &meta, &cols)?;
    for h in &summary {
        f.row(&[
            h.n.to_string(),
            h.side.to_string(),
            h.k.to_string(),
            fmt_f(h.target),
            fmt_f(h.median),
            fmt_f(h.q25),
            fmt_f(h.q75),
            fmt_f(h.median_abs_error),
        ])?;
    }
    let p2 = f.finish()?;
    for h in &summary {
        ctx.say(format!(
            "n={:>9} {:<3} k={:<6} median H = {:.4} (IQR {:.4}..{:.4}) target {:.4}, median |err| {:.4}",
            h.n, h.side, h.k, h.median, h.q25, h.q75, h.target, h.median_abs_error
        ))?;
    }
    Ok(vec![p1, p2])
}

fn parse_normalization(s: &str) -> Result<TailNormalization, String> {
    match s.trim() {
        "scaling" => Ok(TailNormalization::Scaling),
        "order-statistic" => Ok(TailNormalization::OrderStatistic),
        other => Err(format!("expected scaling or order-statistic, got {other:?}")),
    }
}

pub fn cmd_tailmeasure(ctx: &mut Ctx) -> CliResult<Vec<PathBuf>> {
    let s = ctx.settings;
    let params = s.params()?;
    let n = s.count_or("n", 1_000_000)?;
    if n < 3 {
        return Err(CliError::Config("n: must be at least 3".into()));
    }
    let k = s.count_or("k", kn_default(n))?;
    let xs = s.float_list_or("grid-x", &[0.25, 0.5, 1.0, 2.0])?;
    let ys = s.float_list_or("grid-y", &[0.25, 0.5, 1.0, 2.0])?;
    let y1 = s.float_list_or("grid-1d", &[0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0])?;
    let norm_name = s.get_or("normalization", "scaling".to_string())?;
    let norm = parse_normalization(&norm_name)
        .map_err(|m| CliError::Config(format!("{}: normalization: {m}", s.origin("normalization"))))?;
    let seed = s.seed()?;
    let g = generate(params, n, seed).context("tailmeasure graph")?;
    let census = DegreeCensus::from_degrees(g.in_degrees(), g.out_degrees());
    let grid = tail_empirical_2d_counts(&census, &params, k, &xs, &ys).context("tail grid")?;
    let points: Vec<(f64, f64)> = grid.points.iter().map(|p| (p.x, p.y)).collect();
    let theory = tail_masses(&ctx.pool, &params, &points)?;
    let meta = ctx.meta(Some(seed), 0);
    let mut f = ctx.csv("tailmeasure_2d.csv", &meta, &["x", "y", "empirical_mass", "theoretical_mass"])?;
    for (p, t) in grid.points.iter().zip(&theory) {
        f.row(&[fmt_f(p.x), fmt_f(p.y), fmt_f(p.empirical_mass), fmt_f(*t)])?;
    }
    let p1 = f.finish()?;
    let mut f = ctx.csv("tailmeasure_1d.csv", &meta, &["side", "y", "empirical_mass", "limit_mass"])?;
    for side in Side::BOTH {
        let m = tail_empirical_1d(g.degrees(side), side, &params, k, norm).context("1-d tail measure")?;
        for &y in &y1 {
            f.row(&[side.to_string(), fmt_f(y), fmt_f(m.mass_above(y)), fmt_f(y.powf(-params.iota(side)))])?;
        }
    }
    let p2 = f.finish()?;
    ctx.say(format!("k = {k}, scales ({:.4}, {:.4})", grid.scale_x, grid.scale_y))?;
    for (p, t) in grid.points.iter().zip(&theory) {
        ctx.say(format!("({}, {}): empirical {:.5}  limit {:.5}", p.x, p.y, p.empirical_mass, t))?;
    }
    Ok(vec![p1, p2])
}

pub fn cmd_concentration(ctx: &mut Ctx) -> CliResult<Vec<PathBuf>> {
    let s = ctx.settings;
    let params = s.params()?;
    let n_list = s.count_list_or("n", &[10_000, 100_000, 1_000_000])?;
    let reps = s.count_or("replicates", 30)?;
    let seed = s.seed()?;
    let (rows, summary) = concentration_experiment(&ctx.pool, &params, &n_list, reps, seed)?;
    let meta = ctx.meta(Some(seed), reps);
    let cols = ["n", "replicate", "max_dev_joint", "max_dev_in", "max_dev_out", "ratio"];
    let mut f = ctx.csv("concentration_rows.csv", &meta, &cols)?;
    for r in &rows {
        f.row(&[
            r.n.to_string(),
            r.replicate.to_string(),
            fmt_f(r.max_dev_joint),
            fmt_f(r.max_dev_in),
            fmt_f(r.max_dev_out),
            fmt_f(r.ratio),
        ])?;
    }
    let p1 = f.finish()?;
    let cols = [
        "n",
        "replicates",
        "median_max_dev",
        "median_ratio",
        "ratio_ci_low",
        "ratio_ci_high",
        "median_ratio_in",
        "median_ratio_out",
        "mean_se_ratio",
    ];
    let mut f = ctx.csv("concentration_summary.csv", &meta, &cols)?;
    for c in &summary {
        f.row(&[
            c.n.to_string(),
            c.replicates.to_string(),
            fmt_f(c.median_max_dev),
            fmt_f(c.median_ratio),
            fmt_f(c.ratio_ci.0),
            fmt_f(c.ratio_ci.1),
            fmt_f(c.median_ratio_in),
            fmt_f(c.median_ratio_out),
            fmt_f(c.mean_se_ratio),
        ])?;
    }
    let p2 = f.finish()?;
    for c in &summary {
        ctx.say(format!(
            "n={:>9} median max-dev {:.1}, ratio {:.4} (95% CI {:.4}..{:.4})",
            c.n, c.median_max_dev, c.median_ratio, c.ratio_ci.0, c.ratio_ci.1
        ))?;
    }
    if let (Some(a), Some(b)) = (summary.first(), summary.last()) {
        ctx.say(format!("growth of median max-dev: {:.2}x", b.median_max_dev / a.median_max_dev))?;
    }
    Ok(vec![p1, p2])
}
