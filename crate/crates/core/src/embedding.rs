//! Continuous-time embedding of the degree process into a growing family of
//! switched birth-immigration pairs.
//!
//! Every existing pair carries an in-clock of rate `(c_in / s)(I + delta_in)`
//! and an out-clock of rate `(c_out / s)(O + delta_out)` with
//! `s = c_in + c_out`. Whenever a clock rings its coordinate grows by one and a
//! new pair is born: `(0, 1)` after an in-clock (switch `J = 0`), `(1, 0)` after
//! an out-clock (`J = 1`). Watching the pairs at the birth times reproduces the
//! law of the discrete graph.

use crate::error::{Error, Result};
use crate::pa_graph::{tracked_node_degrees, GraphState};
use crate::params::{ModelParams, Side};
use crate::rng::{replicate_rng, rng_from_seed, SimRng};
use rand_distr::{Distribution, Exp1};
use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRecord {
    pub birth_time: f64,
    /// `None` for the initial pair.
    pub switch: Option<u8>,
    pub i: u32,
    pub o: u32,
    pub next_in: f64,
    pub next_out: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Deadline {
    time: f64,
    node: u32,
    side: Side,
}

impl Eq for Deadline {}
impl PartialOrd for Deadline {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Deadline {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time.total_cmp(&other.time).then(self.node.cmp(&other.node)).then(self.side.cmp(&other.side))
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingState {
    params: ModelParams,
    pairs: Vec<PairRecord>,
    /// Pair whose clock rang at each birth (index 0 corresponds to pair 2).
    winners: Vec<u32>,
    clock: f64,
    queue: BinaryHeap<Reverse<Deadline>>,
    rng: SimRng,
    w_in: f64,
    w_out: f64,
}

impl EmbeddingState {
    pub fn new(params: ModelParams, rng: SimRng) -> Self {
        let s = params.c_in() + params.c_out();
        let mut st = Self {
            params,
            pairs: Vec::new(),
            winners: Vec::new(),
            clock: 0.0,
            queue: BinaryHeap::new(),
            rng,
            w_in: params.c_in() / s,
            w_out: params.c_out() / s,
        };
        st.add_pair(1, 1, None);
        st
    }

    fn rate(&self, side: Side, k: u32) -> f64 {
        match side {
            Side::In => self.w_in * (k as f64 + self.params.delta_in()),
            Side::Out => self.w_out * (k as f64 + self.params.delta_out()),
        }
    }

    fn deadline(&mut self, side: Side, k: u32) -> f64 {
        let e: f64 = Exp1.sample(&mut self.rng);
        self.clock + e / self.rate(side, k)
    }

    fn add_pair(&mut self, i: u32, o: u32, switch: Option<u8>) {
        let node = self.pairs.len() as u32;
        let next_in = self.deadline(Side::In, i);
        let next_out = self.deadline(Side::Out, o);
        self.pairs.push(PairRecord { birth_time: self.clock, switch, i, o, next_in, next_out });
        self.queue.push(Reverse(Deadline { time: next_in, node, side: Side::In }));
        self.queue.push(Reverse(Deadline { time: next_out, node, side: Side::Out }));
    }

    /// Advances to the next birth.
    pub fn fire(&mut self) {
        let Reverse(d) = self.queue.pop().expect("queue holds two clocks per pair");
        self.clock = d.time;
        let v = d.node as usize;
        match d.side {
            Side::In => {
                self.pairs[v].i += 1;
                let t = self.deadline(Side::In, self.pairs[v].i);
                self.pairs[v].next_in = t;
                self.queue.push(Reverse(Deadline { time: t, node: d.node, side: Side::In }));
                self.winners.push(d.node + 1);
                self.add_pair(0, 1, Some(0));
            }
            Side::Out => {
                self.pairs[v].o += 1;
                let t = self.deadline(Side::Out, self.pairs[v].o);
                self.pairs[v].next_out = t;
                self.queue.push(Reverse(Deadline { time: t, node: d.node, side: Side::Out }));
                self.winners.push(d.node + 1);
                self.add_pair(1, 0, Some(1));
            }
        }
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn pairs(&self) -> &[PairRecord] {
        &self.pairs
    }

    pub fn into_run(self) -> EmbeddingRun {
        EmbeddingRun {
            degrees: self.pairs.iter().map(|p| (p.i, p.o)).collect(),
            birth_times: self.pairs.iter().map(|p| p.birth_time).collect(),
            switches: self.pairs.iter().map(|p| p.switch).collect(),
            winners: self.winners,
        }
    }
}

/// State of the embedding at the `n`-th birth time.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRun {
    pub degrees: Vec<(u32, u32)>,
    pub birth_times: Vec<f64>,
    pub switches: Vec<Option<u8>>,
    /// `winners[k]` is the pair whose clock produced pair `k + 2`.
    pub winners: Vec<u32>,
}

impl EmbeddingRun {
    /// Writes `v,birth_time,switch,in_degree,out_degree,winner` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "v,birth_time,switch,in_degree,out_degree,winner")?;
        for v in 0..self.degrees.len() {
            let sw = self.switches[v].map(|j| j.to_string()).unwrap_or_default();
            let win = if v == 0 { String::new() } else { self.winners[v - 1].to_string() };
            writeln!(
                out,
                "{},{:.16e},{},{},{},{}",
                v + 1,
                self.birth_times[v],
                sw,
                self.degrees[v].0,
                self.degrees[v].1,
                win
            )?;
        }
        Ok(())
    }
}

pub fn run_embedding_with_rng(params: &ModelParams, n: usize, rng: SimRng) -> Result<EmbeddingRun> {
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    let mut st = EmbeddingState::new(*params, rng);
    while st.n() < n {
        st.fire();
    }
    Ok(st.into_run())
}

pub fn run_embedding(params: &ModelParams, n: usize, seed: u64) -> Result<EmbeddingRun> {
    run_embedding_with_rng(params, n, rng_from_seed(seed))
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpSummary {
    /// Index `k` of the gap `tau_{k+1} = T_{k+1} - T_k`.
    pub k: usize,
    pub mean_tau: f64,
    pub var_tau: f64,
    /// Exact `E[tau_{k+1}] = (c_in + c_out) / k`.
    pub target_mean: f64,
    pub frac_switch_one: f64,
    /// Sample correlation between `J_{k+1}` and `tau_{k+1}`.
    pub corr_switch_gap: f64,
}

/// Raw gaps and switches: `gaps[r][k-1] = tau_{k+1}`, `switches[r][k-1] = J_{k+1}`.
pub fn jump_samples(params: &ModelParams, n: usize, replicates: usize, seed: u64) -> Result<(Vec<Vec<f64>>, Vec<Vec<u8>>)> {
    let mut gaps = Vec::with_capacity(replicates);
    let mut sw = Vec::with_capacity(replicates);
    for r in 0..replicates as u64 {
        let run = run_embedding_with_rng(params, n, replicate_rng(seed, r))?;
        gaps.push(run.birth_times.windows(2).map(|w| w[1] - w[0]).collect());
        sw.push(run.switches[1..].iter().map(|s| s.expect("non-initial pair has a switch")).collect());
    }
    Ok((gaps, sw))
}

pub fn jump_statistics(params: &ModelParams, n: usize, replicates: usize, seed: u64) -> Result<Vec<JumpSummary>> {
    if n < 3 {
        return Err(Error::Argument("n must be at least 3".into()));
    }
    if replicates < 2 {
        return Err(Error::Argument("need at least two replicates".into()));
    }
    let (gaps, sw) = jump_samples(params, n, replicates, seed)?;
    let s = params.c_in() + params.c_out();
    let rf = replicates as f64;
    let mut out = Vec::with_capacity(n - 1);
    for idx in 0..n - 1 {
        let taus: Vec<f64> = gaps.iter().map(|g| g[idx]).collect();
        let js: Vec<f64> = sw.iter().map(|g| g[idx] as f64).collect();
        let mt = taus.iter().sum::<f64>() / rf;
        let mj = js.iter().sum::<f64>() / rf;
        let vt = taus.iter().map(|t| (t - mt).powi(2)).sum::<f64>() / (rf - 1.0);
        let vj = js.iter().map(|j| (j - mj).powi(2)).sum::<f64>() / (rf - 1.0);
        let cov = taus.iter().zip(&js).map(|(t, j)| (t - mt) * (j - mj)).sum::<f64>() / (rf - 1.0);
        let corr = if vt > 0.0 && vj > 0.0 { cov / (vt * vj).sqrt() } else { 0.0 };
        let k = idx + 1;
        out.push(JumpSummary {
            k,
            mean_tau: mt,
            var_tau: vt,
            target_mean: s / k as f64,
            frac_switch_one: mj,
            corr_switch_gap: corr,
        });
    }
    Ok(out)
}

/// Replicated `(D_v^in(n) / n^{c_in}, D_v^out(n) / n^{c_out})` for a fixed node.
///
/// Uses the exact single-node chain of [`tracked_node_degrees`], which has the
/// same law as the node's degrees in the full graph.
pub fn fixed_node_scaled(params: &ModelParams, v: usize, n: usize, replicates: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    if v == 0 || v > n {
        return Err(Error::Argument(format!("node {v} outside 1..={n}")));
    }
    let nf = n as f64;
    let (si, so) = (nf.powf(params.c_in()), nf.powf(params.c_out()));
    (0..replicates as u64)
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            let (i, o) = tracked_node_degrees(params, v, n, &mut rng)?;
            Ok((i as f64 / si, o as f64 / so))
        })
        .collect()
}

/// Whether `n` is large enough for the fixed-node scaling to be informative.
pub fn fixed_node_scale_ok(params: &ModelParams, n: usize) -> bool {
    (n as f64).powf(params.c_in().min(params.c_out())) >= 10.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxDegreeSample {
    pub x: f64,
    pub y: f64,
    /// Smallest node id attaining the maximum in-degree.
    pub argmax_in: u32,
    pub argmax_out: u32,
    /// Node 1's scaled pair in the same graph.
    pub node_one: (f64, f64),
}

fn argmax(d: &[u32]) -> (u32, u32) {
    let mut best = (0u32, 0usize);
    for (v, &x) in d.iter().enumerate() {
        if x > best.0 {
            best = (x, v);
        }
    }
    (best.0, best.1 as u32 + 1)
}

pub fn max_degree_replicate(params: &ModelParams, n: usize, master: u64, r: u64) -> Result<MaxDegreeSample> {
    let mut g = GraphState::with_rng(*params, replicate_rng(master, r));
    g.evolve(n)?;
    let nf = n as f64;
    let (si, so) = (nf.powf(params.c_in()), nf.powf(params.c_out()));
    let (mi, ai) = argmax(g.in_degrees());
    let (mo, ao) = argmax(g.out_degrees());
    let (i1, o1) = g.degree_pair(1)?;
    Ok(MaxDegreeSample {
        x: mi as f64 / si,
        y: mo as f64 / so,
        argmax_in: ai,
        argmax_out: ao,
        node_one: (i1 as f64 / si, o1 as f64 / so),
    })
}

/// Replicated scaled maximal degrees, each from a full graph of size `n`.
pub fn max_degree_scaled(params: &ModelParams, n: usize, replicates: usize, seed: u64) -> Result<Vec<MaxDegreeSample>> {
    (0..replicates as u64).map(|r| max_degree_replicate(params, n, seed, r)).collect()
}
