//! Sequential generator of the directed preferential attachment graph.
//!
//! The graph is stored as degree vectors plus two append-only "ballot" arrays
//! holding one node id per unit of in- (resp. out-) degree. Choosing a node with
//! probability `(D_v + delta) / ((1 + delta) n)` then splits into a uniform
//! ballot draw (mass `n`) and a uniform node draw (mass `n * delta`), which is
//! exact for any real `delta > 0`.
//!
//! Node ids are 1-based in the public API.

use crate::error::{Error, Result};
use crate::params::{ModelParams, Side};
use crate::rng::{rng_from_seed, SimRng};
use crate::special::ln_gamma;
use rand::Rng;
use std::io::{self, Write};

/// What happened in the most recent [`GraphState::step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOutcome {
    /// `Side::In` for the alpha scheme (new node points at `target`),
    /// `Side::Out` for the gamma scheme (`target` points at the new node).
    pub scheme: Side,
    pub target: u32,
    pub newborn: u32,
}

#[derive(Debug, Clone)]
pub struct GraphState {
    params: ModelParams,
    in_deg: Vec<u32>,
    out_deg: Vec<u32>,
    in_ballot: Vec<u32>,
    out_ballot: Vec<u32>,
    edges: Option<Vec<(u32, u32)>>,
    alpha_steps: u64,
    last: Option<StepOutcome>,
    rng: SimRng,
    p_ballot_in: f64,
    p_ballot_out: f64,
}

/// Starts a graph with a single node carrying a self-loop.
pub fn new_graph(params: ModelParams, seed: u64) -> GraphState {
    GraphState::with_rng(params, rng_from_seed(seed))
}

impl GraphState {
    pub fn with_rng(params: ModelParams, rng: SimRng) -> Self {
        Self {
            params,
            in_deg: vec![1],
            out_deg: vec![1],
            in_ballot: vec![0],
            out_ballot: vec![0],
            edges: None,
            alpha_steps: 0,
            last: None,
            rng,
            p_ballot_in: 1.0 / (1.0 + params.delta_in()),
            p_ballot_out: 1.0 / (1.0 + params.delta_out()),
        }
    }

    /// Builds a state with prescribed degree pairs (node 1 first).
    ///
    /// Degrees must each sum to the node count. Ballot order is canonical
    /// (node order), which does not affect the law of later steps.
    pub fn from_degrees(params: ModelParams, degrees: &[(u32, u32)], seed: u64) -> Result<Self> {
        let n = degrees.len();
        if n == 0 {
            return Err(Error::Argument("at least one node required".into()));
        }
        let sum_in: u64 = degrees.iter().map(|d| d.0 as u64).sum();
        let sum_out: u64 = degrees.iter().map(|d| d.1 as u64).sum();
        if sum_in != n as u64 || sum_out != n as u64 {
            return Err(Error::Argument(format!(
                "degree sums ({sum_in}, {sum_out}) must both equal the node count {n}"
            )));
        }
        let mut g = Self::with_rng(params, rng_from_seed(seed));
        g.in_deg = degrees.iter().map(|d| d.0).collect();
        g.out_deg = degrees.iter().map(|d| d.1).collect();
        g.in_ballot.clear();
        g.out_ballot.clear();
        for (v, &(i, o)) in degrees.iter().enumerate() {
            g.in_ballot.extend(std::iter::repeat_n(v as u32, i as usize));
            g.out_ballot.extend(std::iter::repeat_n(v as u32, o as usize));
        }
        Ok(g)
    }

    /// Turns on edge recording. Must be called before the first step.
    pub fn record_edges(mut self) -> Self {
        assert_eq!(self.n(), 1, "edge recording must start from the initial graph");
        self.edges = Some(vec![(1, 1)]);
        self
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.in_deg.len()
    }

    pub fn in_degrees(&self) -> &[u32] {
        &self.in_deg
    }

    pub fn out_degrees(&self) -> &[u32] {
        &self.out_deg
    }

    pub fn degrees(&self, side: Side) -> &[u32] {
        match side {
            Side::In => &self.in_deg,
            Side::Out => &self.out_deg,
        }
    }

    /// Ballot arrays with 1-based node ids.
    pub fn ballot(&self, side: Side) -> Vec<u32> {
        let b = match side {
            Side::In => &self.in_ballot,
            Side::Out => &self.out_ballot,
        };
        b.iter().map(|&v| v + 1).collect()
    }

    /// Number of steps so far that used the alpha scheme.
    pub fn alpha_steps(&self) -> u64 {
        self.alpha_steps
    }

    pub fn last_step(&self) -> Option<StepOutcome> {
        self.last
    }

    pub fn edges(&self) -> Option<&[(u32, u32)]> {
        self.edges.as_deref()
    }

    pub fn degree_pair(&self, v: usize) -> Result<(u32, u32)> {
        if v == 0 || v > self.n() {
            return Err(Error::Argument(format!("node {v} outside 1..={}", self.n())));
        }
        Ok((self.in_deg[v - 1], self.out_deg[v - 1]))
    }

    /// Probability that the next step increments `side` at node `v`, given that
    /// the matching scheme is chosen.
    pub fn selection_probability(&self, side: Side, v: usize) -> Result<f64> {
        let (i, o) = self.degree_pair(v)?;
        let d = match side {
            Side::In => i,
            Side::Out => o,
        } as f64;
        let delta = self.params.delta(side);
        Ok((d + delta) / ((1.0 + delta) * self.n() as f64))
    }

    fn pick(&mut self, side: Side) -> u32 {
        let (ballot, p_ballot) = match side {
            Side::In => (&self.in_ballot, self.p_ballot_in),
            Side::Out => (&self.out_ballot, self.p_ballot_out),
        };
        let n = ballot.len();
        if self.rng.random::<f64>() < p_ballot {
            ballot[self.rng.random_range(0..n)]
        } else {
            self.rng.random_range(0..n) as u32
        }
    }

    /// Adds one node and one edge.
    pub fn step(&mut self) {
        let n = self.n();
        assert!(n < u32::MAX as usize, "node count overflow");
        let newborn = n as u32;
        let heads = self.rng.random::<f64>() < self.params.alpha();
        let (scheme, target) = if heads {
            let v = self.pick(Side::In);
            self.in_deg[v as usize] += 1;
            self.in_ballot.push(v);
            self.in_deg.push(0);
            self.out_deg.push(1);
            self.out_ballot.push(newborn);
            self.alpha_steps += 1;
            if let Some(e) = self.edges.as_mut() {
                e.push((newborn + 1, v + 1));
            }
            (Side::In, v)
        } else {
            let v = self.pick(Side::Out);
            self.out_deg[v as usize] += 1;
            self.out_ballot.push(v);
            self.in_deg.push(1);
            self.out_deg.push(0);
            self.in_ballot.push(newborn);
            if let Some(e) = self.edges.as_mut() {
                e.push((v + 1, newborn + 1));
            }
            (Side::Out, v)
        };
        self.last = Some(StepOutcome { scheme, target: target + 1, newborn: newborn + 1 });
    }

    /// Steps until the graph has `target_n` nodes.
    pub fn evolve(&mut self, target_n: usize) -> Result<()> {
        if target_n < self.n() {
            return Err(Error::Argument(format!("cannot evolve from n = {} back to {target_n}", self.n())));
        }
        let extra = target_n - self.n();
        self.in_deg.reserve(extra);
        self.out_deg.reserve(extra);
        self.in_ballot.reserve(extra);
        self.out_ballot.reserve(extra);
        while self.n() < target_n {
            self.step();
        }
        Ok(())
    }

    /// Writes `tail<TAB>head` lines. Requires [`GraphState::record_edges`].
    pub fn write_edges<W: Write>(&self, mut out: W) -> io::Result<()> {
        let edges = self
            .edges
            .as_ref()
            .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "edge recording was not enabled"))?;
        for (t, h) in edges {
            writeln!(out, "{t}\t{h}")?;
        }
        Ok(())
    }
}

/// Convenience: a fresh graph grown to `n` nodes.
pub fn generate(params: ModelParams, n: usize, seed: u64) -> Result<GraphState> {
    let mut g = new_graph(params, seed);
    g.evolve(n)?;
    Ok(g)
}

/// Draws the degree pair of node `v` in a graph of `n` nodes without building
/// the rest of the graph.
///
/// A single node's degree pair is itself a Markov chain: at size `m` it gains
/// an in-edge with probability `alpha (I + delta_in) / ((1 + delta_in) m)` and
/// an out-edge with the symmetric probability. Stretches with no change are
/// skipped by inverting the product of no-event probabilities, which telescopes
/// into a ratio of gamma functions.
pub fn tracked_node_degrees<R: Rng + ?Sized>(params: &ModelParams, v: usize, n: usize, rng: &mut R) -> Result<(u32, u32)> {
    if v == 0 || v > n {
        return Err(Error::Argument(format!("node {v} outside 1..={n}")));
    }
    let (a, g) = (params.alpha(), params.gamma());
    let (di, dout) = (params.delta_in(), params.delta_out());
    let (mut i, mut o) = if v == 1 {
        (1u32, 1u32)
    } else if rng.random::<f64>() < a {
        (0, 1)
    } else {
        (1, 0)
    };
    // m = current graph size; the next step moves from m to m + 1
    let mut m = v as u64;
    let last = n as u64 - 1;
    while m <= last {
        let r_in = a * (i as f64 + di) / (1.0 + di);
        let r_out = g * (o as f64 + dout) / (1.0 + dout);
        let r = r_in + r_out;
        let mf = m as f64;
        let s = if r >= mf * (1.0 - 1e-12) {
            m
        } else {
            // ln P(no event at sizes m..=s)
            let base = ln_gamma(mf) - ln_gamma(mf - r);
            let ln_surv = |s: u64| {
                let sf = s as f64;
                base + ln_gamma(sf + 1.0 - r) - ln_gamma(sf + 1.0)
            };
            let ln_u = rng.random::<f64>().ln();
            if ln_surv(last) >= ln_u {
                break;
            }
            let (mut lo, mut hi) = (m, last);
            // smallest s with ln_surv(s) < ln_u
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if ln_surv(mid) < ln_u {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            lo
        };
        if rng.random::<f64>() * r < r_in {
            i += 1;
        } else {
            o += 1;
        }
        m = s + 1;
    }
    Ok((i, o))
}
