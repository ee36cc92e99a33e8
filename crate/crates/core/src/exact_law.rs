//! Exact distribution of the full degree sequence for small graphs, by
//! dynamic programming over the one-step transition probabilities.
//!
//! This evaluates the attachment probabilities directly from the degrees and
//! shares no code with the ballot sampler, so it serves as an oracle for both
//! the sampler and the continuous-time embedding.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use std::collections::BTreeMap;

/// Degree pairs of nodes `1..=n` in order.
pub type DegreeSequence = Vec<(u32, u32)>;

/// All successors of `seq` with their one-step probabilities.
pub fn transitions(params: &ModelParams, seq: &DegreeSequence) -> Vec<(DegreeSequence, f64)> {
    let n = seq.len() as f64;
    let (a, g) = (params.alpha(), params.gamma());
    let (di, dout) = (params.delta_in(), params.delta_out());
    let mut out = Vec::with_capacity(2 * seq.len());
    for (v, &(i, o)) in seq.iter().enumerate() {
        let p_in = a * (i as f64 + di) / ((1.0 + di) * n);
        let mut next = seq.clone();
        next[v].0 += 1;
        next.push((0, 1));
        out.push((next, p_in));

        let p_out = g * (o as f64 + dout) / ((1.0 + dout) * n);
        let mut next = seq.clone();
        next[v].1 += 1;
        next.push((1, 0));
        out.push((next, p_out));
    }
    out
}

/// Exact law of the degree sequence at size `n` (keep `n` small: the support
/// grows roughly like `2^n n!`).
pub fn exact_degree_law(params: &ModelParams, n: usize) -> Result<BTreeMap<DegreeSequence, f64>> {
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    if n > 8 {
        return Err(Error::Argument(format!("exact enumeration is limited to n <= 8, got {n}")));
    }
    let mut law = BTreeMap::new();
    law.insert(vec![(1u32, 1u32)], 1.0);
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for (seq, p) in &law {
            for (succ, q) in transitions(params, seq) {
                *next.entry(succ).or_insert(0.0) += p * q;
            }
        }
        law = next;
    }
    Ok(law)
}
