//! Joint degree counts `N_{i,j}(n)` and the marginal and joint tail counts
//! derived from them.

use crate::params::Side;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCensus {
    n: u64,
    joint: BTreeMap<(u32, u32), u64>,
    marginal_in: Vec<u64>,
    marginal_out: Vec<u64>,
}

impl DegreeCensus {
    pub fn from_degrees(in_deg: &[u32], out_deg: &[u32]) -> Self {
        assert_eq!(in_deg.len(), out_deg.len());
        let mut joint = BTreeMap::new();
        let max_in = in_deg.iter().copied().max().unwrap_or(0) as usize;
        let max_out = out_deg.iter().copied().max().unwrap_or(0) as usize;
        let mut marginal_in = vec![0u64; max_in + 1];
        let mut marginal_out = vec![0u64; max_out + 1];
        for (&i, &o) in in_deg.iter().zip(out_deg) {
            *joint.entry((i, o)).or_insert(0) += 1;
            marginal_in[i as usize] += 1;
            marginal_out[o as usize] += 1;
        }
        Self { n: in_deg.len() as u64, joint, marginal_in, marginal_out }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `N_{i,j}`: number of nodes with in-degree `i` and out-degree `j`.
    pub fn count(&self, i: u32, j: u32) -> u64 {
        self.joint.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn joint(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.joint
    }

    /// Counts indexed by degree for one side.
    pub fn marginal(&self, side: Side) -> &[u64] {
        match side {
            Side::In => &self.marginal_in,
            Side::Out => &self.marginal_out,
        }
    }

    pub fn marginal_count(&self, side: Side, i: u32) -> u64 {
        self.marginal(side).get(i as usize).copied().unwrap_or(0)
    }

    pub fn max_degree(&self, side: Side) -> u32 {
        self.marginal(side).len() as u32 - 1
    }

    /// Number of nodes with degree strictly greater than `i` on `side`.
    pub fn marginal_tail(&self, side: Side, i: u32) -> u64 {
        self.marginal(side).iter().skip(i as usize + 1).sum()
    }

    /// `N_{>i,>j}`: nodes with in-degree above `i` and out-degree above `j`.
    pub fn joint_tail(&self, i: u32, j: u32) -> u64 {
        self.joint.range((i + 1, 0)..).filter(|(&(_, o), _)| o > j).map(|(_, &c)| c).sum()
    }

    /// Joint tail counts on the lattice `ins × outs` (row-major by `ins`).
    ///
    /// Runs in `O(#cells + #distinct pairs · log)` by a 2-D suffix sum.
    pub fn joint_tail_grid(&self, ins: &[u32], outs: &[u32]) -> Vec<u64> {
        let (ni, no) = (ins.len(), outs.len());
        debug_assert!(ins.windows(2).all(|w| w[0] < w[1]) && outs.windows(2).all(|w| w[0] < w[1]));
        // bucket each pair by the number of thresholds it exceeds
        let mut bucket = vec![0u64; (ni + 1) * (no + 1)];
        for (&(i, o), &c) in &self.joint {
            let bi = ins.partition_point(|&t| t < i);
            let bo = outs.partition_point(|&t| t < o);
            // pair exceeds thresholds ins[..bi] and outs[..bo]
            bucket[bi * (no + 1) + bo] += c;
        }
        // suffix sums: S[a][b] = sum of buckets with bi > a and bo > b
        let mut s = vec![0u64; (ni + 1) * (no + 1)];
        for a in (0..ni).rev() {
            for b in (0..no).rev() {
                let here = bucket[(a + 1) * (no + 1) + (b + 1)];
                let right = if b + 1 < no { s[a * (no + 1) + b + 1] } else { 0 };
                let down = if a + 1 < ni { s[(a + 1) * (no + 1) + b] } else { 0 };
                let diag = if a + 1 < ni && b + 1 < no { s[(a + 1) * (no + 1) + b + 1] } else { 0 };
                s[a * (no + 1) + b] = here + right + down - diag;
            }
        }
        let mut out = Vec::with_capacity(ni * no);
        for a in 0..ni {
            for b in 0..no {
                out.push(s[a * (no + 1) + b]);
            }
        }
        out
    }
}
