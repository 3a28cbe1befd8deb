//! Partial-sum deviation statistics over uniforms, the dyadic block
//! decomposition behind the chaining argument, and the mixing tail bound.
//!
//! Z_{p,q}(t) = |sum_{i=p+1}^{p+q} (1_{[0,t]}(U_i) - t)| is piecewise linear
//! in t with slope -q between order statistics, so suprema over t are exact
//! maxima over the 2q candidates at the window's order statistics and their
//! left limits. The block inequality is verified in exact integer
//! arithmetic: thresholds are snapped to dyadic rationals T/2^40 and both
//! sides are compared as i128 numerators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixing::MixingRateModel;

const SNAP_BITS: u32 = 40;
const SNAP: f64 = (1u64 << SNAP_BITS) as f64;

/// Z_{p,q}(t): absolute centered count of the q-window starting after p.
/// The indicator is closed at t (U_i <= t counts).
pub fn z_statistic(uniforms: &[f64], p: usize, q: usize, t: f64) -> Result<f64> {
    check_window(uniforms.len(), p, q)?;
    let count = uniforms[p..p + q].iter().filter(|&&u| u <= t).count();
    Ok((count as f64 - q as f64 * t).abs())
}

/// sup over t in (0,1) of Z_{p,q}(t), attained at window order statistics
/// or their left limits.
pub fn sup_z_statistic(uniforms: &[f64], p: usize, q: usize) -> Result<f64> {
    check_window(uniforms.len(), p, q)?;
    let mut window = uniforms[p..p + q].to_vec();
    window.sort_by(f64::total_cmp);
    let qf = q as f64;
    let mut best = 0.0f64;
    for (idx, &u) in window.iter().enumerate() {
        let j = (idx + 1) as f64;
        best = best.max((j - qf * u).abs());
        best = best.max((j - 1.0 - qf * u).abs());
    }
    Ok(best)
}

fn check_window(len: usize, p: usize, q: usize) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidParameter("window length q must be >= 1".into()));
    }
    if p + q > len {
        return Err(Error::InvalidParameter(format!(
            "window [{p}, {}) exceeds the sample length {len}",
            p + q
        )));
    }
    Ok(())
}

/// Dyadic decomposition n = 2^N + sum_j h_j 2^{j-1} with the blocks laid out
/// greedily, largest extra block first.
#[derive(Debug, Clone, Serialize)]
pub struct DyadicDecomposition {
    pub n: usize,
    /// Largest N with 2^N <= n.
    pub n_exp: u32,
    /// h_1..h_N, the binary digits of n - 2^N.
    pub h: Vec<u8>,
    /// (start, len) blocks: the base block [0, 2^N) followed by one block of
    /// length 2^{j-1} per h_j = 1, in decreasing j.
    pub blocks: Vec<(usize, usize)>,
}

/// An extra block together with its alignment data: it starts at
/// 2^N + b * 2^j and has length 2^{j-1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtraBlock {
    pub j: u32,
    pub b: usize,
    pub start: usize,
    pub len: usize,
}

impl DyadicDecomposition {
    pub fn base_block(&self) -> (usize, usize) {
        self.blocks[0]
    }

    /// Extra blocks with their (j, b) alignment. The greedy largest-first
    /// layout always aligns: the offset of the j-block past 2^N is a sum of
    /// powers 2^{j'-1} with j' > j, hence divisible by 2^j.
    pub fn extra_blocks(&self) -> impl Iterator<Item = ExtraBlock> + '_ {
        let base = 1usize << self.n_exp;
        self.blocks[1..].iter().map(move |&(start, len)| {
            let j = len.trailing_zeros() + 1;
            ExtraBlock { j, b: (start - base) >> j, start, len }
        })
    }
}

/// Constructs the decomposition; n must be >= 1.
pub fn dyadic_blocks(n: usize) -> DyadicDecomposition {
    assert!(n >= 1, "dyadic_blocks requires n >= 1");
    let n_exp = (usize::BITS - 1 - n.leading_zeros()) as u32;
    let base = 1usize << n_exp;
    let rem = n - base;
    let h: Vec<u8> = (1..=n_exp).map(|j| ((rem >> (j - 1)) & 1) as u8).collect();
    let mut blocks = vec![(0usize, base)];
    let mut start = base;
    for j in (1..=n_exp).rev() {
        if (rem >> (j - 1)) & 1 == 1 {
            let len = 1usize << (j - 1);
            blocks.push((start, len));
            start += len;
        }
    }
    debug_assert_eq!(start, n);
    DyadicDecomposition { n, n_exp, h, blocks }
}

/// Outcome of the block-decomposition inequality check at one threshold
/// grid.
#[derive(Debug, Clone, Serialize)]
pub struct ChainingReport {
    pub holds: bool,
    /// min over the grid of (blockwise sum - whole-window statistic).
    pub min_slack: f64,
    /// Slack per threshold, in input order.
    pub slacks: Vec<f64>,
}

/// Verifies Z_{0,n}(t) <= Z over the base block + sum of Z over the extra
/// blocks for every t in the grid.
///
/// Each t is snapped to the dyadic rational round(t * 2^40) / 2^40 and both
/// sides are evaluated exactly in integer arithmetic at the snapped
/// threshold, so the comparison carries zero floating-point tolerance.
pub fn chaining_bound_check(uniforms: &[f64], n: usize, t_grid: &[f64]) -> Result<ChainingReport> {
    if n == 0 || n > uniforms.len() {
        return Err(Error::InvalidParameter(format!(
            "chaining_bound_check requires 1 <= n <= sample length, got n = {n}"
        )));
    }
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty threshold grid".into()));
    }
    let decomp = dyadic_blocks(n);
    // snapped integer thresholds, sorted with back-references
    let snapped: Vec<u64> = t_grid.iter().map(|&t| (t.clamp(0.0, 1.0) * SNAP).round() as u64).collect();
    let mut order: Vec<usize> = (0..snapped.len()).collect();
    order.sort_by_key(|&i| snapped[i]);
    let sorted_t: Vec<u64> = order.iter().map(|&i| snapped[i]).collect();

    // per-block counts of U <= T/2^40 for every threshold, via histograms
    let mut slacks = vec![0.0f64; t_grid.len()];
    let mut whole: Vec<i128> = vec![0; sorted_t.len()];
    let mut block_sum: Vec<i128> = vec![0; sorted_t.len()];
    for &(start, len) in &decomp.blocks {
        let counts = counts_per_threshold(&uniforms[start..start + len], &sorted_t);
        for (k, &c) in counts.iter().enumerate() {
            let z_num = ((c as i128) << SNAP_BITS) - (len as i128) * (sorted_t[k] as i128);
            block_sum[k] += z_num.abs();
            whole[k] += z_num;
        }
    }
    let mut holds = true;
    let mut min_slack = f64::INFINITY;
    for (k, &orig) in order.iter().enumerate() {
        let lhs = whole[k].abs();
        let slack_num = block_sum[k] - lhs;
        if slack_num < 0 {
            holds = false;
        }
        let slack = slack_num as f64 / SNAP;
        slacks[orig] = slack;
        min_slack = min_slack.min(slack);
    }
    Ok(ChainingReport { holds, min_slack, slacks })
}

// counts[k] = #{u in slice : u <= sorted_t[k] / 2^40}
fn counts_per_threshold(slice: &[f64], sorted_t: &[u64]) -> Vec<usize> {
    let mut hist = vec![0usize; sorted_t.len() + 1];
    for &u in slice {
        // first threshold with T/2^40 >= u
        let pos = sorted_t.partition_point(|&t| (t as f64) < u * SNAP);
        hist[pos] += 1;
    }
    let mut counts = Vec::with_capacity(sorted_t.len());
    let mut acc = 0usize;
    for h in &hist[..sorted_t.len()] {
        acc += h;
        counts.push(acc);
    }
    counts
}

/// The mixing tail bound
/// (1/x^2) (1 + 4 sum_{i=0}^{q-1} alpha(i)) (2 + ln q)^2
/// on P[q^{-1/2} sup_t Z_{p,q}(t) >= x], with alpha(0) = 1/4. The raw value
/// is returned even when it exceeds 1.
pub fn rio_tail_bound(q: u64, x: f64, rate: &MixingRateModel) -> f64 {
    assert!(q >= 1, "rio_tail_bound requires q >= 1");
    assert!(x > 0.0, "rio_tail_bound requires x > 0");
    let log_q = (q as f64).ln();
    (1.0 + 4.0 * rate.alpha_sum(q)) * (2.0 + log_q) * (2.0 + log_q) / (x * x)
}
