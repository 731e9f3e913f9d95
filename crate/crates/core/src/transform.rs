//! Block transform `A_[n]` and the fattening search.
//!
//! `k ∈ A_[n]` iff the block `[kn, kn+n−1]` meets `A`. Block indices start
//! at 1, so members of `A` below `n` fall in no block; they are counted in
//! `dropped_head`, and members past the last full block in `dropped_tail`.

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{default_banach_estimate, BanachPoint};
use crate::error::{Error, Result};
use crate::exact::{self, Density};
use crate::windowset::WindowSet;

#[derive(Clone, Debug, Serialize)]
pub struct BlockTransformResult {
    pub n: usize,
    #[serde(skip)]
    pub blocks: WindowSet,
    pub block_window: usize,
    pub block_count: usize,
    pub achieved: BanachPoint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub dropped_head: usize,
    pub dropped_tail: usize,
}

impl BlockTransformResult {
    pub fn achieved_density(&self) -> Density {
        self.achieved.density
    }
}

/// Number of block indices `[1, ⌊N/n⌋ − 1]`.
pub fn block_window(window_len: usize, n: usize) -> usize {
    (window_len / n).saturating_sub(1)
}

pub fn block_transform(set: &WindowSet, n: usize) -> Result<BlockTransformResult> {
    let len = set.window_len();
    if n == 0 || n > len / 4 {
        return Err(Error::range("n", n, 1, len / 4));
    }
    let w = block_window(len, n);
    let mut blocks = WindowSet::empty(w)?;
    // Walk members once; each member marks its block.
    let mut last_block = 0;
    for x in set.iter() {
        let k = x / n;
        if k >= 1 && k <= w && k != last_block {
            blocks.insert(k);
            last_block = k;
        }
    }
    let covered_end = (w + 1) * n - 1;
    let dropped_head = set.count_range(1, n - 1);
    let dropped_tail = set.count_range(covered_end + 1, len);
    let blocks = blocks.with_label(format!("{}[{n}]", set.label()));
    let achieved = default_banach_estimate(&blocks);
    Ok(BlockTransformResult {
        n,
        block_count: blocks.len(),
        block_window: w,
        blocks,
        achieved: achieved.into(),
        epsilon: None,
        dropped_head,
        dropped_tail,
    })
}

/// `{1..=64}` plus powers of two up to `N/64`, capped at `N/4`.
pub fn default_n_schedule(window_len: usize) -> Vec<usize> {
    let cap = window_len / 4;
    let mut out: Vec<usize> = (1..=64).filter(|&n| n <= cap).collect();
    let mut p = 128;
    while p <= window_len / 64 && p <= cap {
        out.push(p);
        p *= 2;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FattenAttempt {
    pub n: usize,
    #[serde(serialize_with = "exact::ser_density")]
    pub achieved: Density,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FattenOutcome {
    Found {
        result: BlockTransformResult,
        trace: Vec<FattenAttempt>,
    },
    NotFound {
        epsilon: f64,
        trace: Vec<FattenAttempt>,
    },
}

impl FattenOutcome {
    pub fn found(&self) -> Option<&BlockTransformResult> {
        match self {
            FattenOutcome::Found { result, .. } => Some(result),
            FattenOutcome::NotFound { .. } => None,
        }
    }

    pub fn trace(&self) -> &[FattenAttempt] {
        match self {
            FattenOutcome::Found { trace, .. } | FattenOutcome::NotFound { trace, .. } => trace,
        }
    }
}

/// The smallest `n` in `n_schedule` whose block set has Banach estimate
/// at least `1 − epsilon`. Running out of candidates is a normal outcome.
pub fn fatten(set: &WindowSet, epsilon: f64, n_schedule: &[usize]) -> Result<FattenOutcome> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::validation("epsilon", format!("{epsilon} is not in (0, 1)")));
    }
    if default_banach_estimate(set).count == 0 {
        return Err(Error::validation("A", "Banach estimate is zero; nothing to fatten"));
    }
    let target = BigRational::one() - exact::decimal(epsilon);
    let mut candidates: Vec<usize> = n_schedule
        .iter()
        .copied()
        .filter(|&n| n >= 1 && n <= set.window_len() / 4)
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    let mut trace = Vec::new();
    // Evaluate in parallel batches; the smallest success in a batch wins.
    for batch in candidates.chunks(rayon::current_num_threads().max(1)) {
        let results = batch
            .par_iter()
            .map(|&n| block_transform(set, n))
            .collect::<Result<Vec<_>>>()?;
        for mut r in results {
            trace.push(FattenAttempt {
                n: r.n,
                achieved: r.achieved.density,
            });
            if exact::to_big(&r.achieved.density) >= target {
                r.epsilon = Some(epsilon);
                return Ok(FattenOutcome::Found { result: r, trace });
            }
        }
    }
    Ok(FattenOutcome::NotFound { epsilon, trace })
}
