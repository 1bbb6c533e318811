//! Order-fixed accumulation of sample statistics.
//!
//! Samples are grouped into blocks of [`BLOCK`] consecutive indices. Each block
//! is summarized on its own, then blocks are merged left to right by a binary
//! counter: two partial results are combined only when they cover equally many
//! blocks. The resulting tree depends on the sample count alone, and the state
//! after `k` samples is exactly the state a run of `k` samples would produce.

use alloc::vec::Vec;

pub(crate) const BLOCK: usize = 1024;

/// Count, sum and sum of squared deviations of a set of values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Moments {
    pub n: u64,
    pub sum: f64,
    pub m2: f64,
}

impl Moments {
    pub fn from_slice(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self::default();
        }
        let sum: f64 = values.iter().sum();
        let mean = sum / values.len() as f64;
        let m2 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        Self { n: values.len() as u64, sum, m2 }
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&self, other: &Self) -> Self {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let (na, nb) = (self.n as f64, other.n as f64);
        let delta = other.sum / nb - self.sum / na;
        Self { n, sum: self.sum + other.sum, m2: self.m2 + other.m2 + delta * delta * (na * nb / n as f64) }
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    /// Standard error of the mean from the unbiased sample variance.
    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        crate::math::sqrt(self.m2 / (n - 1.0) / n)
    }
}

/// Statistics of one contiguous index range.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BlockStats {
    /// Per-sample best utility.
    pub best: Moments,
    /// Utility of each action.
    pub utility: Vec<Moments>,
    /// Regret of each action relative to the per-sample best.
    pub regret: Vec<Moments>,
}

impl BlockStats {
    pub fn merge(&self, other: &Self) -> Self {
        Self {
            best: self.best.merge(&other.best),
            utility: self.utility.iter().zip(&other.utility).map(|(a, b)| a.merge(b)).collect(),
            regret: self.regret.iter().zip(&other.regret).map(|(a, b)| a.merge(b)).collect(),
        }
    }
}

/// Binary-counter reducer over block statistics.
#[derive(Debug, Clone, Default)]
pub(crate) struct Reducer {
    stack: Vec<(u32, BlockStats)>,
}

impl Reducer {
    pub fn push(&mut self, block: BlockStats) {
        let mut level = 0;
        let mut acc = block;
        while let Some((top_level, _)) = self.stack.last() {
            if *top_level != level {
                break;
            }
            let (_, top) = self.stack.pop().expect("non-empty");
            acc = top.merge(&acc);
            level += 1;
        }
        self.stack.push((level, acc));
    }

    /// Fold the pending partial results, oldest first, then the optional tail block.
    pub fn finish(&self, tail: Option<&BlockStats>) -> Option<BlockStats> {
        let mut iter = self.stack.iter().map(|(_, s)| s).chain(tail);
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, s| acc.merge(s)))
    }
}
