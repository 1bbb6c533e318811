use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{VoiError, VoiResult};
use crate::rng::sample_index_rng;

/// A decision alternative: a stable identifier plus a human-readable label.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Action {
    pub id: String,
    pub label: String,
}

impl Action {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        Self { id: id.into(), label: label.into() }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Direction of optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    /// True when `candidate` is strictly better than `incumbent`.
    #[inline]
    pub fn better(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Sense::Maximize => candidate > incumbent,
            Sense::Minimize => candidate < incumbent,
        }
    }

    /// Non-negative shortfall of `value` relative to `best`.
    #[inline]
    pub fn regret(self, best: f64, value: f64) -> f64 {
        match self {
            Sense::Maximize => best - value,
            Sense::Minimize => value - best,
        }
    }

    /// Index of the best entry; ties go to the lowest index.
    pub fn argbest(self, values: impl IntoIterator<Item = f64>) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in values.into_iter().enumerate() {
            match best {
                Some((_, b)) if !self.better(v, b) => {}
                _ => best = Some((i, v)),
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
        }
    }
}

/// A stochastic decision problem with a finite action set.
///
/// `sample` must be a pure function of `(seed, index)` and `utility` must be
/// pure and finite for every parameter the sampler can produce. Problems are
/// shared read-only across workers.
pub trait DecisionProblem: Sync {
    type Param;

    fn actions(&self) -> &[Action];

    fn sense(&self) -> Sense;

    fn sample(&self, seed: u64, index: u64) -> Self::Param;

    fn utility(&self, action: usize, theta: &Self::Param) -> f64;
}

impl<P: DecisionProblem + ?Sized> DecisionProblem for &P {
    type Param = P::Param;

    fn actions(&self) -> &[Action] {
        (**self).actions()
    }

    fn sense(&self) -> Sense {
        (**self).sense()
    }

    fn sample(&self, seed: u64, index: u64) -> Self::Param {
        (**self).sample(seed, index)
    }

    fn utility(&self, action: usize, theta: &Self::Param) -> f64 {
        (**self).utility(action, theta)
    }
}

pub(crate) fn validate_actions(actions: &[Action]) -> VoiResult<()> {
    if actions.is_empty() {
        return Err(VoiError::param("actions", "at least one action is required"));
    }
    for (i, a) in actions.iter().enumerate() {
        if actions[..i].iter().any(|b| b.id == a.id) {
            return Err(VoiError::param("actions", alloc::format!("duplicate action id `{}`", a.id)));
        }
    }
    Ok(())
}

/// A problem assembled from closures.
pub struct FnProblem<S, U> {
    actions: Vec<Action>,
    sense: Sense,
    sampler: S,
    utility: U,
}

impl<T, S, U> FnProblem<S, U>
where
    S: Fn(u64, u64) -> T + Sync,
    U: Fn(usize, &T) -> f64 + Sync,
{
    pub fn new(actions: Vec<Action>, sense: Sense, sampler: S, utility: U) -> VoiResult<Self> {
        validate_actions(&actions)?;
        Ok(Self { actions, sense, sampler, utility })
    }
}

impl<T, S, U> DecisionProblem for FnProblem<S, U>
where
    S: Fn(u64, u64) -> T + Sync,
    U: Fn(usize, &T) -> f64 + Sync,
{
    type Param = T;

    fn actions(&self) -> &[Action] {
        &self.actions
    }

    fn sense(&self) -> Sense {
        self.sense
    }

    fn sample(&self, seed: u64, index: u64) -> T {
        (self.sampler)(seed, index)
    }

    fn utility(&self, action: usize, theta: &T) -> f64 {
        (self.utility)(action, theta)
    }
}

/// Finite-support problem with explicit state probabilities and a utility
/// matrix indexed `[action][state]`.
///
/// Sampling draws a state index by inverse CDF, so the same table can be
/// solved both by Monte Carlo and by exact enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularProblem {
    actions: Vec<Action>,
    states: Vec<String>,
    probabilities: Vec<f64>,
    utilities: Vec<Vec<f64>>,
    sense: Sense,
    cumulative: Vec<f64>,
}

/// Maximum allowed deviation of the probability sum from 1.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;

impl TabularProblem {
    pub fn new(
        actions: Vec<Action>,
        states: Vec<String>,
        probabilities: Vec<f64>,
        utilities: Vec<Vec<f64>>,
        sense: Sense,
    ) -> VoiResult<Self> {
        validate_actions(&actions)?;
        if states.is_empty() {
            return Err(VoiError::param("states", "at least one state is required"));
        }
        if probabilities.len() != states.len() {
            return Err(VoiError::param(
                "probabilities",
                alloc::format!("{} probabilities for {} states", probabilities.len(), states.len()),
            ));
        }
        if let Some(p) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(VoiError::param("probabilities", alloc::format!("invalid probability {p}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(VoiError::param("probabilities", alloc::format!("probabilities sum to {total}")));
        }
        if utilities.len() != actions.len() {
            return Err(VoiError::param(
                "utilities",
                alloc::format!("{} rows for {} actions", utilities.len(), actions.len()),
            ));
        }
        for (a, row) in utilities.iter().enumerate() {
            if row.len() != states.len() {
                return Err(VoiError::param(
                    "utilities",
                    alloc::format!("row {a} has {} entries for {} states", row.len(), states.len()),
                ));
            }
            if let Some(u) = row.iter().find(|u| !u.is_finite()) {
                return Err(VoiError::param("utilities", alloc::format!("row {a} contains {u}")));
            }
        }
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Self { actions, states, probabilities, utilities, sense, cumulative })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn utilities(&self) -> &[Vec<f64>] {
        &self.utilities
    }

    /// Map a uniform draw on `[0, 1)` to a state index.
    pub fn state_for_uniform(&self, u: f64) -> usize {
        let target = u * self.cumulative[self.cumulative.len() - 1];
        self.cumulative.iter().position(|&c| target < c).unwrap_or_else(|| {
            // Rounding can leave `target` at the top; take the last state with mass.
            self.probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0)
        })
    }
}

impl DecisionProblem for TabularProblem {
    type Param = usize;

    fn actions(&self) -> &[Action] {
        &self.actions
    }

    fn sense(&self) -> Sense {
        self.sense
    }

    fn sample(&self, seed: u64, index: u64) -> usize {
        let u: f64 = sample_index_rng(seed, index).random();
        self.state_for_uniform(u)
    }

    fn utility(&self, action: usize, state: &usize) -> f64 {
        self.utilities[action][*state]
    }
}
