//! Prior, perfect-information and EVPI solvers.
//!
//! Every solver draws the same parameter sample `θ_i = sample(seed, i)` for
//! all actions (common random numbers). The EVPI is the mean over samples of
//! the regret `best_a u(a, θ_i) − u(a*, θ_i)` (sense-corrected), which is
//! non-negative term by term, so the estimate is non-negative exactly.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{VoiError, VoiResult};
use crate::problem::{DecisionProblem, Sense, TabularProblem};
use crate::reduce::{BlockStats, Moments, Reducer, BLOCK};

/// How sample blocks are evaluated. Results do not depend on this choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Serial,
    /// Evaluate blocks on a dedicated pool with this many threads. Without the
    /// `parallel` feature this falls back to serial evaluation.
    Parallel { workers: usize },
}

/// Monte Carlo run settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub n_samples: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl MonteCarlo {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self { n_samples, seed, execution: Execution::Serial }
    }

    /// Use `workers` threads; `workers <= 1` means serial.
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.execution = if workers <= 1 { Execution::Serial } else { Execution::Parallel { workers } };
        self
    }

    pub fn prior<P: DecisionProblem>(&self, problem: &P) -> VoiResult<PriorSolution> {
        let total = self.reduce(problem)?;
        Ok(summarize(problem, &total, self.seed).prior_solution())
    }

    pub fn preposterior<P: DecisionProblem>(&self, problem: &P) -> VoiResult<(f64, f64)> {
        let total = self.reduce(problem)?;
        Ok((total.best.mean(), total.best.std_error()))
    }

    pub fn voi<P: DecisionProblem>(&self, problem: &P) -> VoiResult<VoiEstimate> {
        let total = self.reduce(problem)?;
        Ok(summarize(problem, &total, self.seed))
    }

    /// Running estimates after every `stride` samples, plus the final count.
    ///
    /// The row for `k` samples is bit-identical to a `voi` run with
    /// `n_samples = k`, so the last row reproduces the headline result.
    pub fn trace<P: DecisionProblem>(&self, problem: &P, stride: usize) -> VoiResult<Vec<TraceRow>> {
        check_samples(self.n_samples)?;
        if stride == 0 {
            return Err(VoiError::InvalidArgument("trace stride must be at least 1".into()));
        }
        let n = self.n_samples;
        let full = self.full_blocks(problem, n / BLOCK)?;
        let mut checkpoints: Vec<usize> = (1..=n / stride).map(|k| k * stride).collect();
        if checkpoints.last() != Some(&n) {
            checkpoints.push(n);
        }

        let mut rows = Vec::with_capacity(checkpoints.len());
        let mut reducer = Reducer::default();
        let mut pushed = 0;
        let mut open: Option<(usize, BlockValues)> = None;
        for k in checkpoints {
            let whole = k / BLOCK;
            while pushed < whole {
                reducer.push(full[pushed].clone());
                pushed += 1;
            }
            let partial = k % BLOCK;
            let tail = if partial == 0 {
                None
            } else {
                if open.as_ref().map(|(b, _)| *b) != Some(whole) {
                    let start = whole * BLOCK;
                    let end = (start + BLOCK).min(n);
                    open = Some((whole, BlockValues::evaluate(problem, self.seed, start, end)?));
                }
                open.as_ref().map(|(_, values)| values.stats(partial))
            };
            let total = reducer.finish(tail.as_ref()).expect("at least one sample");
            let est = summarize(problem, &total, self.seed);
            rows.push(TraceRow { n: k as u64, prior_value: est.prior_value, evpi: est.evpi });
        }
        Ok(rows)
    }

    fn reduce<P: DecisionProblem>(&self, problem: &P) -> VoiResult<BlockStats> {
        check_samples(self.n_samples)?;
        let n = self.n_samples;
        let full = self.full_blocks(problem, n / BLOCK)?;
        let tail = if n % BLOCK == 0 {
            None
        } else {
            let start = n - n % BLOCK;
            Some(BlockValues::evaluate(problem, self.seed, start, n)?.stats(n - start))
        };
        let mut reducer = Reducer::default();
        for block in full {
            reducer.push(block);
        }
        Ok(reducer.finish(tail.as_ref()).expect("n_samples >= 2"))
    }

    fn full_blocks<P: DecisionProblem>(&self, problem: &P, count: usize) -> VoiResult<Vec<BlockStats>> {
        let seed = self.seed;
        let eval = |b: usize| -> VoiResult<BlockStats> {
            let start = b * BLOCK;
            Ok(BlockValues::evaluate(problem, seed, start, start + BLOCK)?.stats(BLOCK))
        };
        let results: Vec<VoiResult<BlockStats>> = match self.execution {
            Execution::Serial => (0..count).map(eval).collect(),
            Execution::Parallel { workers } => parallel_map(count, workers, eval)?,
        };
        // First failure in index order, whatever the evaluation order was.
        results.into_iter().collect()
    }
}

#[cfg(feature = "parallel")]
pub(crate) fn parallel_map<T, F>(count: usize, workers: usize, f: F) -> VoiResult<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| VoiError::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..count).into_par_iter().map(&f).collect()))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn parallel_map<T, F>(count: usize, _workers: usize, f: F) -> VoiResult<Vec<T>>
where
    F: Fn(usize) -> T,
{
    Ok((0..count).map(f).collect())
}

fn check_samples(n: usize) -> VoiResult<()> {
    if n < 2 {
        return Err(VoiError::InvalidArgument(format!("n_samples must be at least 2, got {n}")));
    }
    Ok(())
}

/// Utilities of every action for a contiguous run of sample indices.
struct BlockValues {
    len: usize,
    sense: Sense,
    /// `utility[a * len + j]` for sample `start + j`.
    utility: Vec<f64>,
    best: Vec<f64>,
}

impl BlockValues {
    fn evaluate<P: DecisionProblem>(problem: &P, seed: u64, start: usize, end: usize) -> VoiResult<Self> {
        let actions = problem.actions();
        let sense = problem.sense();
        let len = end - start;
        let mut utility = vec![0.0; actions.len() * len];
        let mut best = vec![0.0; len];
        for (j, index) in (start..end).enumerate() {
            let theta = problem.sample(seed, index as u64);
            let mut top = f64::NAN;
            for a in 0..actions.len() {
                let u = problem.utility(a, &theta);
                if !u.is_finite() {
                    return Err(VoiError::NonFiniteUtility {
                        action: actions[a].id.clone(),
                        index: index as u64,
                        value: u,
                    });
                }
                utility[a * len + j] = u;
                if a == 0 || sense.better(u, top) {
                    top = u;
                }
            }
            best[j] = top;
        }
        Ok(Self { len, sense, utility, best })
    }

    /// Statistics of the first `count` samples.
    fn stats(&self, count: usize) -> BlockStats {
        let actions = self.utility.len() / self.len;
        let best = &self.best[..count];
        let mut regret = vec![0.0; count];
        let mut utility = Vec::with_capacity(actions);
        let mut regrets = Vec::with_capacity(actions);
        for a in 0..actions {
            let row = &self.utility[a * self.len..a * self.len + count];
            for ((r, b), u) in regret.iter_mut().zip(best).zip(row) {
                *r = self.sense.regret(*b, *u);
            }
            utility.push(Moments::from_slice(row));
            regrets.push(Moments::from_slice(&regret));
        }
        BlockStats { best: Moments::from_slice(best), utility, regret: regrets }
    }
}

fn summarize<P: DecisionProblem>(problem: &P, total: &BlockStats, seed: u64) -> VoiEstimate {
    let actions = problem.actions();
    let sense = problem.sense();
    let per_action_values: Vec<ActionValue> = actions
        .iter()
        .zip(&total.utility)
        .map(|(a, m)| ActionValue { id: a.id.clone(), value: m.mean(), se: m.std_error() })
        .collect();
    let prior = sense.argbest(per_action_values.iter().map(|v| v.value)).expect("non-empty actions");
    let prior_value = per_action_values[prior].value;
    let regret = &total.regret[prior];
    let evpi = regret.mean();
    VoiEstimate {
        sense,
        prior_action: actions[prior].id.clone(),
        prior_action_index: prior,
        prior_value,
        preposterior_value: match sense {
            Sense::Maximize => prior_value + evpi,
            Sense::Minimize => prior_value - evpi,
        },
        evpi,
        se_prior: per_action_values[prior].se,
        se_evpi: regret.std_error(),
        per_action_values,
        n_samples: total.best.n,
        seed,
    }
}

/// Estimated expected utility of one action.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ActionValue {
    pub id: String,
    pub value: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorSolution {
    pub prior_action: String,
    pub prior_action_index: usize,
    pub prior_value: f64,
    pub se_prior: f64,
    pub per_action_values: Vec<ActionValue>,
}

/// Result of one value-of-information analysis.
///
/// For exact enumeration `n_samples` and `seed` are zero and every standard
/// error is zero.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VoiEstimate {
    pub sense: Sense,
    pub prior_action: String,
    pub prior_action_index: usize,
    pub prior_value: f64,
    pub preposterior_value: f64,
    pub evpi: f64,
    pub se_prior: f64,
    pub se_evpi: f64,
    pub per_action_values: Vec<ActionValue>,
    pub n_samples: u64,
    pub seed: u64,
}

impl VoiEstimate {
    fn prior_solution(self) -> PriorSolution {
        PriorSolution {
            prior_action: self.prior_action,
            prior_action_index: self.prior_action_index,
            prior_value: self.prior_value,
            se_prior: self.se_prior,
            per_action_values: self.per_action_values,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceRow {
    pub n: u64,
    pub prior_value: f64,
    pub evpi: f64,
}

pub fn solve_prior<P: DecisionProblem>(problem: &P, n_samples: usize, seed: u64) -> VoiResult<PriorSolution> {
    MonteCarlo::new(n_samples, seed).prior(problem)
}

/// Mean and standard error of `best_a u(a, θ_i)` over the shared sample stream.
pub fn solve_preposterior_perfect<P: DecisionProblem>(
    problem: &P,
    n_samples: usize,
    seed: u64,
) -> VoiResult<(f64, f64)> {
    MonteCarlo::new(n_samples, seed).preposterior(problem)
}

pub fn solve_voi<P: DecisionProblem>(problem: &P, n_samples: usize, seed: u64) -> VoiResult<VoiEstimate> {
    MonteCarlo::new(n_samples, seed).voi(problem)
}

pub fn convergence_trace<P: DecisionProblem>(
    problem: &P,
    n_samples: usize,
    seed: u64,
    stride: usize,
) -> VoiResult<Vec<TraceRow>> {
    MonteCarlo::new(n_samples, seed).trace(problem, stride)
}

/// Exact prior, perfect-information value and EVPI by enumeration.
pub fn solve_exact(problem: &TabularProblem) -> VoiEstimate {
    let sense = problem.sense();
    let p = problem.probabilities();
    let table = problem.utilities();
    let per_action_values: Vec<ActionValue> = problem
        .actions()
        .iter()
        .zip(table)
        .map(|(a, row)| ActionValue { id: a.id.clone(), value: p.iter().zip(row).map(|(p, u)| p * u).sum(), se: 0.0 })
        .collect();
    let prior = sense.argbest(per_action_values.iter().map(|v| v.value)).expect("non-empty actions");
    let prior_value = per_action_values[prior].value;
    let preposterior_value: f64 = (0..p.len())
        .map(|s| {
            let best = table.iter().map(|row| row[s]).fold(None, |acc: Option<f64>, u| match acc {
                Some(b) if !sense.better(u, b) => Some(b),
                _ => Some(u),
            });
            p[s] * best.expect("non-empty actions")
        })
        .sum();
    // Termwise p·best dominates p·u(a*) and the sums share an order, so this is ≥ 0.
    let evpi = sense.regret(preposterior_value, prior_value);
    VoiEstimate {
        sense,
        prior_action: problem.actions()[prior].id.clone(),
        prior_action_index: prior,
        prior_value,
        preposterior_value,
        evpi,
        se_prior: 0.0,
        se_evpi: 0.0,
        per_action_values,
        n_samples: 0,
        seed: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Action, FnProblem};
    use alloc::string::ToString;
    use rand::Rng;

    fn two_by_two() -> TabularProblem {
        TabularProblem::new(
            vec![Action::new("a0", "a0"), Action::new("a1", "a1")],
            vec!["s0".to_string(), "s1".to_string()],
            vec![0.5, 0.5],
            vec![vec![1.0, 0.0], vec![0.0, 0.6]],
            Sense::Maximize,
        )
        .unwrap()
    }

    fn constant(c: f64, actions: usize) -> impl DecisionProblem<Param = f64> {
        let acts = (0..actions).map(|i| Action::new(format!("{i}"), format!("{i}"))).collect();
        FnProblem::new(
            acts,
            Sense::Minimize,
            |seed, i| crate::rng::sample_index_rng(seed, i).random::<f64>(),
            move |_, _| c,
        )
        .unwrap()
    }

    #[test]
    fn exact_two_by_two() {
        let est = solve_exact(&two_by_two());
        assert_eq!(est.prior_action, "a0");
        assert!((est.prior_value - 0.5).abs() < 1e-15);
        assert!((est.preposterior_value - 0.8).abs() < 1e-15);
        assert!((est.evpi - 0.3).abs() < 1e-15);
        assert_eq!((est.se_prior, est.se_evpi, est.n_samples), (0.0, 0.0, 0));
    }

    #[test]
    fn exact_single_action_or_state_has_zero_evpi() {
        let one_action = TabularProblem::new(
            vec![Action::new("only", "only")],
            vec!["x".into(), "y".into(), "z".into()],
            vec![0.2, 0.3, 0.5],
            vec![vec![4.0, -1.0, 9.0]],
            Sense::Minimize,
        )
        .unwrap();
        assert_eq!(solve_exact(&one_action).evpi, 0.0);

        let one_state = TabularProblem::new(
            vec![Action::new("a", "a"), Action::new("b", "b")],
            vec!["x".into()],
            vec![1.0],
            vec![vec![3.0], vec![7.0]],
            Sense::Maximize,
        )
        .unwrap();
        let est = solve_exact(&one_state);
        assert_eq!(est.evpi, 0.0);
        assert_eq!(est.prior_action, "b");
    }

    #[test]
    fn constant_utility_is_worthless_information() {
        let p = constant(3.25, 3);
        let est = solve_voi(&p, 5000, 1).unwrap();
        assert_eq!(est.prior_action_index, 0);
        assert!((est.prior_value - 3.25).abs() < 1e-12);
        assert_eq!(est.evpi, 0.0);
        let (pre, _) = solve_preposterior_perfect(&p, 5000, 1).unwrap();
        assert!((pre - 3.25).abs() < 1e-12);
        for row in convergence_trace(&p, 5000, 1, 333).unwrap() {
            assert_eq!(row.evpi, 0.0);
        }
    }

    #[test]
    fn utility_ignoring_theta_gives_zero_evpi() {
        let acts = (0..4).map(|i| Action::new(format!("{i}"), format!("{i}"))).collect();
        let p = FnProblem::new(acts, Sense::Maximize, |_, i| i, |a, _| (a as f64 - 1.5).powi(2)).unwrap();
        let est = solve_voi(&p, 3000, 9).unwrap();
        assert_eq!(est.evpi, 0.0);
        assert_eq!(est.prior_action_index, 0);
    }

    #[test]
    fn rejects_too_few_samples() {
        let p = two_by_two();
        for n in [0, 1] {
            let err = solve_voi(&p, n, 0).unwrap_err();
            assert!(format!("{err}").contains("at least 2"), "{err}");
            assert!(solve_prior(&p, n, 0).is_err());
            assert!(solve_preposterior_perfect(&p, n, 0).is_err());
        }
        assert!(convergence_trace(&p, 100, 0, 0).is_err());
    }

    #[test]
    fn non_finite_utility_names_action_and_index() {
        let acts = vec![Action::new("ok", "ok"), Action::new("bad", "bad")];
        let p = FnProblem::new(
            acts,
            Sense::Maximize,
            |_, i| i,
            |a, i: &u64| if a == 1 && *i == 1500 { f64::NAN } else { 1.0 },
        )
        .unwrap();
        match solve_voi(&p, 4000, 0).unwrap_err() {
            VoiError::NonFiniteUtility { action, index, .. } => {
                assert_eq!(action, "bad");
                assert_eq!(index, 1500);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trace_rows_match_prefix_runs() {
        let p = two_by_two();
        let rows = convergence_trace(&p, 5000, 3, 700).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows.last().unwrap().n, 5000);
        for row in &rows {
            let est = solve_voi(&p, row.n as usize, 3);
            match est {
                Ok(est) => {
                    assert_eq!(row.prior_value.to_bits(), est.prior_value.to_bits());
                    assert_eq!(row.evpi.to_bits(), est.evpi.to_bits());
                }
                Err(_) => assert!(row.n < 2),
            }
        }
    }

    #[test]
    fn degenerate_stride_gives_single_row() {
        let p = two_by_two();
        let rows = convergence_trace(&p, 4096, 11, 4096).unwrap();
        let est = solve_voi(&p, 4096, 11).unwrap();
        assert_eq!(rows, vec![TraceRow { n: 4096, prior_value: est.prior_value, evpi: est.evpi }]);
    }

    #[test]
    fn prior_and_preposterior_agree_with_voi() {
        let p = two_by_two();
        let est = solve_voi(&p, 20_000, 5).unwrap();
        let prior = solve_prior(&p, 20_000, 5).unwrap();
        assert_eq!(prior.prior_action, est.prior_action);
        assert_eq!(prior.prior_value, est.prior_value);
        assert_eq!(prior.se_prior, est.se_prior);
        let (pre, se) = solve_preposterior_perfect(&p, 20_000, 5).unwrap();
        assert!((pre - est.preposterior_value).abs() < 1e-12);
        assert!(se > 0.0);
    }
}
