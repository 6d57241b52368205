use num_rational::BigRational;
use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::markers::{check_delta, check_epsilon, compute_markers, sample_tau, IntervalScheme, WeightInterval};
use super::scaling::scale_weights;
use super::swap::{SwapRule, SwapSearch};
use crate::error::{Error, Result};
use crate::instance::{ParityInstance, Solution};
use crate::scalar::{parse_ratio, ratio_string, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct SlidingConfig {
    pub epsilon: BigRational,
    pub delta: BigRational,
    pub rule: SwapRule,
    /// Stop after this many applied swaps in total; the trace is then
    /// marked incomplete.
    pub swap_limit: Option<usize>,
}

impl Default for SlidingConfig {
    fn default() -> Self {
        Self {
            epsilon: parse_ratio("0.3873").expect("literal"),
            delta: parse_ratio("0.0001").expect("literal"),
            rule: SwapRule::FirstLex,
            swap_limit: None,
        }
    }
}

impl SlidingConfig {
    pub fn new(epsilon: BigRational, delta: BigRational) -> Self {
        Self {
            epsilon,
            delta,
            ..Self::default()
        }
    }

    /// Fails unless `epsilon` lies in `(0, 1/2)` and `delta` in `(0, 1)`.
    pub fn check(&self) -> Result<()> {
        check_epsilon(&self.epsilon)?;
        check_delta(&self.delta)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapRecord {
    pub add: Vec<usize>,
    pub remove: Vec<usize>,
    #[serde(with = "ratio_string")]
    pub gain: BigRational,
}

/// What happened in one weight class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub index: usize,
    pub interval: WeightInterval,
    /// Edges of the solution in this class after its local search (`A_i`).
    pub added: Vec<usize>,
    /// Whole solution after this class (`A_{<=i}`).
    pub prefix: Vec<usize>,
    pub swaps: Vec<SwapRecord>,
    pub oracle_calls: u64,
    pub converged: bool,
}

/// Full record of one run, enough to replay and re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub seed: Option<u64>,
    #[serde(with = "ratio_string")]
    pub tau: BigRational,
    /// `None` when the instance was empty or degenerate.
    pub scheme: Option<IntervalScheme>,
    pub intervals: Vec<IntervalRecord>,
    pub solution: Vec<usize>,
    #[serde(with = "ratio_string")]
    pub weight: BigRational,
    pub swap_count: usize,
    pub oracle_calls: u64,
    pub completed: bool,
}

impl SolverTrace {
    fn trivial(seed: Option<u64>, tau: BigRational) -> Self {
        Self {
            seed,
            tau,
            scheme: None,
            intervals: Vec::new(),
            solution: Vec::new(),
            weight: BigRational::zero(),
            swap_count: 0,
            oracle_calls: 0,
            completed: true,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("traces always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// One run: `tau` is drawn from a generator seeded with `seed`.
pub fn sliding_local_search<W: Scalar>(
    instance: &ParityInstance<W>,
    config: &SlidingConfig,
    seed: u64,
) -> Result<(Solution<W>, SolverTrace)> {
    config.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = sample_tau(&config.epsilon, &mut rng);
    let (solution, mut trace) = sliding_with_tau(instance, config, tau)?;
    trace.seed = Some(seed);
    Ok((solution, trace))
}

/// One run with a given shift `tau`.
pub fn sliding_with_tau<W: Scalar>(
    instance: &ParityInstance<W>,
    config: &SlidingConfig,
    tau: BigRational,
) -> Result<(Solution<W>, SolverTrace)> {
    config.check()?;
    if instance.is_empty() {
        return Ok((Solution::empty(), SolverTrace::trivial(None, tau)));
    }
    let scheme = match compute_markers(instance, &config.epsilon, &config.delta, &tau) {
        Ok(scheme) => scheme,
        Err(Error::Degenerate(_)) => return Ok((Solution::empty(), SolverTrace::trivial(None, tau))),
        Err(e) => return Err(e),
    };

    let mut search = SwapSearch::new(instance, config.rule);
    let mut budget = config.swap_limit;
    let mut current: Vec<usize> = Vec::new();
    let mut intervals = Vec::with_capacity(scheme.interval_count() + 1);
    let mut completed = true;
    let mut swap_count = 0;
    for index in 1..=scheme.interval_count() + 1 {
        let interval = scheme.interval(index);
        let members = interval.edges_in(instance);
        let calls_before = search.calls;
        let (swaps, converged) = search.run(&mut current, &members, &mut budget);
        completed &= converged;
        swap_count += swaps.len();
        let added = current
            .iter()
            .copied()
            .filter(|e| members.binary_search(e).is_ok())
            .collect();
        intervals.push(IntervalRecord {
            index,
            interval,
            added,
            prefix: current.clone(),
            swaps: swaps
                .into_iter()
                .map(|s| SwapRecord {
                    add: s.add,
                    remove: s.remove,
                    gain: s.gain.to_ratio(),
                })
                .collect(),
            oracle_calls: search.calls - calls_before,
            converged,
        });
    }

    let solution = Solution::new_unchecked(instance, current);
    let trace = SolverTrace {
        seed: None,
        tau,
        scheme: Some(scheme),
        intervals,
        solution: solution.chosen().to_vec(),
        weight: solution.total_weight().to_ratio(),
        swap_count,
        oracle_calls: search.calls,
        completed,
    };
    Ok((solution, trace))
}

/// Seed of run `run` derived from a master seed.
pub fn derive_seed(seed: u64, run: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng.next_u64()
}

/// Every run of [`best_of_runs`], in run order.
#[derive(Clone, Debug)]
pub struct BestOfRuns<W> {
    pub runs: Vec<(Solution<W>, SolverTrace)>,
    /// Index of the heaviest run, lowest index on ties.
    pub best: usize,
}

impl<W: Scalar> BestOfRuns<W> {
    pub fn best_solution(&self) -> &Solution<W> {
        &self.runs[self.best].0
    }

    pub fn best_trace(&self) -> &SolverTrace {
        &self.runs[self.best].1
    }
}

/// `runs` independent runs with seeds `derive_seed(seed, r)`, executed in
/// parallel.
pub fn best_of_runs<W: Scalar>(
    instance: &ParityInstance<W>,
    config: &SlidingConfig,
    runs: usize,
    seed: u64,
) -> Result<BestOfRuns<W>> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    let runs = (0..runs)
        .into_par_iter()
        .map(|r| sliding_local_search(instance, config, derive_seed(seed, r)))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, (solution, _)) in runs.iter().enumerate() {
        if solution.total_weight() > runs[best].0.total_weight() {
            best = i;
        }
    }
    Ok(BestOfRuns { runs, best })
}

/// Runs on the scaled instance and reports the solution in original
/// weights. Falls back to the unscaled instance when scaling is degenerate.
/// The trace describes the scaled run.
pub fn solve_scaled<W: Scalar>(
    instance: &ParityInstance<W>,
    config: &SlidingConfig,
    eps_scale: &BigRational,
    seed: u64,
) -> Result<(Solution<W>, SolverTrace)> {
    match scale_weights(instance, eps_scale) {
        Ok(scaled) => {
            let (solution, trace) = sliding_local_search(&scaled, config, seed)?;
            Ok((solution.reweighted(instance), trace))
        }
        Err(Error::Degenerate(_)) => sliding_local_search(instance, config, seed),
        Err(e) => Err(e),
    }
}
