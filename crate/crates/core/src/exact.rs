//! Brute-force optimum and independent checkers.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ParityInstance, Solution};
use crate::scalar::Scalar;
use crate::solver::{compute_markers, IntervalScheme, SolverTrace};

/// Environment variable overriding both default limits.
pub const LIMIT_ENV: &str = "MPLS_EXACT_LIMIT";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactMethod {
    SubsetEnum,
    #[default]
    BranchAndBound,
}

impl ExactMethod {
    pub fn name(self) -> &'static str {
        match self {
            ExactMethod::SubsetEnum => "subset-enum",
            ExactMethod::BranchAndBound => "branch-and-bound",
        }
    }

    pub fn default_limit(self) -> usize {
        match self {
            ExactMethod::SubsetEnum => 14,
            ExactMethod::BranchAndBound => 20,
        }
    }

    /// The default limit, or the value of [`LIMIT_ENV`] when it parses.
    pub fn limit_from_env(self) -> usize {
        std::env::var(LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or_else(|| self.default_limit())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactResult<W> {
    pub optimum: Solution<W>,
    /// Candidate sets looked at: all subsets for enumeration, search nodes
    /// for branch-and-bound.
    pub explored: u64,
    pub method: ExactMethod,
}

/// Maximum-weight feasible solution by branch-and-bound, ties broken by the
/// lexicographically smallest sorted id list.
pub fn brute_force_optimum<W: Scalar>(instance: &ParityInstance<W>) -> Result<ExactResult<W>> {
    let method = ExactMethod::BranchAndBound;
    brute_force_with(instance, method, method.limit_from_env())
}

pub fn brute_force_with<W: Scalar>(
    instance: &ParityInstance<W>,
    method: ExactMethod,
    limit: usize,
) -> Result<ExactResult<W>> {
    let n = instance.edge_count();
    if n > limit {
        return Err(Error::TooLarge { size: n, limit });
    }
    let (best, explored) = match method {
        ExactMethod::SubsetEnum => subset_enum(instance),
        ExactMethod::BranchAndBound => branch_and_bound(instance),
    };
    Ok(ExactResult {
        optimum: Solution::new_unchecked(instance, best),
        explored,
        method,
    })
}

fn better<W: Scalar>(weight: &W, set: &[usize], best_weight: &W, best: &[usize]) -> bool {
    weight > best_weight || (weight == best_weight && set < best)
}

fn subset_enum<W: Scalar>(instance: &ParityInstance<W>) -> (Vec<usize>, u64) {
    let n = instance.edge_count();
    let mut best = Vec::new();
    let mut best_weight = W::zero();
    let mut explored = 0;
    for mask in 0u64..(1u64 << n) {
        explored += 1;
        let set: Vec<usize> = (0..n).filter(|&e| mask >> e & 1 == 1).collect();
        if !instance.feasible_trusted(&set) {
            continue;
        }
        let weight = instance.weight_of(&set);
        if better(&weight, &set, &best_weight, &best) {
            best = set;
            best_weight = weight;
        }
    }
    (best, explored)
}

struct Bnb<'a, W> {
    instance: &'a ParityInstance<W>,
    /// `rest[e]`: total weight of edges `e..`.
    rest: Vec<W>,
    best: Vec<usize>,
    best_weight: W,
    explored: u64,
}

impl<W: Scalar> Bnb<'_, W> {
    fn visit(&mut self, next: usize, set: &mut Vec<usize>, weight: W) {
        self.explored += 1;
        if weight.clone() + self.rest[next].clone() < self.best_weight {
            return;
        }
        if next == self.instance.edge_count() {
            if better(&weight, set, &self.best_weight, &self.best) {
                self.best = set.clone();
                self.best_weight = weight;
            }
            return;
        }
        set.push(next);
        if self.instance.feasible_trusted(set) {
            let with = weight.clone() + self.instance.weight(next).clone();
            self.visit(next + 1, set, with);
        }
        set.pop();
        self.visit(next + 1, set, weight);
    }
}

fn branch_and_bound<W: Scalar>(instance: &ParityInstance<W>) -> (Vec<usize>, u64) {
    let n = instance.edge_count();
    let mut rest = vec![W::zero(); n + 1];
    for e in (0..n).rev() {
        rest[e] = rest[e + 1].clone() + instance.weight(e).clone();
    }
    let mut search = Bnb {
        instance,
        rest,
        best: Vec::new(),
        best_weight: W::zero(),
        explored: 0,
    };
    search.visit(0, &mut Vec::new(), W::zero());
    (search.best, search.explored)
}

fn mismatch(what: impl Into<String>) -> Error {
    Error::TraceMismatch(what.into())
}

fn in_class(scheme: &IntervalScheme, i: usize, w: &BigRational) -> bool {
    let m = scheme.markers();
    if i == scheme.interval_count() + 1 {
        *w >= BigRational::zero() && *w <= m[i - 1]
    } else {
        *w > m[i] && *w <= m[i - 1]
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|e| big.contains(e))
}

fn feasible_plain<W: Scalar>(instance: &ParityInstance<W>, edges: &[usize]) -> bool {
    let vertices = instance.vertices_of(edges);
    let mut seen = vec![false; instance.vertex_count()];
    for &v in &vertices {
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    instance.matroid().is_independent(&vertices).unwrap_or(false)
}

/// Re-checks a solver trace against the instance and then enumerates every
/// `(A_{<=i}, I_i, I_i)`-swap by bitmask; true iff none of them improves.
pub fn verify_local_optimum<W: Scalar>(instance: &ParityInstance<W>, trace: &SolverTrace) -> Result<bool> {
    let Some(scheme) = &trace.scheme else {
        let degenerate = instance.is_empty()
            || instance
                .max_feasible_weight()
                .is_none_or(|w| w.to_ratio().is_zero());
        if !degenerate || !trace.solution.is_empty() {
            return Err(mismatch("trace has no scheme but the instance is not degenerate"));
        }
        return Ok(true);
    };
    let expected = compute_markers(instance, scheme.epsilon(), scheme.delta(), scheme.tau())?;
    if expected != *scheme {
        return Err(mismatch("interval scheme differs from the instance's"));
    }
    let classes = scheme.interval_count() + 1;
    if trace.intervals.len() != classes {
        return Err(mismatch(format!(
            "{} interval records for {classes} classes",
            trace.intervals.len()
        )));
    }
    let weights: Vec<BigRational> = instance.weights().iter().map(Scalar::to_ratio).collect();
    let mut previous: Vec<usize> = Vec::new();
    for (pos, record) in trace.intervals.iter().enumerate() {
        let i = pos + 1;
        if record.index != i {
            return Err(mismatch(format!("record {pos} has index {}", record.index)));
        }
        if let Some(&bad) = record.prefix.iter().find(|&&e| e >= instance.edge_count()) {
            return Err(mismatch(format!("unknown edge {bad}")));
        }
        if !is_subset(&previous, &record.prefix) {
            return Err(mismatch(format!("class {i} removed an earlier edge")));
        }
        if !feasible_plain(instance, &record.prefix) {
            return Err(mismatch(format!("prefix after class {i} is infeasible")));
        }
        let mut own: Vec<usize> = record
            .prefix
            .iter()
            .copied()
            .filter(|&e| in_class(scheme, i, &weights[e]))
            .collect();
        own.sort_unstable();
        let mut added = record.added.clone();
        added.sort_unstable();
        if own != added {
            return Err(mismatch(format!("class {i} records the wrong added edges")));
        }
        previous = record.prefix.clone();
    }
    let mut final_set = previous.clone();
    final_set.sort_unstable();
    let mut solution = trace.solution.clone();
    solution.sort_unstable();
    if final_set != solution {
        return Err(mismatch("solution differs from the last prefix"));
    }

    let two_k = 2 * instance.k();
    for (pos, record) in trace.intervals.iter().enumerate() {
        let i = pos + 1;
        let members: Vec<usize> = (0..instance.edge_count())
            .filter(|&e| in_class(scheme, i, &weights[e]))
            .collect();
        let outside: Vec<usize> = members
            .iter()
            .copied()
            .filter(|e| !record.prefix.contains(e))
            .collect();
        let inside: Vec<usize> = members
            .iter()
            .copied()
            .filter(|e| record.prefix.contains(e))
            .collect();
        if inside.len() >= 64 || outside.len() >= 64 {
            return Err(Error::TooLarge {
                size: inside.len().max(outside.len()),
                limit: 63,
            });
        }
        for s_mask in 1u64..(1u64 << outside.len()) {
            if s_mask.count_ones() > 2 {
                continue;
            }
            let add: Vec<usize> = pick(&outside, s_mask);
            let gain_in: BigRational = add.iter().map(|&e| weights[e].clone()).sum();
            for n_mask in 0u64..(1u64 << inside.len()) {
                if n_mask.count_ones() as usize > two_k {
                    continue;
                }
                let remove = pick(&inside, n_mask);
                let loss: BigRational = remove.iter().map(|&e| weights[e].clone()).sum();
                if gain_in <= loss {
                    continue;
                }
                let mut next: Vec<usize> = record
                    .prefix
                    .iter()
                    .copied()
                    .filter(|e| !remove.contains(e))
                    .collect();
                next.extend_from_slice(&add);
                if feasible_plain(instance, &next) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn pick(items: &[usize], mask: u64) -> Vec<usize> {
    items
        .iter()
        .enumerate()
        .filter(|(b, _)| mask >> b & 1 == 1)
        .map(|(_, &e)| e)
        .collect()
}

/// Tail weight `w(O \ O_{<=L})`, where `O_{<=L}` holds the optimum edges of
/// weight at least `m_L`.
pub fn tail_weight<W: Scalar>(
    instance: &ParityInstance<W>,
    scheme: &IntervalScheme,
    optimum: &Solution<W>,
) -> BigRational {
    let m_l = scheme.marker(scheme.interval_count());
    optimum
        .chosen()
        .iter()
        .map(|&e| instance.weight(e).to_ratio())
        .filter(|w| w < m_l)
        .sum()
}

/// `w(O \ O_{<=L}) <= delta w(O)`.
pub fn verify_tail_bound<W: Scalar>(
    instance: &ParityInstance<W>,
    scheme: &IntervalScheme,
    optimum: &Solution<W>,
) -> bool {
    tail_weight(instance, scheme, optimum) <= scheme.delta() * optimum.total_weight().to_ratio()
}
