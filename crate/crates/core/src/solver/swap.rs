//! Small swaps and the per-class local search.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::markers::WeightInterval;
use crate::instance::{ParityInstance, Solution};
use crate::scalar::Scalar;

/// How to pick among improving swaps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapRule {
    /// First improving swap in enumeration order.
    #[default]
    FirstLex,
    /// Largest gain, ties broken by enumeration order.
    BestGain,
}

/// Add `add` (at most two edges outside the solution) and drop `remove`
/// (at most `2k` solution edges).
#[derive(Clone, Debug, PartialEq)]
pub struct SwapMove<W> {
    pub add: Vec<usize>,
    pub remove: Vec<usize>,
    pub gain: W,
}

impl<W: Scalar> SwapMove<W> {
    /// `(A \ remove) ∪ add`, sorted.
    pub fn apply(&self, current: &[usize]) -> Vec<usize> {
        let mut next: Vec<usize> = current
            .iter()
            .copied()
            .filter(|e| !self.remove.contains(e))
            .chain(self.add.iter().copied())
            .collect();
        next.sort_unstable();
        next
    }
}

/// Swap enumeration over one weight class, counting oracle calls.
///
/// Candidate insertions `S` are tried in lexicographic order of their sorted
/// id tuples; for each, removals `N` go by increasing size and then
/// lexicographically. Before enumerating removals, `S` is skipped when it
/// does not fit even with every class edge of the solution removed.
pub(crate) struct SwapSearch<'a, W> {
    instance: &'a ParityInstance<W>,
    rule: SwapRule,
    pub(crate) calls: u64,
}

impl<'a, W: Scalar> SwapSearch<'a, W> {
    pub(crate) fn new(instance: &'a ParityInstance<W>, rule: SwapRule) -> Self {
        Self {
            instance,
            rule,
            calls: 0,
        }
    }

    fn feasible(&mut self, edges: &[usize]) -> bool {
        let vertices = self.instance.vertices_of(edges);
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        self.calls += 1;
        self.instance.matroid().independent_trusted(&vertices)
    }

    /// An improving swap with `S ⊆ members \ current` and
    /// `N ⊆ members ∩ current`, or `None` when the class is locally optimal.
    /// Both slices are sorted.
    pub(crate) fn find(&mut self, current: &[usize], members: &[usize]) -> Option<SwapMove<W>> {
        let in_current = |e: &usize| current.binary_search(e).is_ok();
        let addable: Vec<usize> = members.iter().copied().filter(|e| !in_current(e)).collect();
        let removable: Vec<usize> = members.iter().copied().filter(in_current).collect();
        let kept: Vec<usize> = current
            .iter()
            .copied()
            .filter(|e| removable.binary_search(e).is_err())
            .collect();
        let max_remove = (2 * self.instance.k()).min(removable.len());
        let zero = W::zero();
        let mut best: Option<SwapMove<W>> = None;

        for (i, &first) in addable.iter().enumerate() {
            let singles = std::iter::once(vec![first]);
            let pairs = addable[i + 1..].iter().map(|&second| vec![first, second]);
            for add in singles.chain(pairs) {
                let add_weight = self.instance.weight_of(&add);
                if add_weight <= zero {
                    continue;
                }
                let mut trial = kept.clone();
                trial.extend_from_slice(&add);
                if !self.feasible(&trial) {
                    continue;
                }
                for size in 0..=max_remove {
                    for remove in removable.iter().copied().combinations(size) {
                        let remove_weight = self.instance.weight_of(&remove);
                        if add_weight <= remove_weight {
                            continue;
                        }
                        let mut next: Vec<usize> = current
                            .iter()
                            .copied()
                            .filter(|e| !remove.contains(e))
                            .collect();
                        next.extend_from_slice(&add);
                        if !self.feasible(&next) {
                            continue;
                        }
                        let gain = add_weight.clone() - remove_weight;
                        match self.rule {
                            SwapRule::FirstLex => {
                                return Some(SwapMove {
                                    add: add.clone(),
                                    remove,
                                    gain,
                                })
                            }
                            SwapRule::BestGain => {
                                if best.as_ref().is_none_or(|b| gain > b.gain) {
                                    best = Some(SwapMove {
                                        add: add.clone(),
                                        remove,
                                        gain,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        best
    }

    /// Applies improving swaps in `members` until none is left or `budget`
    /// runs out. Returns the applied swaps and whether the class converged.
    pub(crate) fn run(
        &mut self,
        current: &mut Vec<usize>,
        members: &[usize],
        budget: &mut Option<usize>,
    ) -> (Vec<SwapMove<W>>, bool) {
        let mut applied = Vec::new();
        loop {
            if *budget == Some(0) {
                return (applied, false);
            }
            let Some(swap) = self.find(current, members) else {
                return (applied, true);
            };
            *current = swap.apply(current);
            debug_assert!(self.instance.feasible_trusted(current));
            if let Some(left) = budget.as_mut() {
                *left -= 1;
            }
            applied.push(swap);
        }
    }
}

/// One improving `(A, I, I)`-swap, if any exists.
pub fn find_improving_swap<W: Scalar>(
    instance: &ParityInstance<W>,
    solution: &Solution<W>,
    interval: &WeightInterval,
    rule: SwapRule,
) -> Option<SwapMove<W>> {
    let members = interval.edges_in(instance);
    SwapSearch::new(instance, rule).find(solution.chosen(), &members)
}

/// Local search restricted to one weight class: applies improving
/// `(A, I, I)`-swaps until none is left. Solution edges outside the class
/// are never removed.
pub fn interval_local_search<W: Scalar>(
    instance: &ParityInstance<W>,
    solution: &Solution<W>,
    interval: &WeightInterval,
    rule: SwapRule,
) -> Solution<W> {
    let members = interval.edges_in(instance);
    let mut current = solution.chosen().to_vec();
    SwapSearch::new(instance, rule).run(&mut current, &members, &mut None);
    Solution::new_unchecked(instance, current)
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use super::*;
    use crate::instance::{generate, Family};
    use crate::matroid::Matroid;
    use crate::scalar::parse_ratio;

    fn everything() -> WeightInterval {
        WeightInterval::closed(BigRational::zero(), BigRational::from_integer(100.into()))
    }

    #[test]
    fn pure_insertion() {
        let inst = ParityInstance::new(1, 2, vec![vec![0], vec![1]], vec![1i64, 2], Matroid::free(2)).unwrap();
        let a = inst.solution(&[0]).unwrap();
        let swap = find_improving_swap(&inst, &a, &everything(), SwapRule::FirstLex).unwrap();
        assert_eq!((swap.add, swap.remove, swap.gain), (vec![1], vec![], 2));
    }

    #[test]
    fn single_exchange_in_rank_one() {
        let inst =
            ParityInstance::new(1, 2, vec![vec![0], vec![1]], vec![1i64, 2], Matroid::uniform(2, 1)).unwrap();
        let a = inst.solution(&[0]).unwrap();
        for rule in [SwapRule::FirstLex, SwapRule::BestGain] {
            let swap = find_improving_swap(&inst, &a, &everything(), rule).unwrap();
            assert_eq!((swap.add, swap.remove, swap.gain), (vec![1], vec![0], 1));
        }
    }

    #[test]
    fn best_gain_prefers_the_larger_move() {
        let inst = ParityInstance::new(
            1,
            3,
            vec![vec![0], vec![1], vec![2]],
            vec![1i64, 2, 5],
            Matroid::uniform(3, 1),
        )
        .unwrap();
        let a = Solution::empty();
        let first = find_improving_swap(&inst, &a, &everything(), SwapRule::FirstLex).unwrap();
        let best = find_improving_swap(&inst, &a, &everything(), SwapRule::BestGain).unwrap();
        assert_eq!(first.add, vec![0]);
        assert_eq!(best.add, vec![2]);
    }

    #[test]
    fn empty_interval_leaves_solution() {
        let inst = ParityInstance::new(1, 2, vec![vec![0], vec![1]], vec![1i64, 2], Matroid::free(2)).unwrap();
        let a = inst.solution(&[0]).unwrap();
        let none = WeightInterval::open_closed(BigRational::from_integer(5.into()), BigRational::from_integer(6.into()));
        assert_eq!(interval_local_search(&inst, &a, &none, SwapRule::FirstLex), a);
    }

    #[test]
    fn heavy_edge_outside_class_stays() {
        let inst = generate(
            &Family::GreedyTrap {
                k: 3,
                rho: parse_ratio("0.3").unwrap(),
            },
            0,
        )
        .unwrap();
        let a = inst.solution(&[0]).unwrap();
        let light = WeightInterval::open_closed(parse_ratio("0.5").unwrap(), parse_ratio("0.8").unwrap());
        let out = interval_local_search(&inst, &a, &light, SwapRule::FirstLex);
        assert!(out.contains(0));
        assert_eq!(out.total_weight(), &BigRational::one());
        assert!(find_improving_swap(&inst, &out, &light, SwapRule::FirstLex).is_none());
    }

    #[test]
    fn pair_insertion_replaces_the_blocker() {
        let inst = generate(
            &Family::GreedyTrap {
                k: 3,
                rho: parse_ratio("0.3").unwrap(),
            },
            0,
        )
        .unwrap();
        let a = inst.solution(&[0]).unwrap();
        let out = interval_local_search(&inst, &a, &everything(), SwapRule::FirstLex);
        assert_eq!(out.chosen(), &[1, 2, 3]);
        assert_eq!(out.total_weight(), &parse_ratio("2.1").unwrap());
    }
}
