mod common;

use common::{q, small_family};
use mpls::exact::{brute_force_optimum, brute_force_with, verify_local_optimum, verify_tail_bound, ExactMethod};
use mpls::instance::generate;
use mpls::solver::{
    best_of_runs, find_improving_swap, greedy, scale_weights, sliding_local_search, SlidingConfig, SwapRule,
};
use mpls::Rational;
use num_traits::One;
use proptest::prelude::*;

fn rule() -> impl Strategy<Value = SwapRule> {
    prop_oneof![Just(SwapRule::FirstLex), Just(SwapRule::BestGain)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sliding_is_a_k_approximation_and_locally_optimal(
        k in 3usize..=4, pick: u64, seed: u64, rule in rule()
    ) {
        let inst = generate(&small_family(k, pick), pick).unwrap();
        let opt = brute_force_optimum(&inst).unwrap().optimum;
        let cfg = SlidingConfig { rule, ..SlidingConfig::default() };
        let (sol, trace) = sliding_local_search(&inst, &cfg, seed).unwrap();
        prop_assert!(inst.is_feasible(sol.chosen()).unwrap());
        prop_assert!(sol.total_weight() <= opt.total_weight());
        prop_assert!(Rational::from_integer(k.into()) * sol.total_weight() >= *opt.total_weight());
        prop_assert!(trace.completed);
        prop_assert!(verify_local_optimum(&inst, &trace).unwrap());
        if let Some(scheme) = &trace.scheme {
            prop_assert!(verify_tail_bound(&inst, scheme, &opt));
        }
    }

    #[test]
    fn greedy_is_a_k_approximation(k in 3usize..=4, pick: u64) {
        let inst = generate(&small_family(k, pick), pick).unwrap();
        let opt = brute_force_optimum(&inst).unwrap().optimum;
        let g = greedy(&inst);
        prop_assert!(inst.is_feasible(g.chosen()).unwrap());
        prop_assert!(Rational::from_integer(k.into()) * g.total_weight() >= *opt.total_weight());
    }

    #[test]
    fn exact_methods_agree(k in 3usize..=4, pick: u64) {
        let inst = generate(&small_family(k, pick), pick).unwrap();
        let a = brute_force_with(&inst, ExactMethod::SubsetEnum, 14).unwrap();
        let b = brute_force_with(&inst, ExactMethod::BranchAndBound, 20).unwrap();
        prop_assert_eq!(a.optimum, b.optimum);
    }

    #[test]
    fn swaps_keep_feasibility_and_gain(k in 3usize..=4, pick: u64, seed: u64) {
        let inst = generate(&small_family(k, pick), pick).unwrap();
        let (_, trace) = sliding_local_search(&inst, &SlidingConfig::default(), seed).unwrap();
        let mut current: Vec<usize> = Vec::new();
        for record in &trace.intervals {
            for swap in &record.swaps {
                prop_assert!(swap.add.len() <= 2 && swap.remove.len() <= 2 * k);
                prop_assert!(swap.gain > Rational::from_integer(0.into()));
                let before = inst.weight_of(&current);
                current.retain(|e| !swap.remove.contains(e));
                current.extend_from_slice(&swap.add);
                current.sort_unstable();
                prop_assert!(inst.is_feasible(&current).unwrap());
                prop_assert_eq!(inst.weight_of(&current) - before, swap.gain.clone());
            }
            prop_assert_eq!(&current, &record.prefix);
            let final_state = inst.solution(&current).unwrap();
            prop_assert!(find_improving_swap(&inst, &final_state, &record.interval, SwapRule::FirstLex).is_none());
        }
    }

    #[test]
    fn scaling_loses_at_most_the_scale_factor(k in 3usize..=4, pick: u64) {
        let inst = generate(&small_family(k, pick), pick).unwrap();
        prop_assume!(inst.edge_count() <= 8);
        let eps = q("0.1");
        let Ok(scaled) = scale_weights(&inst, &eps) else { return Ok(()); };
        let opt = brute_force_optimum(&inst).unwrap().optimum;
        let scaled_opt = brute_force_optimum(&scaled).unwrap().optimum.reweighted(&inst);
        prop_assert!(scaled_opt.total_weight().clone() >= (Rational::one() - eps) * opt.total_weight());
    }

    #[test]
    fn best_of_runs_dominates(k in 3usize..=4, pick: u64, seed: u64) {
        let inst = generate(&small_family(k, pick), pick).unwrap();
        let best = best_of_runs(&inst, &SlidingConfig::default(), 5, seed).unwrap();
        let total: Rational = best.runs.iter().map(|r| r.0.total_weight().clone()).sum();
        prop_assert!(Rational::from_integer(5.into()) * best.best_solution().total_weight() >= total);
        for run in &best.runs {
            prop_assert!(run.0.total_weight() <= best.best_solution().total_weight());
        }
    }
}
