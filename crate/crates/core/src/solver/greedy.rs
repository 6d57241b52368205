use crate::instance::{ParityInstance, Solution};
use crate::scalar::Scalar;

/// Scans edges by decreasing weight, ties by id, keeping each edge that
/// leaves the solution feasible.
pub fn greedy<W: Scalar>(instance: &ParityInstance<W>) -> Solution<W> {
    let mut order: Vec<usize> = (0..instance.edge_count()).collect();
    order.sort_by(|&a, &b| {
        instance
            .weight(b)
            .partial_cmp(instance.weight(a))
            .expect("weights are comparable")
            .then(a.cmp(&b))
    });
    let mut chosen = Vec::new();
    for e in order {
        chosen.push(e);
        if !instance.feasible_trusted(&chosen) {
            chosen.pop();
        }
    }
    Solution::new_unchecked(instance, chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate, Family};
    use crate::matroid::Matroid;
    use crate::Rational;

    #[test]
    fn greedy_trap_takes_the_blocker() {
        let inst = generate(
            &Family::GreedyTrap {
                k: 3,
                rho: crate::scalar::parse_ratio("0.1").unwrap(),
            },
            0,
        )
        .unwrap();
        let sol = greedy(&inst);
        assert_eq!(sol.chosen(), &[0]);
        assert_eq!(sol.total_weight(), &Rational::from_integer(1.into()));
    }

    #[test]
    fn single_uniform_matroid_takes_largest() {
        let m = Matroid::uniform(4, 2);
        let inst = ParityInstance::new(
            1,
            4,
            vec![vec![0], vec![1], vec![2], vec![3]],
            vec![3i64, 9, 4, 9],
            m,
        )
        .unwrap();
        assert_eq!(greedy(&inst).chosen(), &[1, 3]);
    }
}
