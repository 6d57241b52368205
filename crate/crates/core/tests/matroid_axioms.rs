mod common;

use common::{gf_rank, is_forest};
use mpls::matroid::random::{random_independent, random_matroid, RandomFamily};
use mpls::Matroid;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_subsets(ground: &[usize]) -> Vec<Vec<usize>> {
    (0u32..1 << ground.len())
        .map(|mask| {
            ground
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect()
        })
        .collect()
}

/// Empty set, downward closure and augmentation, by enumeration.
fn assert_axioms(m: &Matroid) {
    let ground = m.ground().elements().to_vec();
    let family: Vec<Vec<usize>> = all_subsets(&ground)
        .into_iter()
        .filter(|s| m.is_independent(s).unwrap())
        .collect();
    assert!(family.iter().any(|s| s.is_empty()), "empty set dependent");
    for set in &family {
        for drop in 0..set.len() {
            let mut smaller = set.clone();
            smaller.remove(drop);
            assert!(family.contains(&smaller), "{set:?} independent but {smaller:?} not");
        }
    }
    for a in &family {
        for b in family.iter().filter(|b| b.len() > a.len()) {
            let grows = b.iter().filter(|e| !a.contains(e)).any(|&e| {
                let mut bigger = a.clone();
                bigger.push(e);
                bigger.sort_unstable();
                family.contains(&bigger)
            });
            assert!(grows, "cannot augment {a:?} from {b:?}");
        }
    }
}

fn brute_rank(m: &Matroid, set: &[usize]) -> usize {
    all_subsets(set)
        .into_iter()
        .filter(|s| m.is_independent(s).unwrap())
        .map(|s| s.len())
        .max()
        .unwrap()
}

#[test]
fn every_family_satisfies_the_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for family in RandomFamily::ALL {
        for n in 0..=7 {
            for _ in 0..4 {
                assert_axioms(&random_matroid(family, n, &mut rng));
            }
        }
    }
    assert_axioms(&Matroid::free(5));
}

#[test]
fn combinators_satisfy_the_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..40 {
        let family = RandomFamily::ALL[rng.gen_range(0..4)];
        let m = random_matroid(family, rng.gen_range(2..=6), &mut rng);
        let c = random_independent(&m, 2, &mut rng);
        assert_axioms(&m.contract(&c).unwrap());
        let keep: Vec<usize> = m.ground().iter().filter(|_| rng.gen_bool(0.6)).collect();
        assert_axioms(&m.restrict(&keep).unwrap());
        let other = random_matroid(family, 3, &mut rng).shifted(m.len());
        assert_axioms(&Matroid::union(&[m.clone(), other]).unwrap());
        let origin: Vec<usize> = (0..7.min(m.len() + 2)).map(|i| i % m.len()).collect();
        assert_axioms(&Matroid::copy_cap(&m, origin).unwrap());
    }
}

#[test]
fn families_match_their_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..60 {
        let n = rng.gen_range(1..=7);
        let r = rng.gen_range(0..=n);
        let u = Matroid::uniform(n, r);
        for s in all_subsets(&(0..n).collect::<Vec<_>>()) {
            assert_eq!(u.is_independent(&s).unwrap(), s.len() <= r);
        }

        let vertices = rng.gen_range(2..=5);
        let edges: Vec<(usize, usize)> = (0..n)
            .map(|_| (rng.gen_range(0..vertices), rng.gen_range(0..vertices)))
            .collect();
        let g = Matroid::graphic(vertices, edges.clone()).unwrap();
        for s in all_subsets(&(0..n).collect::<Vec<_>>()) {
            let picked: Vec<(usize, usize)> = s.iter().map(|&e| edges[e]).collect();
            assert_eq!(g.is_independent(&s).unwrap(), is_forest(vertices, &picked), "{edges:?} {s:?}");
        }

        let p = [2i64, 3, 5][rng.gen_range(0..3)];
        let rows = rng.gen_range(1..=3);
        let columns: Vec<Vec<i64>> = (0..n).map(|_| (0..rows).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let lin = Matroid::linear(p as u64, columns.clone()).unwrap();
        for s in all_subsets(&(0..n).collect::<Vec<_>>()) {
            let picked: Vec<Vec<i64>> = s.iter().map(|&e| columns[e].clone()).collect();
            assert_eq!(lin.is_independent(&s).unwrap(), gf_rank(p, &picked) == s.len());
        }

        let blocks_n = rng.gen_range(1..=n);
        let mut blocks = vec![Vec::new(); blocks_n];
        for e in 0..n {
            blocks[rng.gen_range(0..blocks_n)].push(e);
        }
        blocks.retain(|b| !b.is_empty());
        let caps: Vec<usize> = blocks.iter().map(|b| rng.gen_range(0..=b.len())).collect();
        let part = Matroid::partition(blocks.clone(), caps.clone()).unwrap();
        for s in all_subsets(&(0..n).collect::<Vec<_>>()) {
            let ok = blocks
                .iter()
                .zip(&caps)
                .all(|(b, &c)| s.iter().filter(|e| b.contains(e)).count() <= c);
            assert_eq!(part.is_independent(&s).unwrap(), ok);
        }
    }
}

#[test]
fn restrict_and_contract_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..80 {
        let family = RandomFamily::ALL[rng.gen_range(0..4)];
        let m = random_matroid(family, rng.gen_range(1..=7), &mut rng);
        let c = random_independent(&m, 3, &mut rng);
        let contracted = m.contract(&c).unwrap();
        for s in all_subsets(contracted.ground().elements()) {
            let mut with = s.clone();
            with.extend_from_slice(&c);
            assert_eq!(contracted.is_independent(&s).unwrap(), m.is_independent(&with).unwrap());
        }
        let keep: Vec<usize> = contracted.ground().iter().filter(|_| rng.gen_bool(0.5)).collect();
        let both = contracted.restrict(&keep).unwrap();
        for s in all_subsets(&keep) {
            assert_eq!(both.is_independent(&s).unwrap(), contracted.is_independent(&s).unwrap());
        }
        assert!(m.contract(m.ground().elements()).is_err() || m.full_rank() == m.len());
    }
}

#[test]
fn union_and_copy_cap_match_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let a = random_matroid(RandomFamily::ALL[rng.gen_range(0..4)], 3, &mut rng);
        let b = random_matroid(RandomFamily::ALL[rng.gen_range(0..4)], 3, &mut rng).shifted(3);
        let u = Matroid::union(&[a.clone(), b.clone()]).unwrap();
        for s in all_subsets(&(0..6).collect::<Vec<_>>()) {
            let (left, right): (Vec<usize>, Vec<usize>) = s.iter().partition(|&&e| e < 3);
            let expected = a.is_independent(&left).unwrap() && b.is_independent(&right).unwrap();
            assert_eq!(u.is_independent(&s).unwrap(), expected);
        }
        let origin = vec![0, 0, 1, 2, 2, 2];
        let cc = Matroid::copy_cap(&a, origin.clone()).unwrap();
        for s in all_subsets(&(0..6).collect::<Vec<_>>()) {
            let mut originals: Vec<usize> = s.iter().map(|&e| origin[e]).collect();
            let len = originals.len();
            originals.sort_unstable();
            originals.dedup();
            let expected = originals.len() == len && a.is_independent(&originals).unwrap();
            assert_eq!(cc.is_independent(&s).unwrap(), expected);
        }
    }
}

#[test]
fn descriptors_rebuild_the_same_matroid() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..40 {
        let m = random_matroid(RandomFamily::ALL[rng.gen_range(0..4)], rng.gen_range(0..=6), &mut rng);
        let text = serde_json::to_string(&m.descriptor().unwrap()).unwrap();
        let back: mpls::matroid::MatroidDescriptor = serde_json::from_str(&text).unwrap();
        let rebuilt = back.build().unwrap();
        for s in all_subsets(m.ground().elements()) {
            assert_eq!(rebuilt.is_independent(&s).unwrap(), m.is_independent(&s).unwrap());
        }
    }
}

fn family_strategy() -> impl Strategy<Value = RandomFamily> {
    prop::sample::select(RandomFamily::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_monotone_submodular_and_exact(family in family_strategy(), n in 1usize..=6, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matroid(family, n, &mut rng);
        let ground: Vec<usize> = (0..n).collect();
        let sets = all_subsets(&ground);
        let rank = |s: &[usize]| m.rank(s).unwrap();
        for x in &sets {
            prop_assert_eq!(rank(x), brute_rank(&m, x));
            prop_assert!(rank(x) <= x.len());
        }
        for _ in 0..20 {
            let x = &sets[rng.gen_range(0..sets.len())];
            let y = &sets[rng.gen_range(0..sets.len())];
            let union: Vec<usize> = ground.iter().copied().filter(|e| x.contains(e) || y.contains(e)).collect();
            let inter: Vec<usize> = x.iter().copied().filter(|e| y.contains(e)).collect();
            prop_assert!(rank(&union) + rank(&inter) <= rank(x) + rank(y));
            prop_assert!(rank(&inter) <= rank(x) && rank(x) <= rank(&union));
        }
    }

    #[test]
    fn oracle_calls_are_counted(n in 1usize..=6, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matroid(RandomFamily::Graphic, n, &mut rng);
        m.reset_oracle_calls();
        let ground = m.ground().elements().to_vec();
        m.max_independent_subset(&ground);
        prop_assert_eq!(m.oracle_calls(), ground.len() as u64);
    }
}
