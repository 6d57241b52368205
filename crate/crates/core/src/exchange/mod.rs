//! Exhaustive finders and checkers for matroid exchanges and for the
//! conflict structure between a local optimum and an optimum.

mod conflict;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

pub use conflict::{
    bad_probability_bound, build_conflict_trace, estimate_bad_probability, BadEstimate, Category, ConflictInvariants, ConflictTrace,
    EdgeClass,
};

use crate::error::{Error, Result};
use crate::instance::ParityInstance;
use crate::matroid::random::{random_independent, random_matroid, RandomFamily};
use crate::matroid::Matroid;
use crate::solver::SwapMove;

/// Default cap on search nodes for one exchange search.
pub const SEARCH_BUDGET: u64 = 1 << 22;

/// Parts `T_1..T_m` of `T` matched to a partition `S_1..S_m` of `S` with
/// `|S_i| = |T_i|` and every `S_i ∪ (T \ T_i)` independent.
#[derive(Clone, Debug, Serialize)]
pub struct ExchangeCertificate {
    pub s_parts: Vec<Vec<usize>>,
    pub t: Vec<usize>,
    pub t_parts: Vec<Vec<usize>>,
    #[serde(skip)]
    pub matroid: Matroid,
}

impl ExchangeCertificate {
    /// Re-checks every property with fresh oracle calls.
    pub fn check(&self) -> bool {
        if self.s_parts.len() != self.t_parts.len() {
            return false;
        }
        let mut used = Vec::new();
        for (s_i, t_i) in self.s_parts.iter().zip(&self.t_parts) {
            if s_i.len() != t_i.len() || t_i.iter().any(|e| !self.t.contains(e) || used.contains(e)) {
                return false;
            }
            used.extend_from_slice(t_i);
            if !self.matroid.is_independent(&exchanged(s_i, &self.t, t_i)).unwrap_or(false) {
                return false;
            }
        }
        true
    }
}

/// `S_i ∪ (T \ T_i)` without repeats.
fn exchanged(s_i: &[usize], t: &[usize], t_i: &[usize]) -> Vec<usize> {
    let mut set: Vec<usize> = t.iter().copied().filter(|e| !t_i.contains(e)).collect();
    for &e in s_i {
        if !set.contains(&e) {
            set.push(e);
        }
    }
    set
}

fn check_independent(m: &Matroid, set: &[usize], name: &str) -> Result<()> {
    if !m.is_independent(set)? {
        return Err(Error::Precondition(format!("{name} is not independent")));
    }
    Ok(())
}

struct Search<'a> {
    m: &'a Matroid,
    parts: &'a [Vec<usize>],
    t: &'a [usize],
    chosen: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// One part: extend `S` greedily by elements of `T`; whatever of `T`
    /// does not fit (topped up to `|S|`) is the exchanged part.
    fn single(&mut self) -> Vec<usize> {
        let s = &self.parts[0];
        let mut basis = s.clone();
        let mut kept = Vec::new();
        let mut dropped = Vec::new();
        for &e in self.t {
            if s.contains(&e) {
                kept.push(e);
                continue;
            }
            basis.push(e);
            if self.m.independent_trusted(&basis) {
                kept.push(e);
            } else {
                basis.pop();
                dropped.push(e);
            }
        }
        while dropped.len() < s.len() {
            let e = kept.pop().expect("|S| <= |T|");
            dropped.push(e);
        }
        dropped.sort_unstable();
        dropped
    }

    fn go(&mut self, part: usize) -> Result<bool> {
        if part == 0 && self.parts.len() == 1 {
            let t_1 = self.single();
            self.chosen.push(t_1);
            return Ok(true);
        }
        if part == self.parts.len() {
            return Ok(true);
        }
        let used: Vec<usize> = self.chosen.iter().flatten().copied().collect();
        let free: Vec<usize> = self.t.iter().copied().filter(|e| !used.contains(e)).collect();
        let s_i = &self.parts[part];
        for t_i in free.into_iter().combinations(s_i.len()) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::TooLarge {
                    size: self.nodes as usize,
                    limit: self.budget as usize,
                });
            }
            if !self.m.independent_trusted(&exchanged(s_i, self.t, &t_i)) {
                continue;
            }
            self.chosen.push(t_i);
            if self.go(part + 1)? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}

/// Search for a certificate. A single part is matched by greedy
/// augmentation; otherwise parts are matched in order by backtracking, with
/// candidate `T_i` tried lexicographically.
pub fn find_rota_exchange(m: &Matroid, s_parts: &[Vec<usize>], t: &[usize]) -> Result<Option<ExchangeCertificate>> {
    find_rota_exchange_within(m, s_parts, t, SEARCH_BUDGET)
}

pub fn find_rota_exchange_within(
    m: &Matroid,
    s_parts: &[Vec<usize>],
    t: &[usize],
    budget: u64,
) -> Result<Option<ExchangeCertificate>> {
    let s: Vec<usize> = s_parts.iter().flatten().copied().collect();
    check_independent(m, &s, "S")?;
    check_independent(m, t, "T")?;
    if s.len() > t.len() {
        return Err(Error::Precondition(format!("|S| = {} exceeds |T| = {}", s.len(), t.len())));
    }
    let mut search = Search {
        m,
        parts: s_parts,
        t,
        chosen: Vec::new(),
        nodes: 0,
        budget,
    };
    if !search.go(0)? {
        return Ok(None);
    }
    Ok(Some(ExchangeCertificate {
        s_parts: s_parts.to_vec(),
        t: t.to_vec(),
        t_parts: search.chosen,
        matroid: m.clone(),
    }))
}

/// Splits `N_S` into parts `N_{S_i}` with `S_i ∪ (T \ N_{S_i})` independent,
/// by an exchange search in `M` contracted on `T \ N_S`. Requires `S` to
/// avoid `T \ N_S`.
pub fn refine_laminar(
    m: &Matroid,
    s_parts: &[Vec<usize>],
    t: &[usize],
    n_s: &[usize],
) -> Result<ExchangeCertificate> {
    let s: Vec<usize> = s_parts.iter().flatten().copied().collect();
    check_independent(m, &s, "S")?;
    check_independent(m, t, "T")?;
    if n_s.iter().any(|e| !t.contains(e)) || n_s.iter().duplicates().next().is_some() {
        return Err(Error::Precondition("N_S must be a subset of T".into()));
    }
    if n_s.len() != s.len() {
        return Err(Error::Precondition(format!("|N_S| = {} but |S| = {}", n_s.len(), s.len())));
    }
    let rest: Vec<usize> = t.iter().copied().filter(|e| !n_s.contains(e)).collect();
    if s.iter().any(|e| rest.contains(e)) {
        return Err(Error::Precondition("S meets T \\ N_S".into()));
    }
    check_independent(m, &exchanged(&s, t, n_s), "S ∪ (T \\ N_S)")?;
    let contracted = m.contract(&rest)?;
    let found = find_rota_exchange(&contracted, s_parts, n_s)?
        .ok_or_else(|| Error::Precondition("no laminar refinement exists".into()))?;
    Ok(ExchangeCertificate {
        s_parts: found.s_parts,
        t: t.to_vec(),
        t_parts: found.t_parts,
        matroid: m.clone(),
    })
}

/// A random matroid on at most `max_ground` elements with independent
/// `S`, `T`, `|S| <= |T|`, and a random partition of `S`.
pub fn random_exchange_case<R: Rng + ?Sized>(
    max_ground: usize,
    rng: &mut R,
) -> (Matroid, Vec<Vec<usize>>, Vec<usize>) {
    let family = *RandomFamily::ALL.choose(rng).expect("nonempty");
    let n = rng.gen_range(1..=max_ground.max(1));
    let m = random_matroid(family, n, rng);
    let t = random_independent(&m, n, rng);
    let s_len = rng.gen_range(0..=t.len());
    let s = random_independent(&m, s_len, rng);
    let part_count = rng.gen_range(1..=s.len().max(1));
    let mut parts = vec![Vec::new(); part_count];
    for e in s {
        parts[rng.gen_range(0..part_count)].push(e);
    }
    parts.retain(|p| !p.is_empty());
    (m, parts, t)
}

/// Two feasible swaps on graphic `K4` whose union is infeasible.
#[derive(Clone, Debug)]
pub struct K4Witness {
    pub instance: ParityInstance<i64>,
    pub base: Vec<usize>,
    pub first: SwapMove<i64>,
    pub second: SwapMove<i64>,
}

impl K4Witness {
    /// `(A \ N) ∪ S` for the given removal and insertion sets.
    pub fn apply(&self, add: &[usize], remove: &[usize]) -> Vec<usize> {
        let mut set: Vec<usize> = self.base.iter().copied().filter(|e| !remove.contains(e)).collect();
        set.extend_from_slice(add);
        set.sort_unstable();
        set
    }

    pub fn union(&self) -> (Vec<usize>, Vec<usize>) {
        let add = [self.first.add.clone(), self.second.add.clone()].concat();
        let remove = [self.first.remove.clone(), self.second.remove.clone()].concat();
        (add, remove)
    }
}

/// The `K4` edges in a fixed order.
pub const K4_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Searches every spanning tree `A` of `K4` and pairs of swaps (`|S| <= 2`,
/// `|N| <= 2`) with disjoint insertion and removal sets; returns the first
/// pair whose union is infeasible.
pub fn k4_non_composability_witness() -> K4Witness {
    let matroid = Matroid::graphic(4, K4_EDGES.to_vec()).expect("K4 is a valid graph");
    let edges = (0..6).map(|e| vec![e]).collect();
    let instance = ParityInstance::new(1, 6, edges, vec![1i64; 6], matroid).expect("valid instance");
    let subsets = |items: &[usize]| -> Vec<Vec<usize>> {
        (0..=items.len())
            .flat_map(|r| items.iter().copied().combinations(r))
            .collect()
    };
    for a_mask in 0u32..64 {
        let base: Vec<usize> = (0..6).filter(|e| a_mask >> e & 1 == 1).collect();
        if base.len() != 3 || !instance.feasible_trusted(&base) {
            continue;
        }
        let outside: Vec<usize> = (0..6).filter(|e| !base.contains(e)).collect();
        let apply = |add: &[usize], remove: &[usize]| {
            let mut set: Vec<usize> = base.iter().copied().filter(|e| !remove.contains(e)).collect();
            set.extend_from_slice(add);
            set
        };
        let mut swaps = Vec::new();
        for add in subsets(&outside).into_iter().filter(|s| (1..=2).contains(&s.len())) {
            for remove in subsets(&base).into_iter().filter(|n| n.len() <= 2) {
                if instance.feasible_trusted(&apply(&add, &remove)) {
                    swaps.push((add.clone(), remove));
                }
            }
        }
        for (i, (s1, t1)) in swaps.iter().enumerate() {
            for (s2, t2) in &swaps[i + 1..] {
                if s1.iter().any(|e| s2.contains(e)) || t1.iter().any(|e| t2.contains(e)) {
                    continue;
                }
                let add = [s1.clone(), s2.clone()].concat();
                let remove = [t1.clone(), t2.clone()].concat();
                if !instance.feasible_trusted(&apply(&add, &remove)) {
                    let make = |add: &Vec<usize>, remove: &Vec<usize>| SwapMove {
                        add: add.clone(),
                        remove: remove.clone(),
                        gain: add.len() as i64 - remove.len() as i64,
                    };
                    return K4Witness {
                        first: make(s1, t1),
                        second: make(s2, t2),
                        base,
                        instance,
                    };
                }
            }
        }
    }
    unreachable!("K4 always has a non-composable pair of swaps")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn trivial_partition() {
        let m = Matroid::uniform(4, 2);
        let cert = find_rota_exchange(&m, &[vec![0, 1]], &[2, 3]).unwrap().unwrap();
        assert!(cert.check());
        assert_eq!(cert.t_parts, vec![vec![2, 3]]);
    }

    #[test]
    fn k4_spanning_trees_singleton_parts() {
        let m = Matroid::graphic(4, K4_EDGES.to_vec()).unwrap();
        // {01, 12, 23} and {02, 03, 13} are edge-disjoint spanning trees
        let s = [vec![0], vec![3], vec![5]];
        let t = [1, 2, 4];
        let cert = find_rota_exchange(&m, &s, &t).unwrap().unwrap();
        assert!(cert.check());
        let mut all: Vec<usize> = cert.t_parts.concat();
        all.sort_unstable();
        assert_eq!(all, t);
    }

    #[test]
    fn rejects_dependent_input() {
        let m = Matroid::uniform(3, 1);
        assert!(matches!(
            find_rota_exchange(&m, &[vec![0, 1]], &[2]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn certificate_check_catches_tampering() {
        let m = Matroid::uniform(4, 2);
        let mut cert = find_rota_exchange(&m, &[vec![0], vec![1]], &[2, 3]).unwrap().unwrap();
        cert.t_parts[1] = cert.t_parts[0].clone();
        assert!(!cert.check());
    }

    #[test]
    fn laminar_single_part_is_n_s() {
        let m = Matroid::uniform(5, 3);
        let cert = refine_laminar(&m, &[vec![0, 1]], &[2, 3, 4], &[3, 4]).unwrap();
        assert_eq!(cert.t_parts, vec![vec![3, 4]]);
        assert!(cert.check());
    }

    #[test]
    fn laminar_rejects_bad_n_s() {
        let m = Matroid::uniform(5, 3);
        assert!(refine_laminar(&m, &[vec![0]], &[2, 3, 4], &[3, 4]).is_err());
        assert!(refine_laminar(&m, &[vec![0]], &[2, 3, 4], &[1]).is_err());
    }

    #[test]
    fn random_cases_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (m, parts, t) = random_exchange_case(7, &mut rng);
            let s: Vec<usize> = parts.concat();
            assert!(m.is_independent(&s).unwrap());
            assert!(m.is_independent(&t).unwrap());
            assert!(s.len() <= t.len());
            assert!(m.len() <= 7);
        }
    }

    #[test]
    fn k4_witness() {
        let w = k4_non_composability_witness();
        assert!(w.instance.edge_count() <= 6);
        assert!(w.instance.is_feasible(&w.apply(&w.first.add, &w.first.remove)).unwrap());
        assert!(w.instance.is_feasible(&w.apply(&w.second.add, &w.second.remove)).unwrap());
        let (add, remove) = w.union();
        assert!(!w.instance.is_feasible(&w.apply(&add, &remove)).unwrap());
    }
}
