#![allow(dead_code)]

use mpls::instance::Family;
use mpls::{Matroid, ParityInstance, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(text: &str) -> Rational {
    mpls::scalar::parse_ratio(text).unwrap()
}

/// A small random family with rank `k`, at most 10 edges, from `pick`.
pub fn small_family(k: usize, pick: u64) -> Family {
    let mut rng = ChaCha8Rng::seed_from_u64(pick ^ 0x5eed);
    match pick % 3 {
        0 => Family::RandomKSetPacking {
            edges: rng.gen_range(4..=10),
            k,
            vertices: rng.gen_range(k + 2..=3 * k),
        },
        1 => Family::RandomKMiPartition {
            elements: rng.gen_range(4..=10),
            k,
            blocks: rng.gen_range(2..=5),
        },
        _ => Family::GraphicParity {
            graph_vertices: rng.gen_range(3..=6),
            graph_edges: rng.gen_range(k..=10),
            k,
        },
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Optimum of a k-matroid intersection by enumerating element subsets.
pub fn kmi_optimum(matroids: &[Matroid], weights: &[Rational]) -> Rational {
    let n = weights.len();
    subsets(n)
        .filter(|set| matroids.iter().all(|m| m.is_independent(set).unwrap()))
        .map(|set| set.iter().map(|&x| weights[x].clone()).sum())
        .max()
        .unwrap()
}

/// Optimum of an instance that may have overlapping edges, by enumerating
/// edge subsets and checking disjointness and independence directly.
pub fn raw_optimum(instance: &ParityInstance<Rational>) -> Rational {
    subsets(instance.edge_count())
        .filter(|set| {
            let mut vertices: Vec<usize> = set.iter().flat_map(|&e| instance.edge(e).to_vec()).collect();
            let len = vertices.len();
            vertices.sort_unstable();
            vertices.dedup();
            vertices.len() == len && instance.matroid().is_independent(&vertices).unwrap()
        })
        .map(|set| set.iter().map(|&e| instance.weight(e).clone()).sum())
        .max()
        .unwrap()
}

/// Forest test by repeated leaf stripping.
pub fn is_forest(vertices: usize, edges: &[(usize, usize)]) -> bool {
    if edges.iter().any(|(u, v)| u == v) {
        return false;
    }
    let mut alive: Vec<bool> = vec![true; edges.len()];
    loop {
        let mut degree = vec![0; vertices];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if alive[i] {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        let leaf = edges
            .iter()
            .enumerate()
            .find(|&(i, &(u, v))| alive[i] && (degree[u] == 1 || degree[v] == 1));
        match leaf {
            Some((i, _)) => alive[i] = false,
            None => return !alive.iter().any(|&a| a),
        }
    }
}

/// Rank of integer columns over GF(p) by elimination on a dense copy.
pub fn gf_rank(p: i64, columns: &[Vec<i64>]) -> usize {
    let Some(rows) = columns.first().map(|c| c.len()) else {
        return 0;
    };
    let mut a: Vec<Vec<i64>> = (0..rows)
        .map(|r| columns.iter().map(|c| c[r].rem_euclid(p)).collect())
        .collect();
    let inverse = |x: i64| (1..p).find(|y| x * y % p == 1).unwrap();
    let mut rank = 0;
    for col in 0..columns.len() {
        let Some(pivot) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = inverse(a[rank][col]);
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}
