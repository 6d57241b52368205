//! Seeded instance families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{from_matroid_intersection, make_disjoint, ParityInstance};
use crate::error::{Error, Result};
use crate::matroid::Matroid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `edges` random sets of size at most `k` over `vertices` vertices, free
    /// matroid; overlaps are normalized away.
    RandomKSetPacking {
        edges: usize,
        k: usize,
        vertices: usize,
    },
    /// `k` random partition matroids over `elements` elements with `blocks`
    /// blocks each, reduced to a parity instance.
    RandomKMiPartition {
        elements: usize,
        k: usize,
        blocks: usize,
    },
    /// Graphic matroid of a random multigraph whose edges are grouped into
    /// disjoint hyperedges of at most `k` graph edges.
    GraphicParity {
        graph_vertices: usize,
        graph_edges: usize,
        k: usize,
    },
    /// One edge of weight 1 that blocks `k` edges of weight `1 - rho`, which
    /// are compatible with each other. Greedy takes the heavy edge; the
    /// optimum is the `k` light edges.
    GreedyTrap {
        k: usize,
        #[serde(with = "crate::scalar::ratio_string")]
        rho: BigRational,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::RandomKSetPacking { .. } => "random-k-set-packing",
            Family::RandomKMiPartition { .. } => "random-k-mi-partition",
            Family::GraphicParity { .. } => "graphic-parity",
            Family::GreedyTrap { .. } => "greedy-trap",
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            Family::RandomKSetPacking { edges, k, vertices } => {
                if *edges == 0 || *k == 0 || vertices < k {
                    return bad(format!(
                        "random-k-set-packing needs edges >= 1, k >= 1, vertices >= k (got {edges}, {k}, {vertices})"
                    ));
                }
            }
            Family::RandomKMiPartition {
                elements,
                k,
                blocks,
            } => {
                if *elements == 0 || *k == 0 || *blocks == 0 {
                    return bad("random-k-mi-partition needs elements, k, blocks >= 1".into());
                }
            }
            Family::GraphicParity {
                graph_vertices,
                graph_edges,
                k,
            } => {
                if *graph_vertices < 2 || *graph_edges == 0 || *k == 0 {
                    return bad(
                        "graphic-parity needs graph_vertices >= 2, graph_edges >= 1, k >= 1"
                            .into(),
                    );
                }
            }
            Family::GreedyTrap { k, rho } => {
                let limit = BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(*k));
                if *k < 2 || *rho < BigRational::zero() || *rho >= limit {
                    return bad(format!(
                        "greedy-trap needs k >= 2 and 0 <= rho < 1 - 1/k (got k={k}, rho={rho})"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Weights are multiples of 1/100 in `[0, 1]`; about one edge in twenty
/// weighs zero.
fn random_weight<R: Rng>(rng: &mut R) -> BigRational {
    let cents = if rng.gen_bool(0.05) {
        0
    } else {
        rng.gen_range(1..=100)
    };
    BigRational::new(BigInt::from(cents), BigInt::from(100))
}

/// Deterministic instance for `(family, seed)`, in disjoint normal form.
pub fn generate(family: &Family, seed: u64) -> Result<ParityInstance<BigRational>> {
    family.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::RandomKSetPacking { edges, k, vertices } => {
            let pool: Vec<usize> = (0..*vertices).collect();
            let min_size = k.div_ceil(2);
            let sets: Vec<Vec<usize>> = (0..*edges)
                .map(|_| {
                    let size = rng.gen_range(min_size..=*k);
                    pool.choose_multiple(&mut rng, size).copied().collect()
                })
                .collect();
            let weights = (0..*edges).map(|_| random_weight(&mut rng)).collect();
            let raw = ParityInstance::new(*k, *vertices, sets, weights, Matroid::free(*vertices))?;
            Ok(make_disjoint(&raw))
        }
        Family::RandomKMiPartition {
            elements,
            k,
            blocks,
        } => {
            let matroids = (0..*k)
                .map(|_| {
                    let mut parts = vec![Vec::new(); *blocks];
                    for x in 0..*elements {
                        parts[rng.gen_range(0..*blocks)].push(x);
                    }
                    parts.retain(|p| !p.is_empty());
                    let caps = parts.iter().map(|p| rng.gen_range(1..=p.len().min(2))).collect();
                    Matroid::partition(parts, caps)
                })
                .collect::<Result<Vec<_>>>()?;
            let weights = (0..*elements).map(|_| random_weight(&mut rng)).collect();
            from_matroid_intersection(&matroids, weights)
        }
        Family::GraphicParity {
            graph_vertices,
            graph_edges,
            k,
        } => {
            let edges: Vec<(usize, usize)> = (0..*graph_edges)
                .map(|_| {
                    let u = rng.gen_range(0..*graph_vertices);
                    let mut v = rng.gen_range(0..graph_vertices - 1);
                    if v >= u {
                        v += 1;
                    }
                    (u, v)
                })
                .collect();
            let matroid = Matroid::graphic(*graph_vertices, edges)?;
            let mut order: Vec<usize> = (0..*graph_edges).collect();
            order.shuffle(&mut rng);
            let mut hyperedges = Vec::new();
            let mut rest = order.as_slice();
            while !rest.is_empty() {
                let size = rng.gen_range(1..=(*k).min(rest.len()));
                let (head, tail) = rest.split_at(size);
                hyperedges.push(head.to_vec());
                rest = tail;
            }
            let weights = hyperedges.iter().map(|_| random_weight(&mut rng)).collect();
            ParityInstance::new(*k, *graph_edges, hyperedges, weights, matroid)
        }
        Family::GreedyTrap { k, rho } => greedy_trap(*k, rho),
    }
}

fn greedy_trap(k: usize, rho: &BigRational) -> Result<ParityInstance<BigRational>> {
    // heavy vertices 0..k; light edge j owns k + j*k .. k + (j+1)*k and its
    // first vertex shares a capacity-1 block with heavy vertex j
    let light_start = |j: usize| k + j * k;
    let mut blocks = Vec::new();
    for j in 0..k {
        blocks.push(vec![j, light_start(j)]);
        for t in 1..k {
            blocks.push(vec![light_start(j) + t]);
        }
    }
    let capacities = vec![1; blocks.len()];
    let matroid = Matroid::partition(blocks, capacities)?;
    let mut edges = vec![(0..k).collect::<Vec<_>>()];
    let mut weights = vec![BigRational::one()];
    for j in 0..k {
        edges.push((light_start(j)..light_start(j) + k).collect());
        weights.push(BigRational::one() - rho);
    }
    ParityInstance::new(k, k + k * k, edges, weights, matroid)
}
