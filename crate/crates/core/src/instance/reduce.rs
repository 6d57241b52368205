use super::ParityInstance;
use crate::error::{Error, Result};
use crate::matroid::{GroundSet, Matroid};
use crate::scalar::Scalar;

/// Casts a k-matroid intersection instance as a matroid k-parity instance.
///
/// Vertex `i * n + x` is the `i`-th copy of element `x`; edge `x` spans the
/// `k` copies of `x` and carries `weights[x]`. The matroid is the union of
/// the per-copy matroids, so edge sets correspond to common independent sets
/// with the same ids and weight.
pub fn from_matroid_intersection<W: Scalar>(
    matroids: &[Matroid],
    weights: Vec<W>,
) -> Result<ParityInstance<W>> {
    let first = matroids
        .first()
        .ok_or_else(|| Error::InvalidInstance("need at least one matroid".into()))?;
    let n = first.len();
    for m in matroids {
        if *m.ground() != GroundSet::range(n) {
            return Err(Error::InvalidInstance(
                "matroids must share the ground set 0..n".into(),
            ));
        }
    }
    if weights.len() != n {
        return Err(Error::InvalidInstance(format!(
            "{} weights for {n} elements",
            weights.len()
        )));
    }
    let k = matroids.len();
    let copies: Vec<Matroid> = matroids
        .iter()
        .enumerate()
        .map(|(i, m)| m.shifted(i * n))
        .collect();
    let union = Matroid::union(&copies)?;
    let edges = (0..n).map(|x| (0..k).map(|i| i * n + x).collect()).collect();
    ParityInstance::new(k, k * n, edges, weights, union)
}

/// Rewrites an instance so that every vertex lies in exactly one edge.
///
/// Vertex `v` of degree `d` becomes `d` copies, one per incident edge. A set
/// of copies is independent when it uses at most one copy of each original
/// vertex and the originals are independent. Edge ids and weights are
/// unchanged, so feasible edge sets and the optimum are preserved. Already
/// disjoint instances are returned as they are.
pub fn make_disjoint<W: Scalar>(raw: &ParityInstance<W>) -> ParityInstance<W> {
    if raw.is_disjoint() {
        return raw.clone();
    }
    let mut origin = Vec::new();
    let edges: Vec<Vec<usize>> = raw
        .edges()
        .iter()
        .map(|edge| {
            edge.iter()
                .map(|&v| {
                    origin.push(v);
                    origin.len() - 1
                })
                .collect()
        })
        .collect();
    let matroid = Matroid::copy_cap(raw.matroid(), origin).expect("origins are base vertices");
    ParityInstance::new(
        raw.k(),
        matroid.len(),
        edges,
        raw.weights().to_vec(),
        matroid,
    )
    .expect("rewired edges keep their arity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn intersection_copies_are_laid_out_by_matroid() {
        let a = Matroid::uniform(3, 1);
        let b = Matroid::free(3);
        let inst = from_matroid_intersection(&[a, b], vec![r(1), r(2), r(3)]).unwrap();
        assert_eq!(inst.k(), 2);
        assert_eq!(inst.vertex_count(), 6);
        assert_eq!(inst.edge(1), &[1, 4]);
        assert!(inst.is_disjoint());
        assert!(inst.is_feasible(&[2]).unwrap());
        assert!(!inst.is_feasible(&[0, 2]).unwrap());
    }

    #[test]
    fn intersection_rejects_mismatched_grounds() {
        let err = from_matroid_intersection(
            &[Matroid::free(3), Matroid::free(4)],
            vec![r(1), r(1), r(1)],
        );
        assert!(err.is_err());
        assert!(from_matroid_intersection::<Rational>(&[], vec![]).is_err());
    }

    #[test]
    fn disjoint_input_is_unchanged() {
        let inst = ParityInstance::new(
            2,
            4,
            vec![vec![0, 1], vec![2, 3]],
            vec![r(1), r(2)],
            Matroid::uniform(4, 3),
        )
        .unwrap();
        let out = make_disjoint(&inst);
        assert_eq!(out.edges(), inst.edges());
        assert_eq!(out.matroid().kind_name(), "uniform");
    }

    #[test]
    fn star_allows_one_edge() {
        // three edges through vertex 0
        let inst = ParityInstance::new(
            2,
            4,
            vec![vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![r(1), r(1), r(1)],
            Matroid::free(4),
        )
        .unwrap();
        let out = make_disjoint(&inst);
        assert!(out.is_disjoint());
        assert_eq!(out.vertex_count(), 6);
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert!(!inst.is_feasible(&pair).unwrap());
            assert!(!out.is_feasible(&pair).unwrap());
        }
        for single in 0..3 {
            assert!(out.is_feasible(&[single]).unwrap());
        }
    }
}
