//! Matroid k-parity instances and feasible solutions.

mod generate;
mod io;
mod reduce;

use std::collections::HashMap;

use num_rational::BigRational;

pub use generate::{generate, Family};
pub use io::InstanceFile;
pub use reduce::{from_matroid_intersection, make_disjoint};

use crate::error::{Error, Result};
use crate::matroid::{GroundSet, Matroid};
use crate::scalar::{self, Scalar};

/// Weighted hypergraph on the ground set of a matroid.
///
/// Vertices are `0..vertex_count` and the matroid's ground set is exactly
/// that range. Edges are identified by their index.
#[derive(Clone, Debug)]
pub struct ParityInstance<W> {
    k: usize,
    vertex_count: usize,
    edges: Vec<Vec<usize>>,
    weights: Vec<W>,
    matroid: Matroid,
}

impl<W: Scalar> ParityInstance<W> {
    pub fn new(
        k: usize,
        vertex_count: usize,
        edges: Vec<Vec<usize>>,
        weights: Vec<W>,
        matroid: Matroid,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInstance("arity bound k must be at least 1".into()));
        }
        if edges.len() != weights.len() {
            return Err(Error::InvalidInstance(format!(
                "{} edges but {} weights",
                edges.len(),
                weights.len()
            )));
        }
        if *matroid.ground() != GroundSet::range(vertex_count) {
            return Err(Error::InvalidInstance(format!(
                "matroid ground set has {} elements, expected 0..{vertex_count}",
                matroid.len()
            )));
        }
        let mut edges = edges;
        for (id, edge) in edges.iter_mut().enumerate() {
            edge.sort_unstable();
            if edge.is_empty() || edge.len() > k {
                return Err(Error::InvalidInstance(format!(
                    "edge {id} has {} vertices, expected 1..={k}",
                    edge.len()
                )));
            }
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInstance(format!("edge {id} repeats a vertex")));
            }
            if let Some(&v) = edge.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::InvalidInstance(format!(
                    "edge {id} uses vertex {v} outside 0..{vertex_count}"
                )));
            }
        }
        if let Some(id) = weights.iter().position(|w| !w.is_valid_weight()) {
            return Err(Error::InvalidInstance(format!(
                "edge {id} has invalid weight {}",
                weights[id]
            )));
        }
        Ok(Self {
            k,
            vertex_count,
            edges,
            weights,
            matroid,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &[usize] {
        &self.edges[id]
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn weight(&self, id: usize) -> &W {
        &self.weights[id]
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    /// Total weight of a set of edges.
    pub fn weight_of(&self, edges: &[usize]) -> W {
        scalar::sum(edges.iter().map(|&e| self.weights[e].clone()))
    }

    /// `v(edges)`, the incident vertices, in edge order.
    pub fn vertices_of(&self, edges: &[usize]) -> Vec<usize> {
        edges
            .iter()
            .flat_map(|&e| self.edges[e].iter().copied())
            .collect()
    }

    /// `true` when every vertex lies in at most one edge.
    pub fn is_disjoint(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        self.edges
            .iter()
            .flatten()
            .all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    /// Feasibility of a set of edge ids: pairwise disjoint edges whose
    /// vertices are independent.
    pub fn is_feasible(&self, chosen: &[usize]) -> Result<bool> {
        let mut sorted = chosen.to_vec();
        sorted.sort_unstable();
        if let Some(&e) = sorted.iter().find(|&&e| e >= self.edges.len()) {
            return Err(Error::UnknownEdge(e));
        }
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Precondition(format!("edge {} listed twice", w[0])));
        }
        Ok(self.feasible_trusted(chosen))
    }

    /// Feasibility without id validation. One oracle call when the edges are
    /// disjoint, none otherwise.
    pub fn feasible_trusted(&self, chosen: &[usize]) -> bool {
        let vertices = self.vertices_of(chosen);
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        self.matroid.independent_trusted(&vertices)
    }

    /// Wraps a set of edge ids as a [`Solution`], checking feasibility.
    pub fn solution(&self, chosen: &[usize]) -> Result<Solution<W>> {
        if !self.is_feasible(chosen)? {
            return Err(Error::Precondition("edge set is not feasible".into()));
        }
        Ok(Solution::new_unchecked(self, chosen.to_vec()))
    }

    /// Maximum weight of an edge that is feasible on its own, or `None`
    /// when no edge is.
    pub fn max_feasible_weight(&self) -> Option<W> {
        let mut best: Option<W> = None;
        for (id, w) in self.weights.iter().enumerate() {
            if self.feasible_trusted(&[id]) && best.as_ref().is_none_or(|b| w > b) {
                best = Some(w.clone());
            }
        }
        best
    }

    /// Same instance with transformed weights.
    pub fn map_weights<V: Scalar>(&self, mut f: impl FnMut(&W) -> V) -> Result<ParityInstance<V>> {
        let weights = self.weights.iter().map(&mut f).collect();
        ParityInstance::new(
            self.k,
            self.vertex_count,
            self.edges.clone(),
            weights,
            self.matroid.clone(),
        )
    }

    /// Same instance with exact rational weights.
    pub fn to_rational(&self) -> ParityInstance<BigRational> {
        self.map_weights(Scalar::to_ratio)
            .expect("rational image of a valid instance is valid")
    }
}

/// A feasible collection of disjoint edges, sorted by id.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<W> {
    chosen: Vec<usize>,
    total_weight: W,
}

impl<W: Scalar> Solution<W> {
    pub fn empty() -> Self {
        Self {
            chosen: Vec::new(),
            total_weight: W::zero(),
        }
    }

    pub(crate) fn new_unchecked(instance: &ParityInstance<W>, mut chosen: Vec<usize>) -> Self {
        chosen.sort_unstable();
        let total_weight = instance.weight_of(&chosen);
        Self {
            chosen,
            total_weight,
        }
    }

    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub fn total_weight(&self) -> &W {
        &self.total_weight
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.chosen.binary_search(&edge).is_ok()
    }

    /// Re-reads the weights of the same edge ids from another instance, used
    /// to report a solution of a scaled instance in original weights.
    pub fn reweighted<V: Scalar>(&self, instance: &ParityInstance<V>) -> Solution<V> {
        Solution::new_unchecked(instance, self.chosen.clone())
    }
}

/// Cost of each vertex of `v(A)`: the weight of the edge of `A` covering it.
#[derive(Clone, Debug)]
pub struct VertexCost<W> {
    cost: HashMap<usize, W>,
}

impl<W: Scalar> VertexCost<W> {
    pub fn new(instance: &ParityInstance<W>, chosen: &[usize]) -> Result<Self> {
        let mut cost = HashMap::new();
        for &e in chosen {
            if e >= instance.edge_count() {
                return Err(Error::UnknownEdge(e));
            }
            for &v in instance.edge(e) {
                if cost.insert(v, instance.weight(e).clone()).is_some() {
                    return Err(Error::Precondition(format!(
                        "vertex {v} is covered twice"
                    )));
                }
            }
        }
        Ok(Self { cost })
    }

    pub fn of_vertex(&self, v: usize) -> Option<&W> {
        self.cost.get(&v)
    }

    /// `c(S)`; errors on vertices outside `v(A)`.
    pub fn of_set(&self, vertices: &[usize]) -> Result<W> {
        let mut total = W::zero();
        for v in vertices {
            let c = self
                .cost
                .get(v)
                .ok_or_else(|| Error::Precondition(format!("vertex {v} is not covered")))?;
            total = total + c.clone();
        }
        Ok(total)
    }
}
