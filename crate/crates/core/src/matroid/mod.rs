//! Independence oracles.
//!
//! A [`Matroid`] is an immutable handle over a shared oracle node. Every
//! combinator returns a new handle that references its base, so cloning and
//! sharing across threads is cheap. Each handle carries an atomic counter of
//! the independence queries answered through it.

mod descriptor;
mod linear;
pub mod random;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

pub use descriptor::MatroidDescriptor;
use linear::LinearMatrix;

use crate::error::{Error, Result};

/// Ordered set of element identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    elements: Vec<usize>,
}

impl GroundSet {
    /// The contiguous ground set `0..n`.
    pub fn range(n: usize) -> Self {
        Self {
            elements: (0..n).collect(),
        }
    }

    pub fn from_elements(elements: impl IntoIterator<Item = usize>) -> Self {
        let mut elements: Vec<usize> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        Self { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.elements.binary_search(&element).is_ok()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements.iter().copied()
    }

    /// `true` when the identifiers are exactly `0..len`.
    pub fn is_contiguous(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, &e)| i == e)
    }
}

#[derive(Debug)]
enum Kind {
    Free,
    Uniform {
        rank: usize,
    },
    Partition {
        blocks: Vec<Vec<usize>>,
        capacities: Vec<usize>,
        block_of: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Linear(LinearMatrix),
    Shifted {
        base: Matroid,
        offset: usize,
    },
    Restricted {
        base: Matroid,
    },
    Contracted {
        base: Matroid,
        away: Vec<usize>,
    },
    Union {
        parts: Vec<Matroid>,
        owner: HashMap<usize, usize>,
    },
    CopyCap {
        base: Matroid,
        origin: Vec<usize>,
    },
    Coloops {
        base: Matroid,
    },
}

#[derive(Debug)]
struct Node {
    ground: GroundSet,
    kind: Kind,
}

impl Node {
    // Elements are trusted to lie in the ground set and be distinct.
    fn independent(&self, set: &[usize]) -> bool {
        match &self.kind {
            Kind::Free => true,
            Kind::Uniform { rank } => set.len() <= *rank,
            Kind::Partition {
                capacities,
                block_of,
                ..
            } => {
                let mut used = vec![0usize; capacities.len()];
                set.iter().all(|&e| {
                    let b = block_of[e];
                    used[b] += 1;
                    used[b] <= capacities[b]
                })
            }
            Kind::Graphic { vertices, edges } => {
                let mut forest = UnionFind::<usize>::new(*vertices);
                set.iter().all(|&e| {
                    let (u, v) = edges[e];
                    forest.union(u, v)
                })
            }
            Kind::Linear(matrix) => matrix.columns_independent(set),
            Kind::Shifted { base, offset } => {
                let local: Vec<usize> = set.iter().map(|&e| e - offset).collect();
                base.node.independent(&local)
            }
            Kind::Restricted { base } => base.node.independent(set),
            Kind::Contracted { base, away } => {
                let mut full = Vec::with_capacity(set.len() + away.len());
                full.extend_from_slice(set);
                full.extend_from_slice(away);
                base.node.independent(&full)
            }
            Kind::Union { parts, owner } => {
                let mut split = vec![Vec::new(); parts.len()];
                for &e in set {
                    split[owner[&e]].push(e);
                }
                parts
                    .iter()
                    .zip(&split)
                    .all(|(part, members)| part.node.independent(members))
            }
            Kind::CopyCap { base, origin } => {
                let mut projected: Vec<usize> = set.iter().map(|&e| origin[e]).collect();
                projected.sort_unstable();
                let before = projected.len();
                projected.dedup();
                projected.len() == before && base.node.independent(&projected)
            }
            Kind::Coloops { base } => {
                let inner: Vec<usize> = set
                    .iter()
                    .copied()
                    .filter(|&e| base.node.ground.contains(e))
                    .collect();
                base.node.independent(&inner)
            }
        }
    }

    fn kind_name(&self) -> &'static str {
        match &self.kind {
            Kind::Free => "free",
            Kind::Uniform { .. } => "uniform",
            Kind::Partition { .. } => "partition",
            Kind::Graphic { .. } => "graphic",
            Kind::Linear(_) => "linear",
            Kind::Shifted { .. } => "shifted",
            Kind::Restricted { .. } => "restricted",
            Kind::Contracted { .. } => "contracted",
            Kind::Union { .. } => "union",
            Kind::CopyCap { .. } => "copy_cap",
            Kind::Coloops { .. } => "coloops",
        }
    }
}

/// Independence oracle over a finite ground set.
#[derive(Clone)]
pub struct Matroid {
    node: Arc<Node>,
    calls: Arc<AtomicU64>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("kind", &self.node.kind_name())
            .field("ground", &self.node.ground.len())
            .finish()
    }
}

impl Matroid {
    fn from_node(ground: GroundSet, kind: Kind) -> Self {
        Self {
            node: Arc::new(Node { ground, kind }),
            calls: Arc::new(AtomicU64::new(0)),
        }
    }

    /// Every subset of `0..n` is independent.
    pub fn free(n: usize) -> Self {
        Self::from_node(GroundSet::range(n), Kind::Free)
    }

    /// Subsets of `0..n` of size at most `rank`.
    pub fn uniform(n: usize, rank: usize) -> Self {
        Self::from_node(GroundSet::range(n), Kind::Uniform { rank })
    }

    /// Partition matroid: `blocks` must partition `0..n` and a set is
    /// independent when it takes at most `capacities[b]` elements of block `b`.
    pub fn partition(blocks: Vec<Vec<usize>>, capacities: Vec<usize>) -> Result<Self> {
        if blocks.len() != capacities.len() {
            return Err(Error::InvalidMatroid(format!(
                "{} blocks but {} capacities",
                blocks.len(),
                capacities.len()
            )));
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::InvalidMatroid(format!(
                        "partition element {e} outside 0..{n}"
                    )));
                }
                if block_of[e] != usize::MAX {
                    return Err(Error::InvalidMatroid(format!(
                        "element {e} appears in two blocks"
                    )));
                }
                block_of[e] = b;
            }
        }
        Ok(Self::from_node(
            GroundSet::range(n),
            Kind::Partition {
                blocks,
                capacities,
                block_of,
            },
        ))
    }

    /// Graphic matroid: element `i` is `edges[i]`, independent sets are forests.
    pub fn graphic(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::InvalidMatroid(format!(
                "graph edge ({u}, {v}) has an endpoint outside 0..{vertices}"
            )));
        }
        Ok(Self::from_node(
            GroundSet::range(edges.len()),
            Kind::Graphic { vertices, edges },
        ))
    }

    /// Column matroid of a matrix over GF(`prime`): element `i` is
    /// `columns[i]`, a set is independent when its columns have full rank.
    pub fn linear(prime: u64, columns: Vec<Vec<i64>>) -> Result<Self> {
        let n = columns.len();
        let matrix = LinearMatrix::new(prime, columns)?;
        Ok(Self::from_node(GroundSet::range(n), Kind::Linear(matrix)))
    }

    /// Disjoint union of independence systems over pairwise disjoint ground
    /// sets: a set is independent when its trace on every part is.
    pub fn union(parts: &[Matroid]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidMatroid("union of zero matroids".into()));
        }
        let mut owner = HashMap::new();
        for (i, part) in parts.iter().enumerate() {
            for e in part.ground().iter() {
                if owner.insert(e, i).is_some() {
                    return Err(Error::OverlappingGrounds(e));
                }
            }
        }
        let ground = GroundSet::from_elements(owner.keys().copied());
        Ok(Self::from_node(
            ground,
            Kind::Union {
                parts: parts.to_vec(),
                owner,
            },
        ))
    }

    /// Matroid on copies of the base elements: copy `i` stands for
    /// `origin[i]`. A set of copies is independent when it holds at most one
    /// copy of each base element and the base elements it stands for are
    /// independent.
    pub fn copy_cap(base: &Matroid, origin: Vec<usize>) -> Result<Self> {
        if let Some(&e) = origin.iter().find(|&&e| !base.ground().contains(e)) {
            return Err(Error::OutsideGround(e));
        }
        Ok(Self::from_node(
            GroundSet::range(origin.len()),
            Kind::CopyCap {
                base: base.clone(),
                origin,
            },
        ))
    }

    /// Relabels every element `e` as `e + offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        if offset == 0 {
            return self.fresh_handle();
        }
        let ground = GroundSet::from_elements(self.ground().iter().map(|e| e + offset));
        Self::from_node(
            ground,
            Kind::Shifted {
                base: self.clone(),
                offset,
            },
        )
    }

    /// Restriction to `keep`. Element labels are unchanged.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        self.validate(keep)?;
        Ok(Self::from_node(
            GroundSet::from_elements(keep.iter().copied()),
            Kind::Restricted { base: self.clone() },
        ))
    }

    /// Contraction by an independent set `away`. Element labels are unchanged.
    pub fn contract(&self, away: &[usize]) -> Result<Self> {
        self.validate(away)?;
        if !self.node.independent(away) {
            return Err(Error::DependentContraction);
        }
        let mut removed = away.to_vec();
        removed.sort_unstable();
        let ground = GroundSet::from_elements(
            self.ground()
                .iter()
                .filter(|e| removed.binary_search(e).is_err()),
        );
        Ok(Self::from_node(
            ground,
            Kind::Contracted {
                base: self.clone(),
                away: removed,
            },
        ))
    }

    /// Adds the labels in `extra` as coloops: they are independent together
    /// with every independent set.
    pub fn with_coloops(&self, extra: &[usize]) -> Result<Self> {
        for &e in extra {
            if self.ground().contains(e) {
                return Err(Error::OverlappingGrounds(e));
            }
        }
        let ground = GroundSet::from_elements(self.ground().iter().chain(extra.iter().copied()));
        if ground.len() != self.ground().len() + extra.len() {
            let dup = first_duplicate(extra).unwrap_or(0);
            return Err(Error::DuplicateElement(dup));
        }
        Ok(Self::from_node(ground, Kind::Coloops { base: self.clone() }))
    }

    fn fresh_handle(&self) -> Self {
        Self {
            node: Arc::clone(&self.node),
            calls: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.node.ground
    }

    pub fn len(&self) -> usize {
        self.node.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node.ground.is_empty()
    }

    pub fn kind_name(&self) -> &'static str {
        self.node.kind_name()
    }

    fn validate(&self, set: &[usize]) -> Result<()> {
        for &e in set {
            if !self.node.ground.contains(e) {
                return Err(Error::OutsideGround(e));
            }
        }
        if let Some(e) = first_duplicate(set) {
            return Err(Error::DuplicateElement(e));
        }
        Ok(())
    }

    /// Independence query. Counts one oracle call.
    pub fn is_independent(&self, set: &[usize]) -> Result<bool> {
        self.validate(set)?;
        Ok(self.independent_trusted(set))
    }

    /// Independence query without ground-set validation. The caller
    /// guarantees `set` holds distinct ground elements. Counts one call.
    pub fn independent_trusted(&self, set: &[usize]) -> bool {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.node.independent(set)
    }

    /// Size of a largest independent subset, by greedy augmentation.
    pub fn rank(&self, set: &[usize]) -> Result<usize> {
        self.validate(set)?;
        Ok(self.max_independent_subset(set).len())
    }

    /// Greedy maximal independent subset of `set`, scanning in the given
    /// order. One oracle call per element.
    pub fn max_independent_subset(&self, set: &[usize]) -> Vec<usize> {
        let mut basis = Vec::with_capacity(set.len());
        for &e in set {
            basis.push(e);
            if !self.independent_trusted(&basis) {
                basis.pop();
            }
        }
        basis
    }

    /// Rank of the whole ground set.
    pub fn full_rank(&self) -> usize {
        let all = self.ground().elements().to_vec();
        self.max_independent_subset(&all).len()
    }

    pub fn oracle_calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_oracle_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }
}

fn first_duplicate(set: &[usize]) -> Option<usize> {
    if set.len() < 2 {
        return None;
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0])
}
