use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::find_rota_exchange;
use crate::error::{Error, Result};
use crate::instance::{ParityInstance, Solution};
use crate::matroid::Matroid;
use crate::scalar::{ratio_string, Scalar};
use crate::solver::{check_marker_ratio, sample_tau, IntervalScheme, SolverTrace};

/// Where an optimum edge ends up relative to the conflict sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Category {
    /// First blocked in its own class `i <= L`, by one vertex.
    Single { interval: usize },
    /// First blocked in its own class `i <= L`, by two or more vertices.
    Double { interval: usize },
    /// First blocked while an earlier class was processed.
    AnteriorBlocked { blocked_at: usize, own: usize },
    /// First blocked in the last class, its own.
    Tail,
    /// Positive weight, first blocked after its own class.
    LateBlocked { blocked_at: usize, own: usize },
    UnblockedZeroWeight,
    /// Positive weight and never blocked.
    Unblocked,
}

impl Category {
    pub fn is_single_or_double(self) -> bool {
        matches!(self, Category::Single { .. } | Category::Double { .. })
    }

    /// Whether the edge contradicts local optimality.
    pub fn is_violation(self) -> bool {
        matches!(self, Category::LateBlocked { .. } | Category::Unblocked)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    pub edge: usize,
    #[serde(with = "ratio_string")]
    pub weight: BigRational,
    /// Class of the weight, `1..=L+1`.
    pub own: usize,
    /// First `i` with `v(o) ∩ T_i` nonempty.
    pub first_blocked: Option<usize>,
    /// `|v(o) ∩ T_{first_blocked}|`.
    pub conflicts: usize,
    pub category: Category,
    /// Index of the smallest marker at or above the weight.
    pub closest_marker: usize,
    #[serde(with = "ratio_string")]
    pub marker: BigRational,
    /// `w_o >= m_o / (1 + gamma)`.
    pub near: bool,
    /// Near and neither a single nor a double.
    pub bad: bool,
}

/// Nested conflict sets `T_0 ⊆ ... ⊆ T_{L+1}` inside the optimum's vertices
/// and the resulting classification of optimum edges.
#[derive(Clone, Debug, Serialize)]
pub struct ConflictTrace {
    #[serde(with = "ratio_string")]
    pub gamma: BigRational,
    pub optimum: Vec<usize>,
    /// Vertex sets of the zero-weight padding edges; their vertices are
    /// coloops labelled from the instance's vertex count upward.
    pub padding: Vec<Vec<usize>>,
    /// `v(O)` plus padding vertices, sorted.
    pub optimum_vertices: Vec<usize>,
    /// `T_0 ..= T_{L+1}`, each sorted.
    pub t_sets: Vec<Vec<usize>>,
    pub edges: Vec<EdgeClass>,
    #[serde(with = "ratio_string")]
    pub singles_weight: BigRational,
    #[serde(with = "ratio_string")]
    pub solution_weight: BigRational,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConflictInvariants {
    /// `T_{i-1} ⊆ T_i ⊆ v(O)`.
    pub nested: bool,
    /// `v(A_{<=i}) ∪ (v(O) \ T_i)` independent for every `i`.
    pub independent: bool,
    /// `|T_i \ T_{i-1}| = |v(A_i)|`.
    pub sizes: bool,
    /// Every positive-weight optimum edge meets some `T_j` with `j` at most
    /// its own class.
    pub blocked_in_time: bool,
    /// Singles and doubles are exactly the first-blocked edges of each
    /// class `i <= L` lying in that class, split by conflict count.
    pub partition: bool,
    /// `w(O_s) <= w(A)`.
    pub singles_weight: bool,
}

impl ConflictInvariants {
    pub fn all(&self) -> bool {
        self.nested && self.independent && self.sizes && self.blocked_in_time && self.partition && self.singles_weight
    }
}

fn minus(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|e| !b.contains(e)).collect()
}

fn padded_matroid<W: Scalar>(instance: &ParityInstance<W>, padding: &[Vec<usize>]) -> Result<Matroid> {
    let extra: Vec<usize> = padding.iter().flatten().copied().collect();
    instance.matroid().with_coloops(&extra)
}

fn scheme_of(trace: &SolverTrace) -> Result<&IntervalScheme> {
    trace
        .scheme
        .as_ref()
        .ok_or_else(|| Error::Degenerate("trace has no interval scheme".into()))
}

/// Builds `T_1, T_2, ...` stage by stage. At stage `i`, vertices of `A_i`
/// that are themselves still unblocked optimum vertices join `T_i` first;
/// the rest of `T_i \ T_{i-1}` comes from an exchange between the remaining
/// vertices of `A_i` and of `v(O) \ T_{i-1}` in the matroid contracted on
/// `v(A_{<=i-1})` and those shared vertices.
pub fn build_conflict_trace<W: Scalar>(
    instance: &ParityInstance<W>,
    trace: &SolverTrace,
    optimum: &Solution<W>,
    gamma: &BigRational,
) -> Result<ConflictTrace> {
    if !trace.completed {
        return Err(Error::Precondition("trace did not converge".into()));
    }
    if *gamma < BigRational::zero() {
        return Err(Error::InvalidParameter(format!("gamma must be nonnegative, got {gamma}")));
    }
    if !instance.is_feasible(optimum.chosen())? {
        return Err(Error::Precondition("optimum is infeasible".into()));
    }
    let scheme = scheme_of(trace)?;
    let k = instance.k();

    let a_vertices = instance.vertices_of(&trace.solution);
    let mut o_vertices = instance.vertices_of(optimum.chosen());
    let deficit = a_vertices.len().saturating_sub(o_vertices.len());
    let mut next_label = instance.vertex_count();
    let padding: Vec<Vec<usize>> = (0..deficit.div_ceil(k))
        .map(|_| {
            let edge = (next_label..next_label + k).collect();
            next_label += k;
            edge
        })
        .collect();
    o_vertices.extend(padding.iter().flatten());
    o_vertices.sort_unstable();
    let matroid = padded_matroid(instance, &padding)?;

    let mut t: Vec<usize> = Vec::new();
    let mut t_sets = vec![Vec::new()];
    let mut before: Vec<usize> = Vec::new();
    for record in &trace.intervals {
        let stage = instance.vertices_of(&record.added);
        let remaining = minus(&o_vertices, &t);
        let shared: Vec<usize> = stage.iter().copied().filter(|v| remaining.contains(v)).collect();
        let mut away = before.clone();
        away.extend_from_slice(&shared);
        let contracted = matroid.contract(&away)?;
        let r = minus(&remaining, &away);
        let s = minus(&stage, &shared);
        if r.len() < s.len() {
            return Err(Error::Precondition(format!(
                "class {}: {} unblocked optimum vertices for {} solution vertices",
                record.index,
                r.len(),
                s.len()
            )));
        }
        let cert = find_rota_exchange(&contracted, &[s], &r)?
            .ok_or_else(|| Error::Precondition(format!("class {}: no exchange", record.index)))?;
        t.extend_from_slice(&shared);
        t.extend_from_slice(&cert.t_parts[0]);
        t.sort_unstable();
        t_sets.push(t.clone());
        before.extend_from_slice(&stage);
    }

    let edges = classify(instance, scheme, optimum, &t_sets, gamma);
    let singles_weight = edges
        .iter()
        .filter(|e| matches!(e.category, Category::Single { .. }))
        .map(|e| e.weight.clone())
        .sum();
    Ok(ConflictTrace {
        gamma: gamma.clone(),
        optimum: optimum.chosen().to_vec(),
        padding,
        optimum_vertices: o_vertices,
        t_sets,
        edges,
        singles_weight,
        solution_weight: trace.weight.clone(),
    })
}

fn first_blocked(vertices: &[usize], t_sets: &[Vec<usize>]) -> Option<(usize, usize)> {
    t_sets.iter().enumerate().skip(1).find_map(|(i, t)| {
        let hits = vertices.iter().filter(|v| t.contains(v)).count();
        (hits > 0).then_some((i, hits))
    })
}

fn classify<W: Scalar>(
    instance: &ParityInstance<W>,
    scheme: &IntervalScheme,
    optimum: &Solution<W>,
    t_sets: &[Vec<usize>],
    gamma: &BigRational,
) -> Vec<EdgeClass> {
    let last = scheme.interval_count() + 1;
    let scale = BigRational::one() + gamma;
    optimum
        .chosen()
        .iter()
        .map(|&edge| {
            let weight = instance.weight(edge).to_ratio();
            let own = scheme.interval_of(&weight).unwrap_or(0);
            let blocked = first_blocked(instance.edge(edge), t_sets);
            let category = match blocked {
                Some((j, hits)) if j == own && own < last => {
                    if hits == 1 {
                        Category::Single { interval: j }
                    } else {
                        Category::Double { interval: j }
                    }
                }
                Some((j, _)) if j == own => Category::Tail,
                Some((j, _)) if j < own => Category::AnteriorBlocked { blocked_at: j, own },
                Some((j, _)) => Category::LateBlocked { blocked_at: j, own },
                None if weight.is_zero() => Category::UnblockedZeroWeight,
                None => Category::Unblocked,
            };
            let (closest_marker, marker) = scheme
                .closest_marker(&weight)
                .map(|(j, m)| (j, m.clone()))
                .expect("optimum weights never exceed m_0");
            let near = &weight * &scale >= marker;
            EdgeClass {
                edge,
                weight,
                own,
                first_blocked: blocked.map(|b| b.0),
                conflicts: blocked.map_or(0, |b| b.1),
                category,
                closest_marker,
                marker,
                near,
                bad: near && !category.is_single_or_double(),
            }
        })
        .collect()
}

impl ConflictTrace {
    /// Re-checks every structural property with fresh oracle calls, from
    /// the stored sets rather than from the classification.
    pub fn invariants<W: Scalar>(&self, instance: &ParityInstance<W>, trace: &SolverTrace) -> Result<ConflictInvariants> {
        let scheme = scheme_of(trace)?;
        let matroid = padded_matroid(instance, &self.padding)?;
        let mut out = ConflictInvariants {
            nested: self.t_sets.len() == trace.intervals.len() + 1,
            independent: matroid.is_independent(&self.optimum_vertices)?,
            sizes: true,
            blocked_in_time: true,
            partition: true,
            singles_weight: self.singles_weight <= self.solution_weight,
        };
        for (record, pair) in trace.intervals.iter().zip(self.t_sets.windows(2)) {
            let (prev, cur) = (&pair[0], &pair[1]);
            out.nested &= prev.iter().all(|v| cur.contains(v)) && cur.iter().all(|v| self.optimum_vertices.contains(v));
            out.sizes &= minus(cur, prev).len() == instance.vertices_of(&record.added).len();
            let mut set = instance.vertices_of(&record.prefix);
            for v in minus(&self.optimum_vertices, cur) {
                if !set.contains(&v) {
                    set.push(v);
                }
            }
            out.independent &= matroid.is_independent(&set)?;
        }
        let last = scheme.interval_count() + 1;
        for class in &self.edges {
            let vertices = instance.edge(class.edge);
            let hit = |j: usize| vertices.iter().filter(|v| self.t_sets[j].contains(v)).count();
            if class.weight > BigRational::zero() {
                out.blocked_in_time &= (1..=class.own.min(last)).any(|j| hit(j) > 0);
            }
            let first_here = class.own < last && hit(class.own) > 0 && hit(class.own - 1) == 0;
            let expected = if !first_here {
                None
            } else if hit(class.own) == 1 {
                Some(Category::Single { interval: class.own })
            } else {
                Some(Category::Double { interval: class.own })
            };
            let actual = class.category.is_single_or_double().then_some(class.category);
            out.partition &= expected == actual;
        }
        Ok(out)
    }

    pub fn singles(&self) -> impl Iterator<Item = &EdgeClass> {
        self.edges.iter().filter(|e| matches!(e.category, Category::Single { .. }))
    }

    pub fn bad_weight(&self) -> BigRational {
        self.edges.iter().filter(|e| e.bad).map(|e| e.weight.clone()).sum()
    }
}

/// Empirical frequency of `w_o >= m_o / (1 + gamma)` for one optimum edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BadEstimate {
    pub edge: usize,
    #[serde(with = "ratio_string")]
    pub weight: BigRational,
    pub hits: u64,
    pub samples: u64,
    pub frequency: f64,
}

/// `gamma / (epsilon (1 + gamma))`.
pub fn bad_probability_bound(epsilon: &BigRational, gamma: &BigRational) -> BigRational {
    gamma / (epsilon * (BigRational::one() + gamma))
}

/// Draws `samples` shifts, rebuilds the markers each time, and counts per
/// optimum edge how often it lands close below its closest marker.
/// `gamma` must lie in `[0, 1/(1-epsilon) - 1]`.
pub fn estimate_bad_probability<W: Scalar>(
    instance: &ParityInstance<W>,
    optimum: &Solution<W>,
    epsilon: &BigRational,
    delta: &BigRational,
    gamma: &BigRational,
    samples: u64,
    seed: u64,
) -> Result<Vec<BadEstimate>> {
    check_marker_ratio(epsilon)?;
    let gamma_max = BigRational::one() / (BigRational::one() - epsilon) - BigRational::one();
    if *gamma < BigRational::zero() || *gamma > gamma_max {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in [0, {gamma_max}], got {gamma}"
        )));
    }
    let max_weight = instance
        .max_feasible_weight()
        .map(|w| w.to_ratio())
        .filter(|w| !w.is_zero())
        .ok_or_else(|| Error::Degenerate("maximum feasible weight is zero".into()))?;
    let weights: Vec<BigRational> = optimum.chosen().iter().map(|&e| instance.weight(e).to_ratio()).collect();
    let scale = BigRational::one() + gamma;
    let mut hits = vec![0u64; weights.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let tau = sample_tau(epsilon, &mut rng);
        let scheme = IntervalScheme::new(
            max_weight.clone(),
            epsilon.clone(),
            delta.clone(),
            tau,
            instance.edge_count(),
        )?;
        for (count, w) in hits.iter_mut().zip(&weights) {
            if let Some((_, m)) = scheme.closest_marker(w) {
                if w * &scale >= *m {
                    *count += 1;
                }
            }
        }
    }
    Ok(optimum
        .chosen()
        .iter()
        .zip(weights)
        .zip(hits)
        .map(|((&edge, weight), hits)| BadEstimate {
            edge,
            weight,
            hits,
            samples,
            frequency: if samples == 0 { 0.0 } else { hits as f64 / samples as f64 },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force_optimum;
    use crate::instance::{generate, Family};
    use crate::scalar::parse_ratio;
    use crate::solver::{sliding_with_tau, SlidingConfig};
    use crate::Rational;

    fn trap() -> ParityInstance<Rational> {
        generate(
            &Family::GreedyTrap {
                k: 3,
                rho: parse_ratio("0.3").unwrap(),
            },
            0,
        )
        .unwrap()
    }

    fn config() -> SlidingConfig {
        SlidingConfig::new(parse_ratio("0.45").unwrap(), parse_ratio("0.01").unwrap())
    }

    #[test]
    fn heavy_edge_blocks_light_optimum_edges_early() {
        let inst = trap();
        let (_, trace) = sliding_with_tau(&inst, &config(), parse_ratio("0.2").unwrap()).unwrap();
        assert_eq!(trace.solution, vec![0]);
        let opt = brute_force_optimum(&inst).unwrap().optimum;
        let ct = build_conflict_trace(&inst, &trace, &opt, &parse_ratio("0.2").unwrap()).unwrap();
        assert!(ct.invariants(&inst, &trace).unwrap().all());
        for class in &ct.edges {
            assert!(!class.category.is_single_or_double(), "{class:?}");
        }
        assert!(ct
            .edges
            .iter()
            .any(|c| matches!(c.category, Category::AnteriorBlocked { blocked_at: 1, own: 2 })));
    }

    #[test]
    fn optimal_run_blocks_every_edge_by_itself() {
        let inst = trap();
        let (sol, trace) = sliding_with_tau(&inst, &config(), Rational::zero()).unwrap();
        let opt = brute_force_optimum(&inst).unwrap().optimum;
        assert_eq!(sol.chosen(), opt.chosen());
        let ct = build_conflict_trace(&inst, &trace, &opt, &parse_ratio("0.2").unwrap()).unwrap();
        assert!(ct.invariants(&inst, &trace).unwrap().all());
        for class in &ct.edges {
            assert_eq!(class.first_blocked, Some(class.own));
            assert_eq!(class.conflicts, inst.edge(class.edge).len());
        }
        let mut all = inst.vertices_of(opt.chosen());
        all.sort_unstable();
        assert_eq!(ct.t_sets.last().unwrap(), &all);
    }

    #[test]
    fn zero_gamma_flags_only_boundary_weights() {
        let inst = trap();
        let (_, trace) = sliding_with_tau(&inst, &config(), Rational::zero()).unwrap();
        let opt = brute_force_optimum(&inst).unwrap().optimum;
        let ct = build_conflict_trace(&inst, &trace, &opt, &Rational::zero()).unwrap();
        for class in &ct.edges {
            assert_eq!(class.near, class.weight == class.marker);
        }
    }

    #[test]
    fn incomplete_trace_is_refused() {
        let inst = trap();
        let cfg = SlidingConfig {
            swap_limit: Some(0),
            ..config()
        };
        let (_, trace) = sliding_with_tau(&inst, &cfg, Rational::zero()).unwrap();
        let opt = brute_force_optimum(&inst).unwrap().optimum;
        assert!(build_conflict_trace(&inst, &trace, &opt, &Rational::zero()).is_err());
    }

    #[test]
    fn bad_probability_bounds() {
        let inst = trap();
        let opt = brute_force_optimum(&inst).unwrap().optimum;
        let eps = parse_ratio("0.3873").unwrap();
        let gamma = parse_ratio("0.2253").unwrap();
        let est =
            estimate_bad_probability(&inst, &opt, &eps, &parse_ratio("0.01").unwrap(), &gamma, 2000, 7).unwrap();
        let bound = crate::scalar::ratio_to_f64(&bad_probability_bound(&eps, &gamma));
        for e in &est {
            assert!(e.frequency <= bound + 3.0 * (bound * (1.0 - bound) / 2000.0).sqrt());
        }
        let too_big = parse_ratio("0.7").unwrap();
        assert!(estimate_bad_probability(&inst, &opt, &eps, &parse_ratio("0.01").unwrap(), &too_big, 10, 0).is_err());
    }
}
