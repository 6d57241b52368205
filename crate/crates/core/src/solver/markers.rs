//! Marker placement and weight classes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::ParityInstance;
use crate::scalar::{ratio_string, ratio_string_vec, Scalar};

/// A weight interval `(lower, upper]`, or `[lower, upper]` when
/// `lower_closed` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightInterval {
    #[serde(with = "ratio_string")]
    pub lower: BigRational,
    #[serde(with = "ratio_string")]
    pub upper: BigRational,
    pub lower_closed: bool,
}

impl WeightInterval {
    pub fn open_closed(lower: BigRational, upper: BigRational) -> Self {
        Self {
            lower,
            upper,
            lower_closed: false,
        }
    }

    pub fn closed(lower: BigRational, upper: BigRational) -> Self {
        Self {
            lower,
            upper,
            lower_closed: true,
        }
    }

    pub fn contains(&self, w: &BigRational) -> bool {
        let above = if self.lower_closed {
            *w >= self.lower
        } else {
            *w > self.lower
        };
        above && *w <= self.upper
    }

    /// Ids of the instance edges whose weight lies in the interval.
    pub fn edges_in<W: Scalar>(&self, instance: &ParityInstance<W>) -> Vec<usize> {
        instance
            .weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| self.contains(&w.to_ratio()))
            .map(|(id, _)| id)
            .collect()
    }
}

/// Markers `m_0 > m_1 > ... > m_L > m_{L+1} = 0` and the weight classes
/// they cut: class `j` is `(m_j, m_{j-1}]` for `j <= L` and the last class
/// is `[0, m_L]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalScheme {
    #[serde(with = "ratio_string")]
    max_weight: BigRational,
    #[serde(with = "ratio_string")]
    epsilon: BigRational,
    #[serde(with = "ratio_string")]
    delta: BigRational,
    #[serde(with = "ratio_string")]
    tau: BigRational,
    interval_count: usize,
    #[serde(with = "ratio_string_vec")]
    markers: Vec<BigRational>,
}

pub(crate) fn check_epsilon(epsilon: &BigRational) -> Result<()> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if *epsilon <= BigRational::zero() || *epsilon >= half {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1/2), got {epsilon}"
        )));
    }
    Ok(())
}

/// Marker arithmetic only needs a ratio in `(0, 1)`; the solver narrows
/// this to `(0, 1/2)` through [`check_epsilon`].
pub(crate) fn check_marker_ratio(epsilon: &BigRational) -> Result<()> {
    if *epsilon <= BigRational::zero() || *epsilon >= BigRational::one() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

pub(crate) fn check_delta(delta: &BigRational) -> Result<()> {
    if *delta <= BigRational::zero() || *delta >= BigRational::one() {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// `L = ceil(-log_{1-eps}(|E| / delta)) + 1`, evaluated exactly: the
/// ceiling is the least `j` with `(1-eps)^j <= delta / |E|`.
pub fn interval_count(epsilon: &BigRational, delta: &BigRational, edge_count: usize) -> Result<usize> {
    check_marker_ratio(epsilon)?;
    check_delta(delta)?;
    if edge_count == 0 {
        return Err(Error::InvalidParameter("no edges".into()));
    }
    let target = delta / BigRational::from_integer(BigInt::from(edge_count));
    let ratio = BigRational::one() - epsilon;
    let mut power = BigRational::one();
    let mut j = 0;
    while power > target {
        power *= &ratio;
        j += 1;
    }
    Ok(j + 1)
}

impl IntervalScheme {
    pub fn new(
        max_weight: BigRational,
        epsilon: BigRational,
        delta: BigRational,
        tau: BigRational,
        edge_count: usize,
    ) -> Result<Self> {
        let interval_count = interval_count(&epsilon, &delta, edge_count)?;
        if tau < BigRational::zero() || tau >= epsilon {
            return Err(Error::InvalidParameter(format!(
                "tau must lie in [0, epsilon), got {tau}"
            )));
        }
        if max_weight <= BigRational::zero() {
            return Err(Error::Degenerate("maximum feasible weight is zero".into()));
        }
        let ratio = BigRational::one() - &epsilon;
        let top = &max_weight * (BigRational::one() - &tau);
        let mut markers = Vec::with_capacity(interval_count + 2);
        markers.push(&top / &ratio);
        let mut m = top;
        for _ in 1..=interval_count {
            markers.push(m.clone());
            m *= &ratio;
        }
        markers.push(BigRational::zero());
        Ok(Self {
            max_weight,
            epsilon,
            delta,
            tau,
            interval_count,
            markers,
        })
    }

    pub fn max_weight(&self) -> &BigRational {
        &self.max_weight
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn tau(&self) -> &BigRational {
        &self.tau
    }

    /// `L`; there are `L + 1` classes.
    pub fn interval_count(&self) -> usize {
        self.interval_count
    }

    /// `m_0 ..= m_{L+1}`.
    pub fn markers(&self) -> &[BigRational] {
        &self.markers
    }

    pub fn marker(&self, j: usize) -> &BigRational {
        &self.markers[j]
    }

    /// Class `i` for `1 <= i <= L + 1`.
    pub fn interval(&self, i: usize) -> WeightInterval {
        assert!((1..=self.interval_count + 1).contains(&i), "class {i} out of range");
        let upper = self.markers[i - 1].clone();
        let lower = self.markers[i].clone();
        if i == self.interval_count + 1 {
            WeightInterval::closed(lower, upper)
        } else {
            WeightInterval::open_closed(lower, upper)
        }
    }

    /// Class index of a weight, `None` above `m_0`. A weight equal to `m_j`
    /// falls in class `j + 1`.
    pub fn interval_of(&self, w: &BigRational) -> Option<usize> {
        if *w > self.markers[0] {
            return None;
        }
        (1..=self.interval_count)
            .find(|&j| *w > self.markers[j])
            .or(Some(self.interval_count + 1))
    }

    /// Smallest positive marker at or above `w`, with its index in `0..=L`.
    pub fn closest_marker(&self, w: &BigRational) -> Option<(usize, &BigRational)> {
        (0..=self.interval_count)
            .rev()
            .find(|&j| self.markers[j] >= *w)
            .map(|j| (j, &self.markers[j]))
    }
}

/// Markers for an instance: `W` is the largest weight of an edge that is
/// feasible on its own. Fails with [`Error::Degenerate`] when no edge is
/// feasible or `W = 0`.
pub fn compute_markers<W: Scalar>(
    instance: &ParityInstance<W>,
    epsilon: &BigRational,
    delta: &BigRational,
    tau: &BigRational,
) -> Result<IntervalScheme> {
    check_marker_ratio(epsilon)?;
    check_delta(delta)?;
    if instance.is_empty() {
        return Err(Error::Degenerate("instance has no edges".into()));
    }
    let max_weight = instance
        .max_feasible_weight()
        .ok_or_else(|| Error::Degenerate("no edge is feasible on its own".into()))?
        .to_ratio();
    IntervalScheme::new(
        max_weight,
        epsilon.clone(),
        delta.clone(),
        tau.clone(),
        instance.edge_count(),
    )
}

/// `tau = epsilon * u` with `u` uniform on `[0, 1)` at 53-bit resolution,
/// as an exact rational.
pub fn sample_tau<R: RngCore + ?Sized>(epsilon: &BigRational, rng: &mut R) -> BigRational {
    let bits = rng.next_u64() >> 11;
    let u = BigRational::new(BigInt::from(bits), BigInt::one() << 53u32);
    epsilon * u
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn markers_for_half_ratio() {
        let s = IntervalScheme::new(r(1, 1), r(1, 2), r(1, 100), r(0, 1), 4).unwrap();
        assert_eq!(&s.markers()[..4], &[r(2, 1), r(1, 1), r(1, 2), r(1, 4)]);
        assert_eq!(s.markers().last(), Some(&r(0, 1)));
        assert_eq!(s.markers().len(), s.interval_count() + 2);
    }

    #[test]
    fn interval_count_example() {
        // ceil(log2(10^4)) + 1
        assert_eq!(interval_count(&r(1, 2), &r(1, 100), 100).unwrap(), 15);
    }

    #[test]
    fn interval_count_at_exact_power() {
        // |E| / delta = 2^3 exactly: ceil(3) + 1
        assert_eq!(interval_count(&r(1, 2), &r(1, 2), 4).unwrap(), 4);
    }

    #[test]
    fn consecutive_markers_shrink_by_one_minus_epsilon() {
        let eps = r(3873, 10000);
        let s = IntervalScheme::new(r(7, 3), eps.clone(), r(1, 10000), r(1, 10), 12).unwrap();
        for j in 1..=s.interval_count() {
            assert_eq!(s.marker(j) / s.marker(j - 1), BigRational::one() - &eps);
        }
        assert_eq!(s.marker(1), &(r(7, 3) * r(9, 10)));
    }

    #[test]
    fn classes_partition_zero_to_w() {
        let s = IntervalScheme::new(r(1, 1), r(1, 3), r(1, 10), r(1, 7), 5).unwrap();
        let mut probes: Vec<BigRational> = (0..=200).map(|i| r(i, 200)).collect();
        probes.extend(s.markers().iter().filter(|&m| *m <= r(1, 1)).cloned());
        for w in probes {
            let hits: Vec<usize> = (1..=s.interval_count() + 1)
                .filter(|&i| s.interval(i).contains(&w))
                .collect();
            assert_eq!(hits.len(), 1, "weight {w} in classes {hits:?}");
            assert_eq!(s.interval_of(&w), Some(hits[0]));
        }
    }

    #[test]
    fn boundary_weight_goes_to_the_next_class() {
        let s = IntervalScheme::new(r(1, 1), r(1, 2), r(1, 100), r(0, 1), 4).unwrap();
        assert_eq!(s.interval_of(&r(1, 1)), Some(2));
        assert_eq!(s.interval_of(&r(3, 2)), Some(1));
        assert_eq!(s.interval_of(&r(3, 1)), None);
        assert_eq!(s.interval_of(&r(0, 1)), Some(s.interval_count() + 1));
    }

    #[test]
    fn closest_marker_never_zero() {
        let s = IntervalScheme::new(r(1, 1), r(1, 2), r(1, 2), r(0, 1), 2).unwrap();
        let (j, m) = s.closest_marker(&r(0, 1)).unwrap();
        assert_eq!(j, s.interval_count());
        assert!(*m > r(0, 1));
        assert_eq!(s.closest_marker(&r(3, 4)).unwrap().1, &r(1, 1));
    }

    #[test]
    fn parameter_ranges() {
        assert!(IntervalScheme::new(r(1, 1), r(1, 1), r(1, 2), r(0, 1), 2).is_err());
        assert!(check_epsilon(&r(1, 2)).is_err());
        assert!(IntervalScheme::new(r(1, 1), r(1, 4), r(1, 1), r(0, 1), 2).is_err());
        assert!(IntervalScheme::new(r(1, 1), r(1, 4), r(1, 2), r(1, 4), 2).is_err());
        assert!(IntervalScheme::new(r(0, 1), r(1, 4), r(1, 2), r(0, 1), 2).is_err());
    }

    #[test]
    fn tau_stays_below_epsilon() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let eps = r(3873, 10000);
        for _ in 0..1000 {
            let tau = sample_tau(&eps, &mut rng);
            assert!(tau >= BigRational::zero() && tau < eps);
        }
    }
}
