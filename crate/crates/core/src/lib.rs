//! Weighted matroid k-parity and k-matroid intersection.
//!
//! The solver is a sliding local search: weights are cut into geometric
//! classes by randomly shifted markers, and a small-swap local search runs
//! class by class from heavy to light. Around it sit exact brute-force
//! oracles, a greedy baseline, weight scaling, and exhaustive checkers for the
//! matroid exchange structure the local optimum is analysed with.
//!
//! Everything over weights is generic in [`Scalar`]; the aliases below name
//! the usual instantiations.

pub mod error;
pub mod exact;
pub mod exchange;
pub mod instance;
pub mod matroid;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use instance::{ParityInstance, Solution, VertexCost};
pub use matroid::{GroundSet, Matroid};
pub use scalar::Scalar;

/// Exact weights, the default everywhere.
pub type Rational = num_rational::BigRational;

pub type RationalInstance = ParityInstance<Rational>;
pub type RationalSolution = Solution<Rational>;

/// Output of weight scaling.
pub type ScaledInstance = ParityInstance<num_bigint::BigInt>;

pub type IntInstance = ParityInstance<i64>;
pub type F64Instance = ParityInstance<f64>;
pub type F32Instance = ParityInstance<f32>;
