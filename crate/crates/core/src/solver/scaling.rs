use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::ParityInstance;
use crate::scalar::Scalar;

/// Integer weights `floor(M w)` with `M = |E| / (eps_scale W)`, where `W` is
/// the largest weight of an edge feasible on its own.
pub fn scale_weights<W: Scalar>(
    instance: &ParityInstance<W>,
    eps_scale: &BigRational,
) -> Result<ParityInstance<BigInt>> {
    if *eps_scale <= BigRational::zero() || *eps_scale >= BigRational::one() {
        return Err(Error::InvalidParameter(format!(
            "scaling epsilon must lie in (0, 1), got {eps_scale}"
        )));
    }
    let max_weight = instance
        .max_feasible_weight()
        .map(|w| w.to_ratio())
        .filter(|w| !w.is_zero())
        .ok_or_else(|| Error::Degenerate("maximum feasible weight is zero".into()))?;
    let factor = BigRational::from_integer(instance.edge_count().into()) / (eps_scale * max_weight);
    instance.map_weights(|w| (w.to_ratio() * &factor).floor().to_integer())
}
