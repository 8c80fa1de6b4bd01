//! Outage and coverage versus distance under the hybrid path loss model.
//!
//! Outage means the shadowed path loss exceeds the link budget's maximum
//! tolerable path loss. With normal-in-dB shadowing this is a Gaussian tail.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::grid::DistanceGrid;
use crate::pathloss::HybridModel;
use crate::scalar::{q_function, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageSpec<T> {
    max_path_loss_db: T,
}

impl<T: Scalar> OutageSpec<T> {
    /// `+inf` means the link never fails; NaN is rejected.
    pub fn new(max_path_loss_db: T) -> Result<Self> {
        if max_path_loss_db.is_nan() {
            return Err(Error::invalid("max_path_loss", "must not be NaN"));
        }
        Ok(Self { max_path_loss_db })
    }

    pub fn max_path_loss_db(&self) -> T {
        self.max_path_loss_db
    }
}

/// `P[PL(d) > max_path_loss]`.
pub fn outage_probability<T: Scalar>(model: &HybridModel<T>, d: T, spec: &OutageSpec<T>) -> Result<T> {
    let mean = model.mean_pl(d)?;
    let sigma = model.shadow_sigma(d)?;
    let threshold = spec.max_path_loss_db;
    if sigma == T::zero() {
        return Ok(if mean > threshold { T::one() } else { T::zero() });
    }
    Ok(q_function((threshold - mean) / sigma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveragePoint<T> {
    pub distance: T,
    pub coverage: T,
    pub outage: T,
}

/// Coverage `1 - outage` at every grid distance, in grid order.
pub fn coverage_curve<T: Scalar>(
    model: &HybridModel<T>,
    spec: &OutageSpec<T>,
    grid: &DistanceGrid<T>,
) -> Result<Vec<CoveragePoint<T>>> {
    grid.values()
        .into_iter()
        .map(|d| {
            let outage = outage_probability(model, d, spec)?;
            Ok(CoveragePoint { distance: d, coverage: T::one() - outage, outage })
        })
        .collect()
}

/// Fraction of `draws` shadowed realizations at `d` that exceed the threshold.
pub fn monte_carlo_outage<T: Scalar, R: Rng + ?Sized>(
    model: &HybridModel<T>,
    d: T,
    spec: &OutageSpec<T>,
    draws: usize,
    rng: &mut R,
) -> Result<T>
where
    StandardNormal: Distribution<T>,
{
    if draws == 0 {
        return Err(Error::invalid("draws", "must be positive"));
    }
    let mut failures = 0usize;
    for _ in 0..draws {
        if model.sample_pl(d, rng)? > spec.max_path_loss_db {
            failures += 1;
        }
    }
    Ok(T::from_usize(failures).unwrap() / T::from_usize(draws).unwrap())
}
