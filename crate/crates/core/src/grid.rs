use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Evenly spaced distance grid `start, start + step, ...` up to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceGrid<T> {
    start: T,
    stop: T,
    step: T,
}

impl<T: Scalar> DistanceGrid<T> {
    pub fn new(start: T, stop: T, step: T) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::NonFinite { what: "distance grid" });
        }
        if start <= T::zero() {
            return Err(Error::invalid("start", "must be positive"));
        }
        if stop < start {
            return Err(Error::invalid("stop", "must not be below start"));
        }
        if step <= T::zero() {
            return Err(Error::invalid("step", "must be positive"));
        }
        Ok(Self { start, stop, step })
    }

    pub fn start(&self) -> T {
        self.start
    }

    pub fn stop(&self) -> T {
        self.stop
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn len(&self) -> usize {
        // Tolerate representation error so 10..=200 step 1 gives 191 points.
        let span = ((self.stop - self.start) / self.step).as_f64();
        (span + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.len())
            .map(|i| self.start + T::from_usize(i).unwrap() * self.step)
            .collect()
    }
}

impl Default for DistanceGrid<f64> {
    /// 10 m to 200 m in 1 m increments.
    fn default() -> Self {
        Self { start: 10.0, stop: 200.0, step: 1.0 }
    }
}
