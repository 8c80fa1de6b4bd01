//! Least-squares estimation of path loss model parameters from
//! `(distance, path loss)` scatter data.
//!
//! Callers pick the LOS or NLOS subset themselves; the condition label on a
//! sample is carried along but never inferred.

use crate::error::{Error, Result};
use crate::pathloss::{fspl_at_reference, CloseInModel, FloatingInterceptModel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    Los,
    Nlos,
}

impl Condition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::Los => "LOS",
            Condition::Nlos => "NLOS",
        }
    }
}

impl std::str::FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "LOS" => Ok(Condition::Los),
            "NLOS" => Ok(Condition::Nlos),
            other => Err(Error::invalid("condition", format!("expected LOS or NLOS, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossSample<T> {
    pub distance: T,
    pub path_loss: T,
    pub condition: Condition,
}

impl<T: Scalar> PathLossSample<T> {
    pub fn new(distance: T, path_loss: T, condition: Condition) -> Result<Self> {
        if !(distance.is_finite() && distance >= T::one()) {
            return Err(Error::BelowReferenceDistance { d: distance.as_f64() });
        }
        if !path_loss.is_finite() {
            return Err(Error::NonFinite { what: "path loss" });
        }
        Ok(Self { distance, path_loss, condition })
    }
}

/// Samples carrying `condition`.
pub fn select<T: Scalar>(samples: &[PathLossSample<T>], condition: Condition) -> Vec<PathLossSample<T>> {
    samples.iter().filter(|s| s.condition == condition).copied().collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloseInFit<T> {
    pub exponent: T,
    pub shadow_std_db: T,
}

impl<T: Scalar> CloseInFit<T> {
    pub fn into_model(self, frequency_hz: T) -> Result<CloseInModel<T>> {
        CloseInModel::new(frequency_hz, self.exponent, self.shadow_std_db)
    }
}

fn log_distance<T: Scalar>(d: T) -> T {
    T::lit(10.0) * d.log10()
}

/// Closed-form path loss exponent relative to free space at 1 m.
///
/// With `a = 10 log10(d)` and `b = PL - FSPL(1 m)`, the exponent is
/// `sum(a b) / sum(a^2)`. The shadow factor is the RMS of the residuals.
pub fn fit_close_in<T: Scalar>(samples: &[PathLossSample<T>], frequency_hz: T) -> Result<CloseInFit<T>> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!("{} samples, need at least 2", samples.len())));
    }
    if !(frequency_hz.is_finite() && frequency_hz > T::zero()) {
        return Err(Error::invalid("frequency", "must be finite and positive"));
    }
    let fspl = fspl_at_reference(frequency_hz);
    let (mut saa, mut sab) = (T::zero(), T::zero());
    for s in samples {
        let a = log_distance(s.distance);
        saa = saa + a * a;
        sab = sab + a * (s.path_loss - fspl);
    }
    if saa == T::zero() {
        return Err(Error::InsufficientData("all samples at the 1 m reference distance".into()));
    }
    let exponent = sab / saa;
    let n = T::from_usize(samples.len()).unwrap();
    let sse: T = samples
        .iter()
        .map(|s| {
            let r = s.path_loss - fspl - exponent * log_distance(s.distance);
            r * r
        })
        .sum();
    Ok(CloseInFit { exponent, shadow_std_db: (sse / n).sqrt() })
}

/// Ordinary least squares of path loss on `10 log10(d)`.
///
/// The returned model's valid range spans the sample distances and its
/// shadow factor is the population standard deviation of the residuals.
pub fn fit_floating<T: Scalar>(samples: &[PathLossSample<T>]) -> Result<FloatingInterceptModel<T>> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!("{} samples, need at least 2", samples.len())));
    }
    let n = T::from_usize(samples.len()).unwrap();
    let xs: Vec<T> = samples.iter().map(|s| log_distance(s.distance)).collect();
    let mean_x = xs.iter().copied().sum::<T>() / n;
    let mean_y = samples.iter().map(|s| s.path_loss).sum::<T>() / n;
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for (x, s) in xs.iter().zip(samples) {
        let dx = *x - mean_x;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * (s.path_loss - mean_y);
    }
    if sxx == T::zero() {
        return Err(Error::InsufficientData("all samples share one distance".into()));
    }
    // slope on 10 log10(d) is beta itself
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: T = xs
        .iter()
        .zip(samples)
        .map(|(x, s)| {
            let r = s.path_loss - intercept - slope * *x;
            r * r
        })
        .sum();
    let lo = samples.iter().map(|s| s.distance).fold(T::infinity(), T::min);
    let hi = samples.iter().map(|s| s.distance).fold(T::neg_infinity(), T::max);
    FloatingInterceptModel::new(intercept, slope, (sse / n).sqrt(), (lo, hi))
}
