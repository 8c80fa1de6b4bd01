//! Line-of-sight probability versus distance.
//!
//! Two routes: ray tracing against a [`BuildingDb`] by sampling receiver
//! positions on circles around the transmitter, and the closed-form
//! breakpoint/decay model
//!
//! ```text
//! P_LOS(d) = [min(d_bp / d, 1) * (1 - exp(-d / alpha)) + exp(-d / alpha)]^2
//! ```
//!
//! together with a minimum mean square error fit of that model to a sampled
//! curve. The unsquared variant (WINNER microcell form) is also available.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{BuildingDb, Point3};
use crate::grid::DistanceGrid;
use crate::scalar::Scalar;

/// What goes in the denominator of the LOS ratio on each circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Denominator {
    /// Only receiver positions outside every building.
    #[default]
    ExteriorOnly,
    /// Every position on the circle; interior positions count as blocked.
    AllPoints,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleSampling<T> {
    pub n_points: usize,
    pub rx_height: T,
    pub denominator: Denominator,
}

impl<T: Scalar> Default for CircleSampling<T> {
    fn default() -> Self {
        Self { n_points: 100, rx_height: T::lit(1.5), denominator: Denominator::ExteriorOnly }
    }
}

/// Receiver positions on the circle of `radius` around `tx`; index 0 on +x, counter-clockwise.
pub fn circle_points<T: Scalar>(tx: &Point3<T>, radius: T, n_points: usize, rx_height: T) -> Vec<Point3<T>> {
    let n = T::from_usize(n_points).unwrap();
    (0..n_points)
        .map(|k| {
            let theta = T::TAU() * T::from_usize(k).unwrap() / n;
            Point3::new(tx.x + radius * theta.cos(), tx.y + radius * theta.sin(), rx_height)
        })
        .collect()
}

/// Fraction of circle positions with an unobstructed path to `tx`.
///
/// Returns `Ok(None)` when every position falls inside a building.
pub fn los_probability_at_radius<T: Scalar>(
    db: &BuildingDb<T>,
    tx: &Point3<T>,
    radius: T,
    sampling: &CircleSampling<T>,
) -> Result<Option<T>> {
    if radius.is_nan() || radius <= T::zero() {
        return Err(Error::invalid("radius", "must be positive"));
    }
    if sampling.n_points < 4 {
        return Err(Error::invalid("n_points", "need at least 4 points on the circle"));
    }
    if let Some(index) = db.building_containing(tx) {
        return Err(Error::InsideBuilding { role: "transmitter", index });
    }
    let mut exterior = 0usize;
    let mut visible = 0usize;
    for rx in circle_points(tx, radius, sampling.n_points, sampling.rx_height) {
        if db.point_in_any_building(&rx) {
            continue;
        }
        exterior += 1;
        if db.is_los_unchecked(tx, &rx) {
            visible += 1;
        }
    }
    if exterior == 0 {
        return Ok(None);
    }
    let denom = match sampling.denominator {
        Denominator::ExteriorOnly => exterior,
        Denominator::AllPoints => sampling.n_points,
    };
    Ok(Some(T::from_usize(visible).unwrap() / T::from_usize(denom).unwrap()))
}

/// Sampled LOS probability over a radius grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LosProbabilityCurve<T> {
    radii: Vec<T>,
    p_los: Vec<T>,
    valid: Vec<bool>,
}

impl<T: Scalar> LosProbabilityCurve<T> {
    /// Masked entries carry `p_los = 0`.
    pub fn new(radii: Vec<T>, p_los: Vec<T>, valid: Vec<bool>) -> Result<Self> {
        if radii.len() != p_los.len() || radii.len() != valid.len() {
            return Err(Error::invalid("curve", "column lengths differ"));
        }
        if radii.is_empty() {
            return Err(Error::invalid("curve", "no samples"));
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > T::zero())) {
            return Err(Error::invalid("radii", "must be finite and positive"));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("radii", "must be strictly increasing"));
        }
        if p_los.iter().any(|p| !(*p >= T::zero() && *p <= T::one())) {
            return Err(Error::invalid("p_los", "must lie in [0, 1]"));
        }
        Ok(Self { radii, p_los, valid })
    }

    /// Fully valid curve.
    pub fn from_values(radii: Vec<T>, p_los: Vec<T>) -> Result<Self> {
        let valid = vec![true; radii.len()];
        Self::new(radii, p_los, valid)
    }

    /// Samples the analytic model on `grid`.
    pub fn from_model(params: &LosProbParams<T>, grid: &DistanceGrid<T>) -> Self {
        let radii = grid.values();
        let p = radii.iter().map(|&d| params.evaluate(d)).collect();
        Self::from_values(radii, p).expect("model values are valid probabilities")
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn p_los(&self) -> &[T] {
        &self.p_los
    }

    pub fn valid_mask(&self) -> &[bool] {
        &self.valid
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// `(radius, p_los)` for valid entries only.
    pub fn valid_points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.radii
            .iter()
            .zip(&self.p_los)
            .zip(&self.valid)
            .filter(|(_, v)| **v)
            .map(|((r, p), _)| (*r, *p))
    }

    fn same_grid(&self, other: &Self) -> bool {
        let tol = T::lit(1e-9);
        self.radii.len() == other.radii.len()
            && self.radii.iter().zip(&other.radii).all(|(a, b)| (*a - *b).abs() <= tol * (T::one() + a.abs()))
    }
}

/// Ray-traced LOS probability curve for one transmitter, one sample per grid radius.
///
/// Radii are evaluated in parallel; the result is always in grid order.
pub fn los_probability_curve<T: Scalar>(
    db: &BuildingDb<T>,
    tx: &Point3<T>,
    grid: &DistanceGrid<T>,
    sampling: &CircleSampling<T>,
) -> Result<LosProbabilityCurve<T>> {
    if let Some(index) = db.building_containing(tx) {
        return Err(Error::InsideBuilding { role: "transmitter", index });
    }
    let radii = grid.values();
    let samples = radii
        .par_iter()
        .map(|&r| los_probability_at_radius(db, tx, r, sampling))
        .collect::<Result<Vec<_>>>()?;
    let valid = samples.iter().map(Option::is_some).collect();
    let p = samples.iter().map(|s| s.unwrap_or_else(T::zero)).collect();
    LosProbabilityCurve::new(radii, p, valid)
}

/// Per-radius mean over the curves that are valid at that radius.
pub fn mean_curve<T: Scalar>(curves: &[LosProbabilityCurve<T>]) -> Result<LosProbabilityCurve<T>> {
    let first = curves.first().ok_or_else(|| Error::InsufficientData("no curves to average".into()))?;
    if curves.iter().any(|c| !first.same_grid(c)) {
        return Err(Error::GridMismatch);
    }
    let mut p = Vec::with_capacity(first.len());
    for (i, &r) in first.radii.iter().enumerate() {
        let vals: Vec<T> = curves.iter().filter(|c| c.valid[i]).map(|c| c.p_los[i]).collect();
        if vals.is_empty() {
            return Err(Error::NoValidSample { radius: r.as_f64() });
        }
        let n = T::from_usize(vals.len()).unwrap();
        p.push((vals.into_iter().sum::<T>() / n).min(T::one()));
    }
    LosProbabilityCurve::from_values(first.radii.clone(), p)
}

/// Parameters of the breakpoint/decay LOS probability model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosProbParams<T> {
    d_bp: T,
    alpha: T,
    squared: bool,
}

impl<T: Scalar> LosProbParams<T> {
    pub fn new(d_bp: T, alpha: T, squared: bool) -> Result<Self> {
        if !(d_bp.is_finite() && d_bp > T::zero()) {
            return Err(Error::invalid("d_bp", "must be finite and positive"));
        }
        if !(alpha.is_finite() && alpha > T::zero()) {
            return Err(Error::invalid("alpha", "must be finite and positive"));
        }
        Ok(Self { d_bp, alpha, squared })
    }

    /// Squared form.
    pub fn squared(d_bp: T, alpha: T) -> Result<Self> {
        Self::new(d_bp, alpha, true)
    }

    /// WINNER form, no outer square.
    pub fn winner(d_bp: T, alpha: T) -> Result<Self> {
        Self::new(d_bp, alpha, false)
    }

    /// Breakpoint 27 m, decay 71 m, squared form: the mean fit over the
    /// four Manhattan transmitter sites.
    pub fn nyc_mean() -> Self {
        Self { d_bp: T::lit(27.0), alpha: T::lit(71.0), squared: true }
    }

    pub fn d_bp(&self) -> T {
        self.d_bp
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn is_squared(&self) -> bool {
        self.squared
    }

    pub fn evaluate(&self, d: T) -> T {
        let b = bracket(d, self.d_bp, (-d / self.alpha).exp());
        if self.squared {
            b * b
        } else {
            b
        }
    }
}

/// `P_LOS(d)` for `d > 0`.
pub fn p_los_model<T: Scalar>(d: T, params: &LosProbParams<T>) -> T {
    params.evaluate(d)
}

#[inline]
fn bracket<T: Scalar>(d: T, d_bp: T, decay: T) -> T {
    (d_bp / d).min(T::one()) * (T::one() - decay) + decay
}

/// Result of [`fit_p_los`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosFit<T> {
    pub params: LosProbParams<T>,
    pub mse: T,
}

const FIT_GRID_MAX: usize = 200;
const FIT_REFINE_STEPS: i32 = 10;
const FIT_REFINE_RESOLUTION: f64 = 0.1;
const FIT_REFINE_MAX_ROUNDS: usize = 100;

/// Minimum mean square error fit of the squared model to the valid points of `curve`.
///
/// Exhaustive search over integer `d_bp` and `alpha` in 1..=200 m, followed by
/// a 0.1 m local refinement around the best point. Ties go to the smallest
/// `d_bp`, then the smallest `alpha`.
pub fn fit_p_los<T: Scalar>(curve: &LosProbabilityCurve<T>) -> Result<LosFit<T>> {
    let pts: Vec<(T, T)> = curve.valid_points().collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData(format!("{} valid curve points, need at least 2", pts.len())));
    }
    let n = T::from_usize(pts.len()).unwrap();

    let mse_with = |d_bp: T, decay: &dyn Fn(usize) -> T| -> T {
        pts.iter()
            .enumerate()
            .map(|(i, &(d, p))| {
                let b = bracket(d, d_bp, decay(i));
                let e = b * b - p;
                e * e
            })
            .sum::<T>()
            / n
    };

    // exp(-d/alpha) for every grid alpha and every curve radius.
    let decay_table: Vec<Vec<T>> = (1..=FIT_GRID_MAX)
        .map(|a| {
            let alpha = T::from_usize(a).unwrap();
            pts.iter().map(|&(d, _)| (-d / alpha).exp()).collect()
        })
        .collect();

    let mut best = (T::infinity(), T::one(), T::one());
    for b in 1..=FIT_GRID_MAX {
        let d_bp = T::from_usize(b).unwrap();
        for (ai, row) in decay_table.iter().enumerate() {
            let mse = mse_with(d_bp, &|i| row[i]);
            if mse < best.0 {
                best = (mse, d_bp, T::from_usize(ai + 1).unwrap());
            }
        }
    }

    // Re-centre the 0.1 m window on the best point until it stops moving.
    let res = T::lit(FIT_REFINE_RESOLUTION);
    for _ in 0..FIT_REFINE_MAX_ROUNDS {
        let (_, centre_bp, centre_alpha) = best;
        for kb in -FIT_REFINE_STEPS..=FIT_REFINE_STEPS {
            let d_bp = centre_bp + T::from_i32(kb).unwrap() * res;
            if d_bp <= T::zero() {
                continue;
            }
            for ka in -FIT_REFINE_STEPS..=FIT_REFINE_STEPS {
                let alpha = centre_alpha + T::from_i32(ka).unwrap() * res;
                if alpha <= T::zero() {
                    continue;
                }
                let mse = mse_with(d_bp, &|i| (-pts[i].0 / alpha).exp());
                if mse < best.0 {
                    best = (mse, d_bp, alpha);
                }
            }
        }
        if best.1 == centre_bp && best.2 == centre_alpha {
            break;
        }
    }

    let (mse, d_bp, alpha) = best;
    if !mse.is_finite() {
        return Err(Error::InsufficientData("fit objective is not finite".into()));
    }
    Ok(LosFit { params: LosProbParams::squared(d_bp, alpha)?, mse })
}

/// Published per-transmitter fit, kept as reference metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSite {
    pub id: &'static str,
    pub lat: f64,
    pub lon: f64,
    pub height_m: f64,
    pub d_bp_m: f64,
    pub alpha_m: f64,
}

/// Downtown Manhattan transmitter sites and their fitted parameters.
pub const NYC_REFERENCE_SITES: [ReferenceSite; 4] = [
    ReferenceSite { id: "COL1", lat: 40.7270944, lon: -73.9974972, height_m: 7.0, d_bp_m: 36.0, alpha_m: 71.0 },
    ReferenceSite { id: "COL2", lat: 40.7268833, lon: -73.9970556, height_m: 7.0, d_bp_m: 39.0, alpha_m: 68.0 },
    ReferenceSite { id: "KAU", lat: 40.7290611, lon: -73.9962500, height_m: 17.0, d_bp_m: 30.0, alpha_m: 21.0 },
    ReferenceSite { id: "KIM2", lat: 40.7297444, lon: -73.9977222, height_m: 7.0, d_bp_m: 15.0, alpha_m: 95.0 },
];
