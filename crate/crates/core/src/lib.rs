//! Probabilistic omnidirectional millimeter-wave path loss.
//!
//! * [`geometry`]: axis-aligned building database and line-of-sight tests.
//! * [`los_probability`]: ray-traced LOS probability curves, the analytic
//!   breakpoint/decay model and its MMSE fit.
//! * [`pathloss`]: close-in (1 m) and floating-intercept models, the
//!   LOS-probability-weighted hybrid and its distance-dependent shadowing.
//! * [`fitting`]: least-squares estimation of those models from scatter data.
//! * [`link`]: outage and coverage versus distance.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`). The `*F64` and
//! `*F32` aliases below name the common instantiations.

pub mod error;
pub mod fitting;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod link;
pub mod los_probability;
pub mod pathloss;
pub mod scalar;

pub use error::{Error, Result};
pub use fitting::{fit_close_in, fit_floating, CloseInFit, Condition, PathLossSample};
pub use geometry::{segment_intersects_box, Box3, BuildingDb, GeoOrigin, Point3, TxSite};
pub use grid::DistanceGrid;
pub use link::{coverage_curve, monte_carlo_outage, outage_probability, CoveragePoint, OutageSpec};
pub use los_probability::{
    fit_p_los, los_probability_at_radius, los_probability_curve, mean_curve, p_los_model, CircleSampling,
    Denominator, LosFit, LosProbParams, LosProbabilityCurve,
};
pub use pathloss::{
    fspl_at_reference, mean_pl_close_in, mean_pl_floating, mean_pl_hybrid, sample_pl, shadow_sigma_hybrid,
    CloseInModel, FloatingInterceptModel, HybridModel, NlosKind, ParameterPreset, PathLossModel,
};
pub use scalar::Scalar;

pub type Point3F64 = Point3<f64>;
pub type Box3F64 = Box3<f64>;
pub type BuildingDbF64 = BuildingDb<f64>;
pub type TxSiteF64 = TxSite<f64>;
pub type DistanceGridF64 = DistanceGrid<f64>;
pub type LosCurveF64 = LosProbabilityCurve<f64>;
pub type LosParamsF64 = LosProbParams<f64>;
pub type CloseInModelF64 = CloseInModel<f64>;
pub type FloatingModelF64 = FloatingInterceptModel<f64>;
pub type PathLossModelF64 = PathLossModel<f64>;
pub type HybridModelF64 = HybridModel<f64>;
pub type PathLossSampleF64 = PathLossSample<f64>;
pub type OutageSpecF64 = OutageSpec<f64>;

pub type Point3F32 = Point3<f32>;
pub type Box3F32 = Box3<f32>;
pub type BuildingDbF32 = BuildingDb<f32>;
pub type LosParamsF32 = LosProbParams<f32>;
pub type HybridModelF32 = HybridModel<f32>;
