//! Close-in free space reference distance and floating-intercept path loss
//! models, and their LOS-probability-weighted hybrid.
//!
//! All path loss values are in dB and distances in meters. The close-in
//! reference distance is fixed at 1 m.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::los_probability::LosProbParams;
use crate::scalar::Scalar;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Close-in anchor distance in meters.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

/// Free space path loss at 1 m, `20 log10(4 pi / lambda)`.
pub fn fspl_at_reference<T: Scalar>(frequency_hz: T) -> T {
    let wavelength = T::lit(SPEED_OF_LIGHT) / frequency_hz;
    T::lit(20.0) * (T::lit(4.0) * T::PI() * T::lit(REFERENCE_DISTANCE_M) / wavelength).log10()
}

fn check_reference<T: Scalar>(d: T) -> Result<()> {
    if d >= T::lit(REFERENCE_DISTANCE_M) {
        Ok(())
    } else {
        Err(Error::BelowReferenceDistance { d: d.as_f64() })
    }
}

fn check_std<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v >= T::zero() {
        Ok(())
    } else {
        Err(Error::invalid(name, "must be finite and non-negative"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloseInModel<T> {
    frequency_hz: T,
    exponent: T,
    shadow_std_db: T,
}

impl<T: Scalar> CloseInModel<T> {
    pub fn new(frequency_hz: T, exponent: T, shadow_std_db: T) -> Result<Self> {
        if !(frequency_hz.is_finite() && frequency_hz > T::zero()) {
            return Err(Error::invalid("frequency", "must be finite and positive"));
        }
        if !(exponent.is_finite() && exponent > T::zero()) {
            return Err(Error::invalid("exponent", "must be finite and positive"));
        }
        check_std("shadow_std", shadow_std_db)?;
        Ok(Self { frequency_hz, exponent, shadow_std_db })
    }

    pub fn frequency_hz(&self) -> T {
        self.frequency_hz
    }

    pub fn exponent(&self) -> T {
        self.exponent
    }

    pub fn shadow_std_db(&self) -> T {
        self.shadow_std_db
    }

    /// `FSPL(1 m) + 10 n log10(d)`; `d` must be at least 1 m.
    pub fn mean_pl(&self, d: T) -> Result<T> {
        check_reference(d)?;
        Ok(fspl_at_reference(self.frequency_hz) + T::lit(10.0) * self.exponent * d.log10())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatingInterceptModel<T> {
    intercept_db: T,
    slope: T,
    shadow_std_db: T,
    valid_range: (T, T),
}

impl<T: Scalar> FloatingInterceptModel<T> {
    pub fn new(intercept_db: T, slope: T, shadow_std_db: T, valid_range: (T, T)) -> Result<Self> {
        if !(intercept_db.is_finite() && slope.is_finite()) {
            return Err(Error::NonFinite { what: "floating-intercept parameters" });
        }
        check_std("shadow_std", shadow_std_db)?;
        if !valid_range.0.is_finite() || !valid_range.1.is_finite() || valid_range.0 >= valid_range.1 {
            return Err(Error::invalid("valid_range", "lower bound must be below upper bound"));
        }
        Ok(Self { intercept_db, slope, shadow_std_db, valid_range })
    }

    pub fn intercept_db(&self) -> T {
        self.intercept_db
    }

    pub fn slope(&self) -> T {
        self.slope
    }

    pub fn shadow_std_db(&self) -> T {
        self.shadow_std_db
    }

    pub fn valid_range(&self) -> (T, T) {
        self.valid_range
    }

    /// `intercept + 10 slope log10(d)`, flagged as extrapolated outside the fitted range.
    pub fn mean_pl(&self, d: T) -> (T, bool) {
        let pl = self.intercept_db + T::lit(10.0) * self.slope * d.log10();
        let extrapolated = d < self.valid_range.0 || d > self.valid_range.1;
        (pl, extrapolated)
    }
}

/// Free function form of [`CloseInModel::mean_pl`].
pub fn mean_pl_close_in<T: Scalar>(model: &CloseInModel<T>, d: T) -> Result<T> {
    model.mean_pl(d)
}

/// Free function form of [`FloatingInterceptModel::mean_pl`].
pub fn mean_pl_floating<T: Scalar>(model: &FloatingInterceptModel<T>, d: T) -> (T, bool) {
    model.mean_pl(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathLossModel<T> {
    CloseIn(CloseInModel<T>),
    FloatingIntercept(FloatingInterceptModel<T>),
}

impl<T: Scalar> PathLossModel<T> {
    /// Mean path loss, ignoring the floating-intercept extrapolation flag.
    pub fn mean_pl(&self, d: T) -> Result<T> {
        match self {
            PathLossModel::CloseIn(m) => m.mean_pl(d),
            PathLossModel::FloatingIntercept(m) => Ok(m.mean_pl(d).0),
        }
    }

    pub fn shadow_std_db(&self) -> T {
        match self {
            PathLossModel::CloseIn(m) => m.shadow_std_db(),
            PathLossModel::FloatingIntercept(m) => m.shadow_std_db(),
        }
    }
}

/// LOS close-in model and an NLOS model, weighted by `P_LOS(d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridModel<T> {
    pub los: CloseInModel<T>,
    pub nlos: PathLossModel<T>,
    pub p_los: LosProbParams<T>,
}

impl<T: Scalar> HybridModel<T> {
    pub fn new(los: CloseInModel<T>, nlos: PathLossModel<T>, p_los: LosProbParams<T>) -> Self {
        Self { los, nlos, p_los }
    }

    pub fn p_los_at(&self, d: T) -> T {
        self.p_los.evaluate(d)
    }

    /// `P_LOS PL_LOS + (1 - P_LOS) PL_NLOS`.
    pub fn mean_pl(&self, d: T) -> Result<T> {
        check_reference(d)?;
        let p = self.p_los_at(d);
        let los = self.los.mean_pl(d)?;
        if p == T::one() {
            return Ok(los);
        }
        Ok(p * los + (T::one() - p) * self.nlos.mean_pl(d)?)
    }

    /// Distance-dependent shadow factor `sqrt(P^2 s_LOS^2 + (1 - P)^2 s_NLOS^2)`.
    pub fn shadow_sigma(&self, d: T) -> Result<T> {
        check_reference(d)?;
        let p = self.p_los_at(d);
        let a = p * self.los.shadow_std_db();
        let b = (T::one() - p) * self.nlos.shadow_std_db();
        Ok(a.hypot(b))
    }

    /// One shadowed path loss realization at `d`, drawing independent LOS and
    /// NLOS normal shadowing terms from `rng`.
    pub fn sample_pl<R: Rng + ?Sized>(&self, d: T, rng: &mut R) -> Result<T>
    where
        StandardNormal: Distribution<T>,
    {
        let mean = self.mean_pl(d)?;
        let p = self.p_los_at(d);
        let z_los: T = StandardNormal.sample(rng);
        let z_nlos: T = StandardNormal.sample(rng);
        Ok(mean
            + p * self.los.shadow_std_db() * z_los
            + (T::one() - p) * self.nlos.shadow_std_db() * z_nlos)
    }
}

pub fn mean_pl_hybrid<T: Scalar>(model: &HybridModel<T>, d: T) -> Result<T> {
    model.mean_pl(d)
}

pub fn shadow_sigma_hybrid<T: Scalar>(model: &HybridModel<T>, d: T) -> Result<T> {
    model.shadow_sigma(d)
}

pub fn sample_pl<T: Scalar, R: Rng + ?Sized>(model: &HybridModel<T>, d: T, rng: &mut R) -> Result<T>
where
    StandardNormal: Distribution<T>,
{
    model.sample_pl(d, rng)
}

/// Which NLOS model a hybrid uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlosKind {
    CloseIn,
    Floating,
}

impl std::str::FromStr for NlosKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "close-in" => Ok(NlosKind::CloseIn),
            "floating" => Ok(NlosKind::Floating),
            other => Err(Error::invalid("nlos", format!("unknown NLOS model {other:?}"))),
        }
    }
}

/// Published omnidirectional parameter set for one carrier frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterPreset {
    pub label: &'static str,
    pub frequency_hz: f64,
    /// `(exponent, shadow_std_db)`
    pub los: (f64, f64),
    /// `(exponent, shadow_std_db)`
    pub nlos_close_in: (f64, f64),
    /// `(intercept_db, slope, shadow_std_db)`
    pub nlos_floating: (f64, f64, f64),
    /// Distance range the floating-intercept line was fitted over.
    pub floating_range: (f64, f64),
}

pub const PRESET_28GHZ_NYC: ParameterPreset = ParameterPreset {
    label: "28GHz-NYC",
    frequency_hz: 28e9,
    los: (2.1, 3.6),
    nlos_close_in: (3.4, 9.7),
    nlos_floating: (79.2, 2.6, 9.6),
    floating_range: (30.0, 200.0),
};

pub const PRESET_73GHZ_NYC: ParameterPreset = ParameterPreset {
    label: "73GHz-NYC",
    frequency_hz: 73e9,
    los: (2.0, 4.8),
    nlos_close_in: (3.4, 7.9),
    nlos_floating: (80.6, 2.9, 7.8),
    floating_range: (30.0, 200.0),
};

pub const PRESETS: [ParameterPreset; 2] = [PRESET_28GHZ_NYC, PRESET_73GHZ_NYC];

impl ParameterPreset {
    pub fn by_label(label: &str) -> Option<&'static ParameterPreset> {
        PRESETS.iter().find(|p| p.label == label)
    }

    pub fn los_model<T: Scalar>(&self) -> CloseInModel<T> {
        CloseInModel::new(T::lit(self.frequency_hz), T::lit(self.los.0), T::lit(self.los.1)).unwrap()
    }

    pub fn nlos_close_in_model<T: Scalar>(&self) -> CloseInModel<T> {
        let (n, s) = self.nlos_close_in;
        CloseInModel::new(T::lit(self.frequency_hz), T::lit(n), T::lit(s)).unwrap()
    }

    pub fn nlos_floating_model<T: Scalar>(&self) -> FloatingInterceptModel<T> {
        let (a, b, s) = self.nlos_floating;
        let (lo, hi) = self.floating_range;
        FloatingInterceptModel::new(T::lit(a), T::lit(b), T::lit(s), (T::lit(lo), T::lit(hi))).unwrap()
    }

    pub fn nlos_model<T: Scalar>(&self, kind: NlosKind) -> PathLossModel<T> {
        match kind {
            NlosKind::CloseIn => PathLossModel::CloseIn(self.nlos_close_in_model()),
            NlosKind::Floating => PathLossModel::FloatingIntercept(self.nlos_floating_model()),
        }
    }

    pub fn hybrid<T: Scalar>(&self, kind: NlosKind, p_los: LosProbParams<T>) -> HybridModel<T> {
        HybridModel::new(self.los_model(), self.nlos_model(kind), p_los)
    }
}
