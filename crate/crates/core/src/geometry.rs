//! Building database made of axis-aligned boxes, and line-of-sight queries
//! against it.
//!
//! Coordinates are local Cartesian meters with `z` the height above a flat
//! ground plane at `z = 0`. Segments are tested against *closed* boxes
//! inflated by [`GEOMETRY_EPS`], so a ray that only grazes a face counts as
//! blocked. Point containment uses the *open* box shrunk by the same epsilon,
//! so a point on a wall is outside the building.

use std::ops::{Add, Sub};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance in meters for face contact and containment tests.
pub const GEOMETRY_EPS: f64 = 1e-9;

/// Mean Earth radius used by the equirectangular projection.
const EARTH_RADIUS_M: f64 = 6_371_008.8;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Point3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    /// Coordinate along axis 0 (x), 1 (y) or 2 (z).
    #[inline]
    pub fn axis(&self, i: usize) -> T {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis index {i} out of range"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn distance(&self, other: &Self) -> T {
        let d = *other - *self;
        (d.x * d.x + d.y * d.y + d.z * d.z).sqrt()
    }

    fn lex_le(&self, other: &Self) -> bool {
        (self.x, self.y, self.z) <= (other.x, other.y, other.z)
    }
}

impl<T: Scalar> Add for Point3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<T: Scalar> Sub for Point3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

/// Axis-aligned box standing on or above the ground.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3<T> {
    min: Point3<T>,
    max: Point3<T>,
}

impl<T: Scalar> Box3<T> {
    pub fn new(min: Point3<T>, max: Point3<T>) -> Result<Self> {
        Self::validated(min, max, 0)
    }

    fn validated(min: Point3<T>, max: Point3<T>, index: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::NonFinite { what: "building corner" });
        }
        if (0..3).any(|i| min.axis(i) >= max.axis(i)) {
            return Err(Error::DegenerateBox { index });
        }
        if min.z < T::zero() {
            return Err(Error::NegativeBase { index, z: min.z.as_f64() });
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> Point3<T> {
        self.min
    }

    pub fn max(&self) -> Point3<T> {
        self.max
    }

    /// Strict interior test with the boundary (within epsilon) counted as outside.
    pub fn contains_strictly(&self, p: &Point3<T>) -> bool {
        let eps = T::lit(GEOMETRY_EPS);
        (0..3).all(|i| p.axis(i) > self.min.axis(i) + eps && p.axis(i) < self.max.axis(i) - eps)
    }

    pub fn translated(&self, offset: Point3<T>) -> Self {
        Self { min: self.min + offset, max: self.max + offset }
    }
}

/// True iff the closed segment `[a, b]` touches the closed box.
///
/// Slab clipping of the parametric segment against the box inflated by
/// [`GEOMETRY_EPS`]. Endpoints are put in a canonical order first so the
/// result is exactly symmetric in `a` and `b`.
pub fn segment_intersects_box<T: Scalar>(a: &Point3<T>, b: &Point3<T>, bx: &Box3<T>) -> bool {
    let (a, b) = if a.lex_le(b) { (a, b) } else { (b, a) };
    let eps = T::lit(GEOMETRY_EPS);
    let mut t_enter = T::zero();
    let mut t_exit = T::one();
    for i in 0..3 {
        let lo = bx.min.axis(i) - eps;
        let hi = bx.max.axis(i) + eps;
        let origin = a.axis(i);
        let dir = b.axis(i) - origin;
        if dir == T::zero() {
            if origin < lo || origin > hi {
                return false;
            }
            continue;
        }
        let mut t0 = (lo - origin) / dir;
        let mut t1 = (hi - origin) / dir;
        if t0 > t1 {
            std::mem::swap(&mut t0, &mut t1);
        }
        t_enter = t_enter.max(t0);
        t_exit = t_exit.min(t1);
        if t_enter > t_exit {
            return false;
        }
    }
    true
}

/// Anchor for converting latitude/longitude metadata into local meters.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct GeoOrigin {
    pub lat: f64,
    pub lon: f64,
}

impl GeoOrigin {
    /// Equirectangular local tangent plane projection: `x` east, `y` north.
    pub fn to_local(&self, lat: f64, lon: f64) -> (f64, f64) {
        let x = EARTH_RADIUS_M * (lon - self.lon).to_radians() * self.lat.to_radians().cos();
        let y = EARTH_RADIUS_M * (lat - self.lat).to_radians();
        (x, y)
    }
}

/// Transmitter location. Latitude/longitude are kept as metadata only.
#[derive(Debug, Clone, PartialEq)]
pub struct TxSite<T> {
    pub id: String,
    pub position: Point3<T>,
    pub lat_lon: Option<(f64, f64)>,
}

impl<T: Scalar> TxSite<T> {
    pub fn new(id: impl Into<String>, position: Point3<T>) -> Self {
        Self { id: id.into(), position, lat_lon: None }
    }

    /// Places a site given in degrees relative to `origin`, at `height` meters.
    pub fn from_geo(id: impl Into<String>, lat: f64, lon: f64, height: f64, origin: &GeoOrigin) -> Self {
        let (x, y) = origin.to_local(lat, lon);
        Self {
            id: id.into(),
            position: Point3::new(T::lit(x), T::lit(y), T::lit(height)),
            lat_lon: Some((lat, lon)),
        }
    }
}

/// Immutable set of buildings.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildingDb<T> {
    name: String,
    origin: Option<GeoOrigin>,
    buildings: Vec<Box3<T>>,
    sites: Vec<TxSite<T>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DbDocument {
    #[serde(default)]
    name: String,
    #[serde(default)]
    origin: Option<GeoOrigin>,
    #[serde(default)]
    buildings: Vec<BoxDocument>,
    #[serde(default)]
    sites: Vec<SiteDocument>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxDocument {
    min: [f64; 3],
    max: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SiteDocument {
    id: String,
    #[serde(default)]
    position: Option<[f64; 3]>,
    #[serde(default)]
    lat: Option<f64>,
    #[serde(default)]
    lon: Option<f64>,
    #[serde(default)]
    height: Option<f64>,
}

fn point_from<T: Scalar>(v: [f64; 3], what: &'static str) -> Result<Point3<T>> {
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite { what });
    }
    Ok(Point3::new(T::lit(v[0]), T::lit(v[1]), T::lit(v[2])))
}

impl<T: Scalar> BuildingDb<T> {
    pub fn new(name: impl Into<String>, buildings: Vec<Box3<T>>) -> Self {
        Self { name: name.into(), origin: None, buildings, sites: Vec::new() }
    }

    /// Open field with no buildings.
    pub fn empty() -> Self {
        Self::new("empty", Vec::new())
    }

    /// Parses a building database document (JSON).
    pub fn from_json_str(document: &str) -> Result<Self> {
        let doc: DbDocument = serde_json::from_str(document)
            .map_err(|e| Error::Parse { what: "building database", message: e.to_string() })?;

        let buildings = doc
            .buildings
            .iter()
            .enumerate()
            .map(|(index, b)| {
                Box3::validated(point_from(b.min, "building corner")?, point_from(b.max, "building corner")?, index)
            })
            .collect::<Result<Vec<_>>>()?;

        let mut db = Self { name: doc.name, origin: doc.origin, buildings, sites: Vec::new() };
        for s in doc.sites {
            let site = match (s.position, s.lat, s.lon) {
                (Some(p), None, None) => TxSite::new(s.id, point_from(p, "site position")?),
                (None, Some(lat), Some(lon)) => {
                    let origin = db.origin.ok_or_else(|| Error::Parse {
                        what: "building database",
                        message: format!("site {} uses lat/lon but the document has no origin", s.id),
                    })?;
                    let height = s.height.unwrap_or(0.0);
                    if !(lat.is_finite() && lon.is_finite() && height.is_finite()) {
                        return Err(Error::NonFinite { what: "site position" });
                    }
                    TxSite::from_geo(s.id, lat, lon, height, &origin)
                }
                _ => {
                    return Err(Error::Parse {
                        what: "building database",
                        message: format!("site {} needs either position or lat/lon", s.id),
                    })
                }
            };
            if let Some(index) = db.building_containing(&site.position) {
                return Err(Error::InsideBuilding { role: "site", index });
            }
            db.sites.push(site);
        }
        Ok(db)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn origin(&self) -> Option<&GeoOrigin> {
        self.origin.as_ref()
    }

    pub fn buildings(&self) -> &[Box3<T>] {
        &self.buildings
    }

    pub fn sites(&self) -> &[TxSite<T>] {
        &self.sites
    }

    pub fn site(&self, id: &str) -> Option<&TxSite<T>> {
        self.sites.iter().find(|s| s.id == id)
    }

    /// Index of the first building strictly containing `p`.
    pub fn building_containing(&self, p: &Point3<T>) -> Option<usize> {
        self.buildings.iter().position(|b| b.contains_strictly(p))
    }

    pub fn point_in_any_building(&self, p: &Point3<T>) -> bool {
        self.building_containing(p).is_some()
    }

    /// True iff no building touches the straight segment between `tx` and `rx`.
    pub fn is_los(&self, tx: &Point3<T>, rx: &Point3<T>) -> Result<bool> {
        if let Some(index) = self.building_containing(tx) {
            return Err(Error::InsideBuilding { role: "transmitter", index });
        }
        if let Some(index) = self.building_containing(rx) {
            return Err(Error::InsideBuilding { role: "receiver", index });
        }
        Ok(self.is_los_unchecked(tx, rx))
    }

    pub(crate) fn is_los_unchecked(&self, tx: &Point3<T>, rx: &Point3<T>) -> bool {
        !self.buildings.iter().any(|b| segment_intersects_box(tx, rx, b))
    }
}
