//! Hyperbolic n-space in three models, all built on the Lorentz form
//! `x·y = x₀y₀ − x₁y₁ − … − xₙyₙ` of signature `(1, n)`.
//!
//! * Hyperboloid: `{v : v·v = 1, v₀ > 0}`.
//! * Klein: radial projection onto `{v₀ = 1}`, the open unit ball, where
//!   geodesics are straight chords.
//! * Poincaré: stereographic projection from the south pole `−e₀`.
//!
//! Distances are always measured on the hyperboloid. Ideal points are
//! isotropic vectors normalized to `b₀ = 1`.

mod cat0;
mod horoball;
mod isometry;
pub mod sample;

pub use cat0::{cat0_check, comparison_triangle, Cat0Report};
pub use horoball::{busemann, EuclideanBall, Horoball};
pub use isometry::{IsometryClass, IsometryKind, Isometry};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default model tolerance for membership tests.
pub const MODEL_EPS: f64 = 1e-9;
/// Default tolerance for spectral classification of isometries.
pub const CLASSIFY_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("vector is not on the hyperboloid: |v·v − 1| = {residual:e}")]
    NotOnHyperboloid { residual: f64 },
    #[error("vector lies on the lower sheet or has v₀ ≤ 0 (v₀ = {v0})")]
    WrongSheet { v0: f64 },
    #[error("point has Euclidean norm {norm} ≥ 1, outside the open unit ball")]
    OutsideBall { norm: f64 },
    #[error("vector is not isotropic: |b·b| = {residual:e}")]
    NotIdeal { residual: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Lorentz product {product} is below 1; inputs are not valid hyperboloid points")]
    InvalidProduct { product: f64 },
    #[error("parameter {t} outside [0, {max}]")]
    ParameterOutOfRange { t: f64, max: f64 },
    #[error("matrix does not preserve the Lorentz form: residual {residual:e}")]
    NotFormPreserving { residual: f64 },
    #[error("matrix is not orthochronous")]
    NotOrthochronous,
    #[error("non-finite input")]
    NonFinite,
    #[error("triangle inequality violated by {excess:e}")]
    TriangleInequality { excess: f64 },
    #[error("zero direction cannot define an ideal point")]
    ZeroDirection,
}

/// Lorentz product on coordinate slices.
pub fn lorentz_dot(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    u[0] * v[0] - u[1..].iter().zip(&v[1..]).map(|(a, b)| a * b).sum::<f64>()
}

/// The form `diag(+1, −1, …, −1)` on ℝⁿ⁺¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LorentzForm {
    pub n: usize,
}

impl LorentzForm {
    pub fn new(n: usize) -> Self {
        LorentzForm { n }
    }

    pub fn dot(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        lorentz_dot(u.as_slice(), v.as_slice())
    }

    pub fn gram(&self) -> nalgebra::DMatrix<f64> {
        let mut g = nalgebra::DMatrix::identity(self.n + 1, self.n + 1) * -1.0;
        g[(0, 0)] = 1.0;
        g
    }
}

fn check_finite(v: &DVector<f64>) -> Result<(), ModelError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(ModelError::NonFinite)
    }
}

/// Point on the upper sheet of the hyperboloid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct HyperboloidPoint(DVector<f64>);

impl HyperboloidPoint {
    pub fn new(v: DVector<f64>) -> Result<Self, ModelError> {
        Self::new_with_tol(v, MODEL_EPS)
    }

    /// `eps` is relative to `max(1, v₀²)`: far points carry rounding
    /// proportional to the square of their coordinates.
    pub fn new_with_tol(v: DVector<f64>, eps: f64) -> Result<Self, ModelError> {
        check_finite(&v)?;
        if v.len() < 2 {
            return Err(ModelError::DimensionMismatch { expected: 2, got: v.len() });
        }
        if v[0] <= 0.0 {
            return Err(ModelError::WrongSheet { v0: v[0] });
        }
        let residual = (lorentz_dot(v.as_slice(), v.as_slice()) - 1.0).abs();
        if residual > eps * v[0].powi(2).max(1.0) {
            return Err(ModelError::NotOnHyperboloid { residual });
        }
        Ok(HyperboloidPoint(v))
    }

    pub fn from_slice(v: &[f64]) -> Result<Self, ModelError> {
        Self::new(DVector::from_column_slice(v))
    }

    /// `e₀ = (1, 0, …, 0)`.
    pub fn origin(n: usize) -> Self {
        let mut v = DVector::zeros(n + 1);
        v[0] = 1.0;
        HyperboloidPoint(v)
    }

    /// Point at distance `t` from `e₀` in the direction of the unit spatial
    /// vector `dir`: `(cosh t, sinh t · dir)`.
    pub fn along(dir: &DVector<f64>, t: f64) -> Result<Self, ModelError> {
        let norm = dir.norm();
        if norm == 0.0 {
            return Err(ModelError::ZeroDirection);
        }
        let mut v = DVector::zeros(dir.len() + 1);
        v[0] = t.cosh();
        for i in 0..dir.len() {
            v[i + 1] = t.sinh() * dir[i] / norm;
        }
        Ok(HyperboloidPoint(v))
    }

    /// Re-projects an approximately valid vector onto the hyperboloid by
    /// recomputing `v₀` from the spatial part.
    pub fn renormalized(spatial: &[f64]) -> Self {
        let s2: f64 = spatial.iter().map(|x| x * x).sum();
        let mut v = DVector::zeros(spatial.len() + 1);
        v[0] = (1.0 + s2).sqrt();
        v.as_mut_slice()[1..].copy_from_slice(spatial);
        HyperboloidPoint(v)
    }

    pub(crate) fn new_unchecked(v: DVector<f64>) -> Self {
        HyperboloidPoint(v)
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn spatial(&self) -> &[f64] {
        &self.0.as_slice()[1..]
    }

    /// Hyperbolic dimension n.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn dot(&self, other: &HyperboloidPoint) -> f64 {
        lorentz_dot(self.0.as_slice(), other.0.as_slice())
    }

    pub fn distance(&self, other: &HyperboloidPoint) -> Result<f64, ModelError> {
        distance(self, other)
    }

    pub fn to_klein(&self) -> KleinPoint {
        KleinPoint(DVector::from_iterator(self.dim(), self.spatial().iter().map(|x| x / self.0[0])))
    }

    pub fn to_poincare(&self) -> PoincarePoint {
        let d = 1.0 + self.0[0];
        PoincarePoint(DVector::from_iterator(self.dim(), self.spatial().iter().map(|x| x / d)))
    }
}

impl TryFrom<Vec<f64>> for HyperboloidPoint {
    type Error = ModelError;
    fn try_from(v: Vec<f64>) -> Result<Self, ModelError> {
        HyperboloidPoint::new(DVector::from_vec(v))
    }
}

impl From<HyperboloidPoint> for Vec<f64> {
    fn from(p: HyperboloidPoint) -> Vec<f64> {
        p.0.as_slice().to_vec()
    }
}

fn ball_point(w: DVector<f64>) -> Result<DVector<f64>, ModelError> {
    check_finite(&w)?;
    let norm = w.norm();
    if norm >= 1.0 {
        return Err(ModelError::OutsideBall { norm });
    }
    Ok(w)
}

/// Point of the Klein (projective) ball model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct KleinPoint(DVector<f64>);

impl KleinPoint {
    pub fn new(w: DVector<f64>) -> Result<Self, ModelError> {
        ball_point(w).map(KleinPoint)
    }

    pub fn from_slice(w: &[f64]) -> Result<Self, ModelError> {
        Self::new(DVector::from_column_slice(w))
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    /// `(1, w) / √(1 − |w|²)`.
    pub fn to_hyperboloid(&self) -> HyperboloidPoint {
        let s = (1.0 - self.0.norm_squared()).sqrt();
        let mut v = DVector::zeros(self.0.len() + 1);
        v[0] = 1.0 / s;
        for i in 0..self.0.len() {
            v[i + 1] = self.0[i] / s;
        }
        HyperboloidPoint(v)
    }

    pub fn to_poincare(&self) -> PoincarePoint {
        let s = 1.0 + (1.0 - self.0.norm_squared()).sqrt();
        PoincarePoint(&self.0 / s)
    }
}

impl TryFrom<Vec<f64>> for KleinPoint {
    type Error = ModelError;
    fn try_from(v: Vec<f64>) -> Result<Self, ModelError> {
        KleinPoint::new(DVector::from_vec(v))
    }
}

impl From<KleinPoint> for Vec<f64> {
    fn from(p: KleinPoint) -> Vec<f64> {
        p.0.as_slice().to_vec()
    }
}

/// Point of the Poincaré ball model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PoincarePoint(DVector<f64>);

impl PoincarePoint {
    pub fn new(u: DVector<f64>) -> Result<Self, ModelError> {
        ball_point(u).map(PoincarePoint)
    }

    pub fn from_slice(u: &[f64]) -> Result<Self, ModelError> {
        Self::new(DVector::from_column_slice(u))
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    /// `((1 + |u|²), 2u) / (1 − |u|²)`.
    pub fn to_hyperboloid(&self) -> HyperboloidPoint {
        let r2 = self.0.norm_squared();
        let d = 1.0 - r2;
        let mut v = DVector::zeros(self.0.len() + 1);
        v[0] = (1.0 + r2) / d;
        for i in 0..self.0.len() {
            v[i + 1] = 2.0 * self.0[i] / d;
        }
        HyperboloidPoint(v)
    }

    pub fn to_klein(&self) -> KleinPoint {
        let r2 = self.0.norm_squared();
        KleinPoint(&self.0 * (2.0 / (1.0 + r2)))
    }
}

impl TryFrom<Vec<f64>> for PoincarePoint {
    type Error = ModelError;
    fn try_from(v: Vec<f64>) -> Result<Self, ModelError> {
        PoincarePoint::new(DVector::from_vec(v))
    }
}

impl From<PoincarePoint> for Vec<f64> {
    fn from(p: PoincarePoint) -> Vec<f64> {
        p.0.as_slice().to_vec()
    }
}

/// Point on the sphere at infinity, stored as an isotropic vector with `b₀ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct IdealPoint(DVector<f64>);

impl IdealPoint {
    /// Normalizes `b` by `b₀` and checks that it is isotropic.
    pub fn new(b: DVector<f64>) -> Result<Self, ModelError> {
        check_finite(&b)?;
        if b[0] <= 0.0 {
            return Err(ModelError::WrongSheet { v0: b[0] });
        }
        let b = &b / b[0];
        let residual = lorentz_dot(b.as_slice(), b.as_slice()).abs();
        if residual > MODEL_EPS {
            return Err(ModelError::NotIdeal { residual });
        }
        Ok(IdealPoint(b))
    }

    /// The endpoint in the direction of the spatial vector `dir`.
    pub fn from_direction(dir: &DVector<f64>) -> Result<Self, ModelError> {
        check_finite(dir)?;
        let norm = dir.norm();
        if norm == 0.0 {
            return Err(ModelError::ZeroDirection);
        }
        let mut b = DVector::zeros(dir.len() + 1);
        b[0] = 1.0;
        for i in 0..dir.len() {
            b[i + 1] = dir[i] / norm;
        }
        Ok(IdealPoint(b))
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Unit vector on the boundary sphere; the Klein and Poincaré images agree there.
    pub fn direction(&self) -> DVector<f64> {
        let s = DVector::from_column_slice(&self.0.as_slice()[1..]);
        let n = s.norm();
        s / n
    }

    /// Angle between the boundary directions of two ideal points.
    pub fn angle_to(&self, other: &IdealPoint) -> f64 {
        self.direction().dot(&other.direction()).clamp(-1.0, 1.0).acos()
    }
}

impl TryFrom<Vec<f64>> for IdealPoint {
    type Error = ModelError;
    fn try_from(v: Vec<f64>) -> Result<Self, ModelError> {
        IdealPoint::new(DVector::from_vec(v))
    }
}

impl From<IdealPoint> for Vec<f64> {
    fn from(p: IdealPoint) -> Vec<f64> {
        p.0.as_slice().to_vec()
    }
}

/// Image of a future-pointing ray under radial projection to `{v₀ = 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "coords", rename_all = "lowercase")]
pub enum KleinImage {
    Interior(KleinPoint),
    Boundary(Vec<f64>),
}

impl KleinImage {
    pub fn coords(&self) -> Vec<f64> {
        match self {
            KleinImage::Interior(p) => p.coords().as_slice().to_vec(),
            KleinImage::Boundary(w) => w.clone(),
        }
    }
}

/// Radial projection of any vector in the closed positive cone: timelike
/// vectors land in the open ball, isotropic ones (`|v·v| ≤ eps·v₀²`) on the
/// unit sphere.
pub fn to_klein(v: &DVector<f64>, eps: f64) -> Result<KleinImage, ModelError> {
    check_finite(v)?;
    if v[0] <= 0.0 {
        return Err(ModelError::WrongSheet { v0: v[0] });
    }
    let w: Vec<f64> = v.as_slice()[1..].iter().map(|x| x / v[0]).collect();
    let q = lorentz_dot(v.as_slice(), v.as_slice()) / (v[0] * v[0]);
    if q.abs() <= eps {
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(KleinImage::Boundary(w.iter().map(|x| x / n).collect()))
    } else if q > 0.0 {
        Ok(KleinImage::Interior(KleinPoint(DVector::from_vec(w))))
    } else {
        Err(ModelError::OutsideBall {
            norm: w.iter().map(|x| x * x).sum::<f64>().sqrt(),
        })
    }
}

/// Hyperbolic distance `argcosh(u·v)`.
///
/// Evaluated as `2·asinh(√(−(u−v)·(u−v)) / 2)` when the points are close,
/// which agrees with `argcosh(u·v)` exactly but does not lose half the
/// digits near `u = v`.
pub fn distance(u: &HyperboloidPoint, v: &HyperboloidPoint) -> Result<f64, ModelError> {
    distance_with_tol(u, v, MODEL_EPS)
}

pub fn distance_with_tol(u: &HyperboloidPoint, v: &HyperboloidPoint, eps: f64) -> Result<f64, ModelError> {
    if u.dim() != v.dim() {
        return Err(ModelError::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    let p = u.dot(v);
    if !p.is_finite() {
        return Err(ModelError::NonFinite);
    }
    let scale = (u.0[0] * v.0[0]).max(1.0);
    if p < 1.0 - eps * scale {
        return Err(ModelError::InvalidProduct { product: p });
    }
    if p > 2.0 {
        return Ok(p.acosh());
    }
    let diff = &u.0 - &v.0;
    let q = -lorentz_dot(diff.as_slice(), diff.as_slice());
    Ok(2.0 * (q.max(0.0).sqrt() / 2.0).asinh())
}

/// Which model a [`ModelPoint`] is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Hyperboloid,
    Klein,
    Poincare,
}

/// A point of Hⁿ tagged with its model. JSON form:
/// `{"model": "klein", "coords": [0.1, 0.2]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "coords", rename_all = "lowercase")]
pub enum ModelPoint {
    Hyperboloid(HyperboloidPoint),
    Klein(KleinPoint),
    Poincare(PoincarePoint),
}

impl ModelPoint {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelPoint::Hyperboloid(_) => ModelKind::Hyperboloid,
            ModelPoint::Klein(_) => ModelKind::Klein,
            ModelPoint::Poincare(_) => ModelKind::Poincare,
        }
    }

    pub fn to_hyperboloid(&self) -> HyperboloidPoint {
        match self {
            ModelPoint::Hyperboloid(p) => p.clone(),
            ModelPoint::Klein(p) => p.to_hyperboloid(),
            ModelPoint::Poincare(p) => p.to_hyperboloid(),
        }
    }

    pub fn from_hyperboloid(p: &HyperboloidPoint, kind: ModelKind) -> ModelPoint {
        match kind {
            ModelKind::Hyperboloid => ModelPoint::Hyperboloid(p.clone()),
            ModelKind::Klein => ModelPoint::Klein(p.to_klein()),
            ModelKind::Poincare => ModelPoint::Poincare(p.to_poincare()),
        }
    }

    pub fn convert(&self, kind: ModelKind) -> ModelPoint {
        Self::from_hyperboloid(&self.to_hyperboloid(), kind)
    }

    pub fn distance(&self, other: &ModelPoint) -> Result<f64, ModelError> {
        distance(&self.to_hyperboloid(), &other.to_hyperboloid())
    }
}

/// Geodesic segment `[a, b]` parametrized by arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicSegment {
    a: HyperboloidPoint,
    b: HyperboloidPoint,
    length: f64,
}

impl GeodesicSegment {
    pub fn new(a: HyperboloidPoint, b: HyperboloidPoint) -> Result<Self, ModelError> {
        let length = distance(&a, &b)?;
        Ok(GeodesicSegment { a, b, length })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn start(&self) -> &HyperboloidPoint {
        &self.a
    }

    pub fn end(&self) -> &HyperboloidPoint {
        &self.b
    }

    /// `γ(t) = (sinh(ℓ − t)·a + sinh(t)·b) / sinh ℓ`, for `0 ≤ t ≤ ℓ`.
    pub fn point_at(&self, t: f64) -> Result<HyperboloidPoint, ModelError> {
        let l = self.length;
        let slack = 1e-12 * l.max(1.0);
        if !(t >= -slack && t <= l + slack) {
            return Err(ModelError::ParameterOutOfRange { t, max: l });
        }
        if l == 0.0 {
            return Ok(self.a.clone());
        }
        let t = t.clamp(0.0, l);
        let s = l.sinh();
        let v = self.a.coords() * ((l - t).sinh() / s) + self.b.coords() * (t.sinh() / s);
        Ok(HyperboloidPoint(v))
    }

    /// Point at fraction `s ∈ [0, 1]` of the way from `a` to `b`.
    pub fn point_at_fraction(&self, s: f64) -> Result<HyperboloidPoint, ModelError> {
        self.point_at(s * self.length)
    }
}
