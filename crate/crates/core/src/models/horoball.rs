use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{HyperboloidPoint, IdealPoint, Isometry, ModelError, PoincarePoint};

/// Busemann function normalized to vanish at `e₀`: `β_b(x) = log(x·b)` for
/// `b₀ = 1`. It decreases at unit rate along every geodesic running into `b`.
pub fn busemann(b: &IdealPoint, x: &HyperboloidPoint) -> Result<f64, ModelError> {
    if b.dim() != x.dim() {
        return Err(ModelError::DimensionMismatch {
            expected: b.dim(),
            got: x.dim(),
        });
    }
    let p = super::lorentz_dot(b.coords().as_slice(), x.coords().as_slice());
    if !(p > 0.0) {
        return Err(ModelError::InvalidProduct { product: p });
    }
    Ok(p.ln())
}

/// Open horoball `{x : β_base(x) < level}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Horoball {
    pub base: IdealPoint,
    pub level: f64,
}

/// Euclidean ball in the Poincaré model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclideanBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Horoball {
    pub fn new(base: IdealPoint, level: f64) -> Result<Self, ModelError> {
        if !level.is_finite() {
            return Err(ModelError::NonFinite);
        }
        Ok(Horoball { base, level })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn busemann(&self, x: &HyperboloidPoint) -> Result<f64, ModelError> {
        busemann(&self.base, x)
    }

    /// Membership in the open horoball.
    pub fn contains(&self, x: &HyperboloidPoint) -> Result<bool, ModelError> {
        Ok(self.busemann(x)? < self.level)
    }

    /// Radius of the Poincaré ball tangent to the sphere at the base
    /// direction. The horosphere meets the axis toward `u` at distance
    /// `−level` from `e₀`, i.e. at Poincaré radius `tanh(−level/2)`.
    pub fn euclidean_radius(&self) -> f64 {
        (1.0 - (-self.level / 2.0).tanh()) / 2.0
    }

    /// The horoball as a Euclidean ball in the Poincaré model: center
    /// `(1 − r)·u`, radius `r`, tangent to the unit sphere at `u`.
    pub fn to_euclidean(&self) -> EuclideanBall {
        let r = self.euclidean_radius();
        let u = self.base.direction();
        EuclideanBall {
            center: (u * (1.0 - r)).as_slice().to_vec(),
            radius: r,
        }
    }

    /// Point of the bounding horosphere diametrically opposite the
    /// tangency point, in Poincaré coordinates.
    pub fn antipode_poincare(&self) -> PoincarePoint {
        let u = self.base.direction();
        PoincarePoint::new(u * (-self.level / 2.0).tanh()).expect("|tanh| < 1")
    }

    /// Whether the closures of two horoballs are disjoint. Horoballs with
    /// the same base are nested, never disjoint.
    pub fn disjoint(&self, other: &Horoball) -> bool {
        if self.base.angle_to(&other.base) < 1e-12 {
            return false;
        }
        let a = self.to_euclidean();
        let b = other.to_euclidean();
        let gap: f64 = a
            .center
            .iter()
            .zip(&b.center)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        gap > a.radius + b.radius + 1e-12
    }

    /// `g(B)`: based at `g·b` with level shifted by `−log (g·b)₀`.
    pub fn transformed(&self, g: &Isometry) -> Horoball {
        let (base, scale) = g.apply_ideal(&self.base);
        Horoball {
            base,
            level: self.level - scale.ln(),
        }
    }

    /// Base direction as a spatial unit vector.
    pub fn direction(&self) -> DVector<f64> {
        self.base.direction()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(dir: &[f64]) -> IdealPoint {
        IdealPoint::from_direction(&DVector::from_column_slice(dir)).unwrap()
    }

    #[test]
    fn busemann_at_origin_is_zero() {
        for d in [[1.0, 0.0], [0.6, -0.8], [-1.0, 1.0]] {
            let b = ideal(&d);
            assert!(busemann(&b, &HyperboloidPoint::origin(2)).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn busemann_along_axis() {
        let b = ideal(&[1.0, 0.0]);
        for s in [0.5, 1.0, 3.0] {
            let x = HyperboloidPoint::along(&DVector::from_vec(vec![1.0, 0.0]), s).unwrap();
            assert!((busemann(&b, &x).unwrap() + s).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_for_level_minus_log3() {
        let h = Horoball::new(ideal(&[0.0, 1.0]), -(3f64.ln())).unwrap();
        let ball = h.to_euclidean();
        assert!((ball.radius - 0.25).abs() < 1e-15);
        assert!(ball.center[0].abs() < 1e-15);
        assert!((ball.center[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn radius_shrinks_with_level() {
        let b = ideal(&[1.0, 0.0]);
        let mut last = f64::INFINITY;
        for level in [2.0, 0.0, -1.0, -5.0, -20.0, -40.0] {
            let r = Horoball::new(b.clone(), level).unwrap().euclidean_radius();
            assert!(r < last);
            last = r;
        }
        assert!(last < 1e-15);
    }

    #[test]
    fn disjointness() {
        let a = Horoball::new(ideal(&[1.0, 0.0]), -(3f64.ln())).unwrap();
        let b = Horoball::new(ideal(&[0.0, 1.0]), -(3f64.ln())).unwrap();
        assert!(a.disjoint(&b));
        let same = Horoball::new(ideal(&[1.0, 0.0]), -10.0).unwrap();
        assert!(!a.disjoint(&same));
        let tiny = Horoball::new(ideal(&[-1.0, 0.0]), -10.0).unwrap();
        assert!(same.disjoint(&tiny));
        let big = Horoball::new(ideal(&[-1.0, 0.0]), 1.0).unwrap();
        let big2 = Horoball::new(ideal(&[1.0, 0.0]), 1.0).unwrap();
        assert!(!big.disjoint(&big2));
    }

    #[test]
    fn transformed_is_the_image() {
        let h = Horoball::new(ideal(&[0.6, 0.8]), -0.4).unwrap();
        let g = Isometry::boost(2, 1, 0.9).compose(&Isometry::rotation(2, 1, 2, 0.2));
        let gh = h.transformed(&g);
        for x in [[0.1, 0.2], [0.5, 0.9], [-0.3, 1.5], [0.9, 0.0]] {
            let p = HyperboloidPoint::renormalized(&x);
            let gp = g.apply(&p);
            let lhs = gh.busemann(&gp).unwrap() - gh.level;
            let rhs = h.busemann(&p).unwrap() - h.level;
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
