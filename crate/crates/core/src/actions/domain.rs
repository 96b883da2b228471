use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polyhedron::{convex_hull, HalfSpace, Hull, Polyhedron, HULL_DIM_CAP};
use super::{ActionError, GroupElementSet};
use crate::lattice::DivisorClass;
use crate::models::{distance, lorentz_dot, to_klein, HyperboloidPoint, IdealPoint, KleinImage, MODEL_EPS};

/// Bisector half-space `{x : x·a ≤ x·y}` (points at least as close to `a`
/// as to `y`) in Klein coordinates: `w·(y_s − a_s) ≤ y₀ − a₀`.
pub fn bisector(a: &HyperboloidPoint, y: &HyperboloidPoint) -> Result<HalfSpace, ActionError> {
    let normal: Vec<f64> = y.spatial().iter().zip(a.spatial()).map(|(p, q)| p - q).collect();
    let offset = y.coords()[0] - a.coords()[0];
    let n = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(n > 0.0) {
        return Err(ActionError::DegenerateHalfSpace);
    }
    Ok(HalfSpace {
        normal: normal.iter().map(|x| x / n).collect(),
        offset: offset / n,
    })
}

/// Options for [`dirichlet_domain`].
#[derive(Debug, Clone, Default)]
pub struct DirichletOptions {
    /// Clip to an invariant convex set (e.g. the projected nef cone).
    pub restrict: Option<Polyhedron>,
    /// Drop redundant half-spaces (only for `n ≤ 4`).
    pub remove_redundant: bool,
}

/// Dirichlet polyhedron centered at `a` for the enumerated elements:
/// intersection of the bisectors between `a` and each `g·a`, `g ≠ 1`.
///
/// With a finite word ball this contains the true Dirichlet domain and
/// shrinks toward it as the word length grows.
pub fn dirichlet_domain(
    elems: &GroupElementSet,
    a: &HyperboloidPoint,
    opts: &DirichletOptions,
) -> Result<Polyhedron, ActionError> {
    let n = a.dim();
    let mut halfspaces = Vec::new();
    for e in elems.nontrivial() {
        let ga = e.isometry.apply(a);
        let d = distance(a, &ga)?;
        if d < 1e-9 {
            return Err(ActionError::NontrivialStabilizer { word: e.word.clone() });
        }
        halfspaces.push(bisector(a, &ga)?);
    }
    let mut p = Polyhedron::new(n, halfspaces)?;
    if let Some(r) = &opts.restrict {
        p = p.intersect(r)?;
    }
    if opts.remove_redundant && n <= HULL_DIM_CAP {
        p = p.remove_redundant()?;
    }
    Ok(p)
}

/// Number of enumerated `g` with `g·B(x, r) ∩ B(x, r) ≠ ∅`, i.e.
/// `d(x, g·x) < 2r`.
pub fn proper_action_count(elems: &GroupElementSet, x: &HyperboloidPoint, r: f64) -> Result<usize, ActionError> {
    if !(r > 0.0) {
        return Err(ActionError::NonPositiveRadius(r));
    }
    let displacements: Vec<f64> = elems
        .elements
        .par_iter()
        .map(|e| distance(x, &e.isometry.apply(x)))
        .collect::<Result<_, _>>()?;
    Ok(displacements.into_iter().filter(|&d| d < 2.0 * r).count())
}

/// Orbit points `g·x` whose Klein norm exceeds `1 − min_norm`, pushed to
/// the boundary and deduplicated within an angle of `1e-6`.
pub fn limit_points(elems: &GroupElementSet, x: &HyperboloidPoint, min_norm: f64) -> Vec<IdealPoint> {
    let mut out: Vec<IdealPoint> = Vec::new();
    for e in elems.iter() {
        let w = e.isometry.apply(x).to_klein();
        let norm = w.coords().norm();
        if norm > 1.0 - min_norm && norm > 0.0 {
            let b = IdealPoint::from_direction(w.coords()).expect("nonzero direction");
            if !out.iter().any(|c| c.angle_to(&b) < 1e-6) {
                out.push(b);
            }
        }
    }
    out
}

/// Generators of a closed convex cone inside the closed positive cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub rays: Vec<Vec<f64>>,
}

impl ConeSpec {
    pub fn from_classes(classes: &[DivisorClass]) -> Self {
        ConeSpec {
            rays: classes.iter().map(DivisorClass::to_f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeProjection {
    pub points: Vec<KleinImage>,
    /// `None` above the hull dimension cap.
    pub hull: Option<Hull>,
}

/// Radial projection of each ray to the Klein ball and the convex hull of
/// the images.
pub fn project_cone(n: usize, cone: &ConeSpec) -> Result<ConeProjection, ActionError> {
    if cone.rays.is_empty() {
        return Err(ActionError::EmptyInput);
    }
    let mut points = Vec::with_capacity(cone.rays.len());
    for (i, ray) in cone.rays.iter().enumerate() {
        if ray.len() != n + 1 {
            return Err(ActionError::DimensionMismatch {
                expected: n + 1,
                got: ray.len(),
            });
        }
        let v = DVector::from_column_slice(ray);
        let q = lorentz_dot(ray, ray);
        if ray[0] <= 0.0 || q < -MODEL_EPS * ray[0] * ray[0] {
            return Err(ActionError::RayOutsidePositiveCone { index: i, square: q });
        }
        points.push(to_klein(&v, MODEL_EPS)?);
    }
    let hull = if n <= HULL_DIM_CAP {
        Some(convex_hull(&points.iter().map(KleinImage::coords).collect::<Vec<_>>())?)
    } else {
        None
    };
    Ok(ConeProjection { points, hull })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::word_ball;
    use crate::models::Isometry;

    #[test]
    fn boost_slab() {
        let g = Isometry::boost(2, 1, 2.0);
        let elems = word_ball(&[g], 1).unwrap();
        let d = dirichlet_domain(&elems, &HyperboloidPoint::origin(2), &DirichletOptions::default()).unwrap();
        assert_eq!(d.side_count(), 2);
        let t = 1f64.tanh();
        let expected = Polyhedron::new(
            2,
            vec![
                HalfSpace::new(vec![1.0, 0.0], t).unwrap(),
                HalfSpace::new(vec![-1.0, 0.0], t).unwrap(),
            ],
        )
        .unwrap();
        assert!(d.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn trivial_group_gives_ball() {
        let elems = word_ball(&[Isometry::identity(2)], 3).unwrap();
        assert_eq!(elems.len(), 1);
        let d = dirichlet_domain(&elems, &HyperboloidPoint::origin(2), &DirichletOptions::default()).unwrap();
        assert_eq!(d.side_count(), 0);
    }

    #[test]
    fn stabilizer_rejected() {
        let r = Isometry::rotation(2, 1, 2, 1.0);
        let elems = word_ball(&[r], 1).unwrap();
        assert!(matches!(
            dirichlet_domain(&elems, &HyperboloidPoint::origin(2), &DirichletOptions::default()),
            Err(ActionError::NontrivialStabilizer { .. })
        ));
    }

    #[test]
    fn counts_for_boost() {
        let elems = word_ball(&[Isometry::boost(2, 1, 2.0)], 5).unwrap();
        let o = HyperboloidPoint::origin(2);
        assert_eq!(proper_action_count(&elems, &o, 0.5).unwrap(), 1);
        assert_eq!(proper_action_count(&elems, &o, 1.5).unwrap(), 3);
        assert!(proper_action_count(&elems, &o, 0.0).is_err());
    }

    #[test]
    fn limit_points_of_boost() {
        let elems = word_ball(&[Isometry::boost(2, 1, 2.0)], 10).unwrap();
        let pts = limit_points(&elems, &HyperboloidPoint::origin(2), 1e-6);
        assert_eq!(pts.len(), 2);
        let mut xs: Vec<f64> = pts.iter().map(|p| p.direction()[0]).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] + 1.0).abs() < 1e-12 && (xs[1] - 1.0).abs() < 1e-12);
        let finite = word_ball(&[Isometry::rotation(2, 1, 2, std::f64::consts::FRAC_PI_3)], 8).unwrap();
        let x = HyperboloidPoint::renormalized(&[0.5, 0.0]);
        assert!(limit_points(&finite, &x, 1e-6).is_empty());
    }

    #[test]
    fn cone_projection_examples() {
        let p = project_cone(1, &ConeSpec { rays: vec![vec![1.0, 0.0]] }).unwrap();
        assert_eq!(p.points[0].coords(), vec![0.0]);
        let p = project_cone(1, &ConeSpec { rays: vec![vec![1.0, 1.0], vec![1.0, -1.0]] }).unwrap();
        assert!(matches!(p.points[0], KleinImage::Boundary(_)));
        let hull = p.hull.unwrap();
        assert!(hull.polyhedron.satisfies_halfspaces(&[0.99], 1e-12));
        assert!(hull.polyhedron.satisfies_halfspaces(&[-1.0], 1e-12));
        let p = project_cone(1, &ConeSpec { rays: vec![vec![2.0, 1.0]] }).unwrap();
        assert!(matches!(&p.points[0], KleinImage::Interior(k) if (k.coords()[0] - 0.5).abs() < 1e-15));
        assert!(matches!(
            project_cone(1, &ConeSpec { rays: vec![vec![1.0, 2.0]] }),
            Err(ActionError::RayOutsidePositiveCone { index: 0, .. })
        ));
    }
}
