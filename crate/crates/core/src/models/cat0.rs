//! Euclidean comparison triangles and sampled CAT(0) inequality checks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{distance, GeodesicSegment, HyperboloidPoint, ModelError};

/// Planar triangle `A = (0, 0)`, `B = (d(a,b), 0)`, `C` above the x-axis,
/// with the same side lengths as the hyperbolic triangle `abc`.
pub fn comparison_triangle(
    a: &HyperboloidPoint,
    b: &HyperboloidPoint,
    c: &HyperboloidPoint,
) -> Result<[[f64; 2]; 3], ModelError> {
    let ab = distance(a, b)?;
    let ac = distance(a, c)?;
    let bc = distance(b, c)?;
    planar_triangle(ab, ac, bc)
}

pub(crate) fn planar_triangle(ab: f64, ac: f64, bc: f64) -> Result<[[f64; 2]; 3], ModelError> {
    if ![ab, ac, bc].iter().all(|x| x.is_finite()) {
        return Err(ModelError::NonFinite);
    }
    let excess = [ab - ac - bc, ac - ab - bc, bc - ab - ac]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    if excess > 1e-9 * (ab + ac + bc).max(1.0) {
        return Err(ModelError::TriangleInequality { excess });
    }
    let c = if ab == 0.0 {
        [ac, 0.0]
    } else {
        let x = (ab * ab + ac * ac - bc * bc) / (2.0 * ab);
        [x, (ac * ac - x * x).max(0.0).sqrt()]
    };
    Ok([[0.0, 0.0], [ab, 0.0], c])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cat0Report {
    /// Largest `d(p, q) − |P − Q|` seen; CAT(0) means this is ≤ 0 up to rounding.
    pub max_violation: f64,
    pub comparisons: usize,
}

/// Samples `samples` point pairs on each pair of sides sharing a vertex and
/// compares hyperbolic distances with distances in the comparison triangle.
pub fn cat0_check<R: Rng + ?Sized>(
    a: &HyperboloidPoint,
    b: &HyperboloidPoint,
    c: &HyperboloidPoint,
    samples: usize,
    rng: &mut R,
) -> Result<Cat0Report, ModelError> {
    let verts = [a, b, c];
    let planar = comparison_triangle(a, b, c)?;
    let mut max_violation = f64::NEG_INFINITY;
    let mut comparisons = 0;
    for apex in 0..3 {
        let (i, j) = ((apex + 1) % 3, (apex + 2) % 3);
        let side1 = GeodesicSegment::new(verts[apex].clone(), verts[i].clone())?;
        let side2 = GeodesicSegment::new(verts[apex].clone(), verts[j].clone())?;
        for _ in 0..samples.max(1) {
            let (s, t): (f64, f64) = (rng.random(), rng.random());
            let p = side1.point_at_fraction(s)?;
            let q = side2.point_at_fraction(t)?;
            let pp = lerp(planar[apex], planar[i], s);
            let qq = lerp(planar[apex], planar[j], t);
            let euclid = ((pp[0] - qq[0]).powi(2) + (pp[1] - qq[1]).powi(2)).sqrt();
            max_violation = max_violation.max(distance(&p, &q)? - euclid);
            comparisons += 1;
        }
    }
    Ok(Cat0Report {
        max_violation,
        comparisons,
    })
}

fn lerp(p: [f64; 2], q: [f64; 2], s: f64) -> [f64; 2] {
    [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]
}
