use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::ActionError;

/// Largest dimension for which hulls and redundancy elimination run.
pub const HULL_DIM_CAP: usize = 4;

/// `{w : normal·w ≤ offset}` in Klein coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self, ActionError> {
        let n = norm(&normal);
        if !(n > 0.0) || !offset.is_finite() {
            return Err(ActionError::DegenerateHalfSpace);
        }
        Ok(HalfSpace { normal, offset })
    }

    /// Rescaled so that `|normal| = 1`.
    pub fn normalized(&self) -> HalfSpace {
        let n = norm(&self.normal);
        HalfSpace {
            normal: self.normal.iter().map(|x| x / n).collect(),
            offset: self.offset / n,
        }
    }

    /// `normal·w − offset`, in units of `|normal|`.
    pub fn slack(&self, w: &[f64]) -> f64 {
        let n = norm(&self.normal);
        (dot(&self.normal, w) - self.offset) / n
    }

    pub fn contains(&self, w: &[f64], tol: f64) -> bool {
        self.slack(w) <= tol
    }

    /// Same half-space up to positive rescaling, within `tol`.
    pub fn approx_eq(&self, other: &HalfSpace, tol: f64) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.normal.len() == b.normal.len()
            && a.normal.iter().zip(&b.normal).all(|(x, y)| (x - y).abs() <= tol)
            && (a.offset - b.offset).abs() <= tol
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Finite intersection of half-spaces, clipped to the open unit ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyhedron {
    pub dim: usize,
    pub halfspaces: Vec<HalfSpace>,
}

impl Polyhedron {
    /// The whole ball.
    pub fn ball(dim: usize) -> Self {
        Polyhedron {
            dim,
            halfspaces: Vec::new(),
        }
    }

    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self, ActionError> {
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != dim) {
            return Err(ActionError::DimensionMismatch {
                expected: dim,
                got: h.normal.len(),
            });
        }
        Ok(Polyhedron { dim, halfspaces })
    }

    pub fn side_count(&self) -> usize {
        self.halfspaces.len()
    }

    /// Membership in the open ball intersected with the closed half-spaces.
    pub fn contains(&self, w: &[f64], tol: f64) -> bool {
        norm(w) < 1.0 && self.satisfies_halfspaces(w, tol)
    }

    /// Membership ignoring the ball; used for boundary points.
    pub fn satisfies_halfspaces(&self, w: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(w, tol))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron, ActionError> {
        if other.dim != self.dim {
            return Err(ActionError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Ok(Polyhedron {
            dim: self.dim,
            halfspaces: hs,
        })
    }

    /// Same set of half-spaces up to order and rescaling.
    pub fn approx_eq(&self, other: &Polyhedron, tol: f64) -> bool {
        self.dim == other.dim
            && self.halfspaces.len() == other.halfspaces.len()
            && self
                .halfspaces
                .iter()
                .all(|h| other.halfspaces.iter().any(|k| h.approx_eq(k, tol)))
    }

    /// Drops half-spaces implied by the others together with the cube
    /// `[−1, 1]ⁿ ⊃ ball`, one LP each. A half-space that is redundant only
    /// because of the ball is kept.
    pub fn remove_redundant(&self) -> Result<Polyhedron, ActionError> {
        if self.dim > HULL_DIM_CAP {
            return Err(ActionError::DimensionCap { dim: self.dim });
        }
        let mut keep: Vec<HalfSpace> = Vec::new();
        let mut pending: Vec<HalfSpace> = Vec::new();
        // Deduplicate first so two copies of one face do not cancel each other.
        for h in &self.halfspaces {
            let h = h.normalized();
            if !pending.iter().any(|k| k.approx_eq(&h, 1e-12)) {
                pending.push(h);
            }
        }
        for i in 0..pending.len() {
            let others = keep.iter().chain(pending[i + 1..].iter());
            match lp_max(&pending[i].normal, others, self.dim) {
                Some(best) if best <= pending[i].offset + 1e-12 => {}
                _ => keep.push(pending[i].clone()),
            }
        }
        Ok(Polyhedron {
            dim: self.dim,
            halfspaces: keep,
        })
    }

    /// Radius of the largest Euclidean ball inside the polyhedron and the
    /// cube `[−1, 1]ⁿ`, with its center. A rough size summary only.
    pub fn inradius_estimate(&self) -> Option<(f64, Vec<f64>)> {
        let mut p = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = (0..self.dim).map(|_| p.add_var(0.0, (-1.0, 1.0))).collect();
        let r = p.add_var(1.0, (0.0, f64::INFINITY));
        for h in &self.halfspaces {
            let mut row: Vec<_> = vars.iter().zip(&h.normal).map(|(&v, &c)| (v, c)).collect();
            row.push((r, norm(&h.normal)));
            p.add_constraint(row.as_slice(), ComparisonOp::Le, h.offset);
        }
        for &v in &vars {
            p.add_constraint([(v, 1.0), (r, 1.0)], ComparisonOp::Le, 1.0);
            p.add_constraint([(v, -1.0), (r, 1.0)], ComparisonOp::Le, 1.0);
        }
        let sol = p.solve().ok()?;
        Some((sol[r], vars.iter().map(|&v| sol[v]).collect()))
    }
}

/// `max c·w` over the given half-spaces and the cube; `None` when infeasible.
fn lp_max<'a>(c: &[f64], hs: impl Iterator<Item = &'a HalfSpace>, dim: usize) -> Option<f64> {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..dim).map(|i| p.add_var(c[i], (-1.0, 1.0))).collect();
    for h in hs {
        let row: Vec<_> = vars.iter().zip(&h.normal).map(|(&v, &a)| (v, a)).collect();
        p.add_constraint(row.as_slice(), ComparisonOp::Le, h.offset);
    }
    p.solve().ok().map(|s| s.objective())
}

/// Convex hull of a point set, as half-spaces, with the affine dimension
/// actually spanned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hull {
    pub polyhedron: Polyhedron,
    pub affine_dim: usize,
    /// True when the points span less than the full dimension; the
    /// half-space list then includes paired equality constraints.
    pub degenerate: bool,
    /// Input points lying on at least `affine_dim` facets (all of them when
    /// `affine_dim ≤ 1` and they are extreme).
    pub vertices: Vec<Vec<f64>>,
}

const HULL_TOL: f64 = 1e-10;

/// Euclidean convex hull in `ℝⁿ`, `n ≤ 4`, by facet enumeration over
/// affinely independent subsets. Convexity in the Klein model is Euclidean
/// convexity, so this is also the hyperbolic convex hull.
pub fn convex_hull(points: &[Vec<f64>]) -> Result<Hull, ActionError> {
    let first = points.first().ok_or(ActionError::EmptyInput)?;
    let n = first.len();
    if n > HULL_DIM_CAP {
        return Err(ActionError::DimensionCap { dim: n });
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(ActionError::DimensionMismatch {
            expected: n,
            got: p.len(),
        });
    }
    let origin = DVector::from_column_slice(first);
    // Orthonormal basis of the affine span.
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let scale = points
        .iter()
        .map(|p| (DVector::from_column_slice(p) - &origin).norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    for p in points {
        let mut v = DVector::from_column_slice(p) - &origin;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 1e-9 * scale {
            basis.push(v.normalize());
        }
        if basis.len() == n {
            break;
        }
    }
    let d = basis.len();
    let local: Vec<DVector<f64>> = points
        .iter()
        .map(|p| {
            let v = DVector::from_column_slice(p) - &origin;
            DVector::from_iterator(d, basis.iter().map(|b| b.dot(&v)))
        })
        .collect();

    let mut local_facets: Vec<(DVector<f64>, f64)> = Vec::new();
    match d {
        0 => {}
        1 => {
            let (lo, hi) = local
                .iter()
                .map(|q| q[0])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            local_facets.push((DVector::from_element(1, 1.0), hi));
            local_facets.push((DVector::from_element(1, -1.0), -lo));
        }
        _ => {
            for subset in combinations(local.len(), d) {
                let rows = DMatrix::from_fn(d - 1, d, |i, j| local[subset[i + 1]][j] - local[subset[0]][j]);
                let svd = rows.svd(false, true);
                let v_t = svd.v_t.expect("requested V");
                let sv = &svd.singular_values;
                let smax = sv.max();
                // d − 1 rows in d columns: the smallest singular value is the
                // (d−1)-th, and the normal is the last right-singular vector.
                if sv.iter().any(|&s| s <= 1e-9 * smax.max(1e-300)) {
                    continue;
                }
                let normal = null_vector(&v_t, d);
                let offset = normal.dot(&local[subset[0]]);
                let (mut above, mut below) = (false, false);
                for q in &local {
                    let s = normal.dot(q) - offset;
                    above |= s > HULL_TOL * scale;
                    below |= s < -HULL_TOL * scale;
                }
                let oriented = match (above, below) {
                    (true, true) => continue,
                    (true, false) => (-normal, -offset),
                    _ => (normal, offset),
                };
                if !local_facets
                    .iter()
                    .any(|(m, o)| (m - &oriented.0).amax() < 1e-9 && (o - oriented.1).abs() < 1e-9 * scale.max(1.0))
                {
                    local_facets.push(oriented);
                }
            }
        }
    }

    let mut halfspaces = Vec::new();
    for (m, o) in &local_facets {
        let ambient: DVector<f64> = basis.iter().zip(m.iter()).fold(DVector::zeros(n), |acc, (b, c)| acc + b * *c);
        let offset = o + ambient.dot(&origin);
        halfspaces.push(HalfSpace {
            normal: ambient.as_slice().to_vec(),
            offset,
        });
    }
    for c in complement_basis(&basis, n) {
        let offset = c.dot(&origin);
        halfspaces.push(HalfSpace {
            normal: c.as_slice().to_vec(),
            offset,
        });
        halfspaces.push(HalfSpace {
            normal: (-&c).as_slice().to_vec(),
            offset: -offset,
        });
    }

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for (p, q) in points.iter().zip(&local) {
        let tight = local_facets
            .iter()
            .filter(|(m, o)| (m.dot(q) - o).abs() <= 1e-8 * scale.max(1.0))
            .count();
        if tight >= d.max(1) && !vertices.iter().any(|v| dist(v, p) < 1e-12) {
            vertices.push(p.clone());
        }
    }
    if d == 0 {
        vertices.push(first.clone());
    }

    Ok(Hull {
        polyhedron: Polyhedron { dim: n, halfspaces },
        affine_dim: d,
        degenerate: d < n,
        vertices,
    })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn null_vector(v_t: &DMatrix<f64>, d: usize) -> DVector<f64> {
    // Complete the row space of v_t (d − 1 rows) to ℝᵈ.
    let rows: Vec<DVector<f64>> = (0..v_t.nrows()).map(|i| v_t.row(i).transpose()).collect();
    complement_basis(&rows, d)
        .into_iter()
        .next()
        .expect("rank d − 1 rows leave a one-dimensional complement")
}

/// Orthonormal basis of the orthogonal complement of the span of `basis`.
fn complement_basis(basis: &[DVector<f64>], n: usize) -> Vec<DVector<f64>> {
    let mut all: Vec<DVector<f64>> = basis.iter().map(|b| b.normalize()).collect();
    let k = all.len();
    for i in 0..n {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        for b in &all {
            v -= b * b.dot(&v);
        }
        for b in &all {
            v -= b * b.dot(&v);
        }
        if v.norm() > 1e-6 {
            all.push(v.normalize());
        }
        if all.len() == n {
            break;
        }
    }
    all.split_off(k)
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub(crate) fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 4), vec![vec![0, 1, 2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(combinations(12, 4).len(), 495);
    }

    #[test]
    fn square_hull() {
        let pts = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.polyhedron.side_count(), 4);
        assert!(!h.degenerate);
        assert_eq!(h.vertices.len(), 4);
        assert!(h.polyhedron.contains(&[0.2, 0.2], 0.0));
        assert!(!h.polyhedron.satisfies_halfspaces(&[0.6, 0.6], 1e-12));
    }

    #[test]
    fn segment_hull_is_degenerate() {
        let h = convex_hull(&[vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert!(h.degenerate);
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.polyhedron.side_count(), 4);
        assert!(h.polyhedron.contains(&[0.3, 0.0], 1e-12));
        assert!(!h.polyhedron.contains(&[0.3, 0.01], 1e-12));
    }

    #[test]
    fn interior_points_do_not_change_hull() {
        let pts = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![-0.5, -0.5, -0.5],
            vec![0.1, 0.1, 0.1],
            vec![0.0, 0.2, 0.1],
        ];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.polyhedron.side_count(), 4);
        assert_eq!(h.vertices.len(), 4);
        let again = convex_hull(&h.vertices).unwrap();
        assert!(again.polyhedron.approx_eq(&h.polyhedron, 1e-9));
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            convex_hull(&[vec![0.0; 5]]),
            Err(ActionError::DimensionCap { dim: 5 })
        ));
    }

    #[test]
    fn redundancy_removal() {
        let hs = vec![
            HalfSpace::new(vec![1.0, 0.0], 0.5).unwrap(),
            HalfSpace::new(vec![2.0, 0.0], 1.6).unwrap(),
            HalfSpace::new(vec![-1.0, 0.0], 0.5).unwrap(),
            HalfSpace::new(vec![1.0, 0.0], 0.5).unwrap(),
        ];
        let p = Polyhedron::new(2, hs).unwrap().remove_redundant().unwrap();
        assert_eq!(p.side_count(), 2);
        let (r, c) = p.inradius_estimate().unwrap();
        assert!((r - 0.5).abs() < 1e-9);
        assert!(c[0].abs() < 1e-9);
    }
}
