use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{
    lorentz_dot, HyperboloidPoint, IdealPoint, LorentzForm, ModelError, ModelPoint, CLASSIFY_EPS, MODEL_EPS,
};

/// Element of `O⁺(1, n)`: a Lorentz-form-preserving matrix that keeps the
/// upper sheet of the hyperboloid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Isometry {
    m: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    pub translation_length: f64,
}

fn sign_flip(m: &DMatrix<f64>) -> DMatrix<f64> {
    // J·m·J with J = diag(1, −1, …, −1)
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if (i == 0) != (j == 0) {
                out[(i, j)] = -out[(i, j)];
            }
        }
    }
    out
}

impl Isometry {
    pub fn new(m: DMatrix<f64>) -> Result<Self, ModelError> {
        Self::new_with_tol(m, MODEL_EPS)
    }

    /// Checks `‖mᵀ·J·m − J‖∞ ≤ eps · max(1, ‖m‖∞²)` and `m₀₀ > 0`.
    pub fn new_with_tol(m: DMatrix<f64>, eps: f64) -> Result<Self, ModelError> {
        if !m.is_square() || m.nrows() < 2 {
            return Err(ModelError::DimensionMismatch {
                expected: m.nrows().max(2),
                got: m.ncols(),
            });
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::NonFinite);
        }
        let j = LorentzForm::new(m.nrows() - 1).gram();
        let residual = (m.transpose() * &j * &m - &j).amax();
        let scale = m.amax().powi(2).max(1.0);
        if residual > eps * scale {
            return Err(ModelError::NotFormPreserving { residual });
        }
        if m[(0, 0)] <= 0.0 {
            return Err(ModelError::NotOrthochronous);
        }
        Ok(Isometry { m })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, ModelError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ModelError::DimensionMismatch {
                expected: n,
                got: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Isometry {
            m: DMatrix::identity(n + 1, n + 1),
        }
    }

    /// Boost of rapidity `t` in the plane of `e₀` and spatial axis `axis`
    /// (1-based); moves `e₀` a distance `|t|` toward `+e_axis`.
    pub fn boost(n: usize, axis: usize, t: f64) -> Self {
        assert!(axis >= 1 && axis <= n, "boost axis {axis} out of range 1..={n}");
        let mut m = DMatrix::identity(n + 1, n + 1);
        let (c, s) = (t.cosh(), t.sinh());
        m[(0, 0)] = c;
        m[(axis, axis)] = c;
        m[(0, axis)] = s;
        m[(axis, 0)] = s;
        Isometry { m }
    }

    /// Rotation by `theta` in the plane of spatial axes `i`, `j` (1-based).
    pub fn rotation(n: usize, i: usize, j: usize, theta: f64) -> Self {
        assert!(i >= 1 && j >= 1 && i <= n && j <= n && i != j, "bad rotation plane ({i}, {j})");
        let mut m = DMatrix::identity(n + 1, n + 1);
        let (c, s) = (theta.cos(), theta.sin());
        m[(i, i)] = c;
        m[(j, j)] = c;
        m[(i, j)] = -s;
        m[(j, i)] = s;
        Isometry { m }
    }

    /// Image in `SO⁺(1, 2)` of `[[a, b], [c, d]] ∈ SL₂(ℝ)` acting on binary
    /// symmetric matrices `X ↦ A·X·Aᵀ`, with coordinates
    /// `X = [[t + x, y], [y, t − x]]` so that `det X = t² − x² − y²`.
    pub fn from_sl2(a: f64, b: f64, c: f64, d: f64) -> Result<Self, ModelError> {
        let det = a * d - b * c;
        if (det - 1.0).abs() > 1e-12 * (a.abs() + b.abs() + c.abs() + d.abs()).powi(2).max(1.0) {
            return Err(ModelError::NotFormPreserving { residual: (det - 1.0).abs() });
        }
        let act = |t: f64, x: f64, y: f64| -> [f64; 3] {
            let (p, q, r) = (t + x, y, t - x);
            // A·[[p, q], [q, r]]·Aᵀ
            let p2 = a * a * p + 2.0 * a * b * q + b * b * r;
            let q2 = a * c * p + (a * d + b * c) * q + b * d * r;
            let r2 = c * c * p + 2.0 * c * d * q + d * d * r;
            [(p2 + r2) / 2.0, (p2 - r2) / 2.0, q2]
        };
        let cols = [act(1.0, 0.0, 0.0), act(0.0, 1.0, 0.0), act(0.0, 0.0, 1.0)];
        Self::new(DMatrix::from_fn(3, 3, |i, j| cols[j][i]))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows() - 1
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { m: &self.m * &other.m }
    }

    /// `J·mᵀ·J`, exact for form-preserving matrices.
    pub fn inverse(&self) -> Isometry {
        Isometry {
            m: sign_flip(&self.m.transpose()),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.m.iter().all(|x| x.fract() == 0.0)
    }

    pub fn apply(&self, x: &HyperboloidPoint) -> HyperboloidPoint {
        HyperboloidPoint::new_unchecked(&self.m * x.coords())
    }

    pub fn apply_model(&self, x: &ModelPoint) -> ModelPoint {
        ModelPoint::from_hyperboloid(&self.apply(&x.to_hyperboloid()), x.kind())
    }

    /// Image of an ideal point, renormalized to `b₀ = 1`, together with the
    /// scale `(g·b)₀` that was divided out.
    pub fn apply_ideal(&self, b: &IdealPoint) -> (IdealPoint, f64) {
        let v = &self.m * b.coords();
        let scale = v[0];
        (IdealPoint(v / scale), scale)
    }

    pub fn apply_vector(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.m * v
    }

    /// Max-norm distance between matrices, relative to their size.
    pub fn relative_gap(&self, other: &Isometry) -> f64 {
        let scale = self.m.amax().max(other.m.amax()).max(1.0);
        (&self.m - &other.m).amax() / scale
    }

    pub fn classify(&self) -> IsometryClass {
        self.classify_with_tol(CLASSIFY_EPS)
    }

    /// Elliptic / parabolic / hyperbolic from spectral data.
    ///
    /// Hyperbolic elements have a real simple eigenvalue `λ = e^ℓ > 1`
    /// paired with `1/λ`. A parabolic unipotent block only reaches that
    /// shape through rounding, which leaves the extreme eigenvalues
    /// complex or non-reciprocal, so both the reality and the reciprocity
    /// of the extreme pair are required. Among the rest, an element is
    /// elliptic exactly when `ker(m − I)` contains a timelike vector.
    pub fn classify_with_tol(&self, eps: f64) -> IsometryClass {
        let n1 = self.m.nrows();
        if (&self.m - DMatrix::<f64>::identity(n1, n1)).amax() <= eps {
            return IsometryClass {
                kind: IsometryKind::Elliptic,
                translation_length: 0.0,
            };
        }
        if let Some(eig) = spectrum(&self.m) {
            let by_modulus = |a: &&nalgebra::Complex<f64>, b: &&nalgebra::Complex<f64>| a.norm().total_cmp(&b.norm());
            let top = *eig.iter().max_by(by_modulus).expect("nonempty spectrum");
            let bottom = *eig.iter().min_by(by_modulus).expect("nonempty spectrum");
            let real = |z: nalgebra::Complex<f64>| z.im.abs() <= 1e-12 * z.norm();
            let reciprocal = ((top * bottom).norm() - 1.0).abs() <= 1e-8;
            if top.norm() > 1.0 + eps && real(top) && real(bottom) && reciprocal {
                let len = (top.norm().ln() - bottom.norm().ln()) / 2.0;
                return IsometryClass {
                    kind: IsometryKind::Hyperbolic,
                    translation_length: len,
                };
            }
        }
        let kind = if self.fixes_interior_point() {
            IsometryKind::Elliptic
        } else {
            IsometryKind::Parabolic
        };
        IsometryClass {
            kind,
            translation_length: 0.0,
        }
    }

    /// True when the fixed subspace of `m` contains a timelike vector.
    fn fixes_interior_point(&self) -> bool {
        let n1 = self.m.nrows();
        let a = &self.m - DMatrix::<f64>::identity(n1, n1);
        let svd = a.svd(false, true);
        let v_t = svd.v_t.expect("requested V");
        let scale = self.m.amax().max(1.0);
        let kernel: Vec<DVector<f64>> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= 1e-7 * scale)
            .map(|(i, _)| v_t.row(i).transpose())
            .collect();
        if kernel.is_empty() {
            return false;
        }
        let d = kernel.len();
        let restricted = DMatrix::from_fn(d, d, |i, j| lorentz_dot(kernel[i].as_slice(), kernel[j].as_slice()));
        let top = SymmetricEigen::new(restricted).eigenvalues.max();
        top > 1e-6
    }
}

/// Eigenvalues through a Schur form with a bounded number of sweeps.
/// The unbounded solver can cycle on nearly defective matrices.
fn spectrum(m: &DMatrix<f64>) -> Option<Vec<nalgebra::Complex<f64>>> {
    let n = m.nrows();
    [f64::EPSILON, 1e-14, 1e-12].iter().find_map(|&eps| {
        Schur::try_new(m.clone(), eps, 2000 * n).map(|s| s.complex_eigenvalues().iter().copied().collect())
    })
}

impl TryFrom<Vec<Vec<f64>>> for Isometry {
    type Error = ModelError;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        Isometry::from_rows(&rows)
    }
}

impl From<Isometry> for Vec<Vec<f64>> {
    fn from(g: Isometry) -> Vec<Vec<f64>> {
        g.m.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

impl std::ops::Mul for &Isometry {
    type Output = Isometry;
    fn mul(self, rhs: &Isometry) -> Isometry {
        self.compose(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::distance;

    #[test]
    fn validation() {
        assert!(Isometry::new(DMatrix::identity(3, 3)).is_ok());
        let mut flip = DMatrix::identity(3, 3);
        flip[(0, 0)] = -1.0;
        assert_eq!(Isometry::new(flip), Err(ModelError::NotOrthochronous));
        let scale = DMatrix::identity(3, 3) * 2.0;
        assert!(matches!(Isometry::new(scale), Err(ModelError::NotFormPreserving { .. })));
        let mut reflect = DMatrix::identity(3, 3);
        reflect[(1, 1)] = -1.0;
        assert!(Isometry::new(reflect).is_ok());
    }

    #[test]
    fn boost_moves_origin() {
        let g = Isometry::boost(3, 1, 2.0);
        let p = g.apply(&HyperboloidPoint::origin(3));
        assert!((p.coords()[0] - 2f64.cosh()).abs() < 1e-14);
        assert!((p.coords()[1] - 2f64.sinh()).abs() < 1e-14);
        assert_eq!(p.coords()[2], 0.0);
    }

    #[test]
    fn inverse_is_inverse() {
        let g = Isometry::boost(3, 2, 0.7)
            .compose(&Isometry::rotation(3, 1, 3, 1.1))
            .compose(&Isometry::boost(3, 1, -1.3));
        let id = g.compose(&g.inverse());
        assert!(id.relative_gap(&Isometry::identity(3)) < 1e-13);
    }

    #[test]
    fn classify_examples() {
        let id = Isometry::identity(2).classify();
        assert_eq!(id.kind, IsometryKind::Elliptic);
        assert_eq!(id.translation_length, 0.0);

        let b = Isometry::boost(2, 1, 2.0).classify();
        assert_eq!(b.kind, IsometryKind::Hyperbolic);
        assert!((b.translation_length - 2.0).abs() < 1e-12);

        let rot = Isometry::rotation(3, 1, 2, 0.4).classify();
        assert_eq!(rot.kind, IsometryKind::Elliptic);

        for s in [1.0, 0.25, 3.0, -2.0] {
            let u = Isometry::from_sl2(1.0, s, 0.0, 1.0).unwrap();
            assert_eq!(u.classify().kind, IsometryKind::Parabolic, "s = {s}");
        }
    }

    #[test]
    fn sl2_image_is_isometry_with_matching_trace() {
        // trace of Ad(A) on sym² is tr(A)² − 1
        let g = Isometry::from_sl2(2.0, 1.0, 1.0, 1.0).unwrap();
        assert!((g.matrix().trace() - 8.0).abs() < 1e-12);
        let c = g.classify();
        assert_eq!(c.kind, IsometryKind::Hyperbolic);
        // eigenvalue of A: (3 + √5)/2, translation length 2·log of it
        let lam = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((c.translation_length - 2.0 * lam.ln()).abs() < 1e-12);
        assert!(Isometry::from_sl2(2.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn isometries_preserve_distance() {
        let g = Isometry::boost(2, 1, 1.0).compose(&Isometry::rotation(2, 1, 2, 0.3));
        let x = HyperboloidPoint::renormalized(&[0.4, -0.2]);
        let y = HyperboloidPoint::renormalized(&[-1.0, 0.9]);
        let d0 = distance(&x, &y).unwrap();
        let d1 = distance(&g.apply(&x), &g.apply(&y)).unwrap();
        assert!((d0 - d1).abs() < 1e-12);
    }

    #[test]
    fn json_matrix() {
        let g = Isometry::boost(1, 1, 0.5);
        let s = serde_json::to_string(&g).unwrap();
        let back: Isometry = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Isometry>("[[2.0,0.0],[0.0,2.0]]").is_err());
    }
}
