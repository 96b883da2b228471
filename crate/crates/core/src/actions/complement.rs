//! Shortest paths in H² that stay outside an open horoball.
//!
//! Computed in the upper half-plane, normalized so that the horoball is
//! `{Im w > H}`. If the direct geodesic enters the horoball, the shortest
//! path runs along the geodesic tangent to the horocycle `Im w = H`, then
//! along the horocycle (induced length `Δx / H`), then down the other
//! tangent geodesic.

use serde::{Deserialize, Serialize};

use super::ActionError;
use crate::models::{distance, HyperboloidPoint, Horoball, PoincarePoint};

/// Upper half-plane chart sending a horoball's base point to `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UhpChart {
    /// Base direction on the unit circle.
    u: [f64; 2],
    /// Height of the bounding horocycle.
    pub height: f64,
}

impl UhpChart {
    pub fn new(h: &Horoball) -> Result<Self, ActionError> {
        if h.dim() != 2 {
            return Err(ActionError::NotPlanar { dim: h.dim() });
        }
        let d = h.direction();
        let r = h.euclidean_radius();
        Ok(UhpChart {
            u: [d[0], d[1]],
            height: (1.0 - r) / r,
        })
    }

    /// Disk point `z` ↦ `i(1 + z')/(1 − z')` with `z' = z·ū`.
    pub fn to_uhp(&self, p: &HyperboloidPoint) -> [f64; 2] {
        let z = p.to_poincare();
        let (a, b) = (z.coords()[0], z.coords()[1]);
        let (zr, zi) = (a * self.u[0] + b * self.u[1], b * self.u[0] - a * self.u[1]);
        // (1 + z')/(1 − z')
        let (nr, ni) = (1.0 + zr, zi);
        let (dr, di) = (1.0 - zr, -zi);
        let den = dr * dr + di * di;
        let (qr, qi) = ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den);
        [-qi, qr]
    }

    pub fn from_uhp(&self, w: [f64; 2]) -> HyperboloidPoint {
        // z' = (w − i)/(w + i)
        let (nr, ni) = (w[0], w[1] - 1.0);
        let (dr, di) = (w[0], w[1] + 1.0);
        let den = dr * dr + di * di;
        let (zr, zi) = ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den);
        let z = [zr * self.u[0] - zi * self.u[1], zr * self.u[1] + zi * self.u[0]];
        PoincarePoint::from_slice(&z)
            .unwrap_or_else(|_| {
                let n = (z[0] * z[0] + z[1] * z[1]).sqrt();
                PoincarePoint::from_slice(&[z[0] / n * (1.0 - 1e-16), z[1] / n * (1.0 - 1e-16)]).expect("inside disk")
            })
            .to_hyperboloid()
    }
}

/// Distance in the upper half-plane, `2·asinh(|p − q| / (2√(p_y q_y)))`.
pub fn uhp_distance(p: [f64; 2], q: [f64; 2]) -> f64 {
    let e = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
    2.0 * (e / (2.0 * (p[1] * q[1]).sqrt())).asinh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Geodesic,
    Horocycle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPiece {
    pub kind: PieceKind,
    pub start: HyperboloidPoint,
    pub end: HyperboloidPoint,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementPath {
    pub length: f64,
    /// True when the direct geodesic already avoids the open horoball.
    pub direct: bool,
    pub pieces: Vec<PathPiece>,
}

/// Relative slack for "on the horosphere" tests.
const ON_HOROSPHERE: f64 = 1e-12;

/// Shortest path from `x` to `y` in the complement of the open horoball `h`.
pub fn complement_path(x: &HyperboloidPoint, y: &HyperboloidPoint, h: &Horoball) -> Result<ComplementPath, ActionError> {
    if x.dim() != 2 || y.dim() != 2 {
        return Err(ActionError::NotPlanar { dim: x.dim().max(y.dim()) });
    }
    let chart = UhpChart::new(h)?;
    let big_h = chart.height;
    let (mut p, mut q) = (chart.to_uhp(x), chart.to_uhp(y));
    for (pt, name) in [(p, "x"), (q, "y")] {
        if pt[1] > big_h * (1.0 + ON_HOROSPHERE) {
            return Err(ActionError::InsideHoroball(name));
        }
    }
    let direct = || -> Result<ComplementPath, ActionError> {
        let d = distance(x, y)?;
        Ok(ComplementPath {
            length: d,
            direct: true,
            pieces: vec![PathPiece {
                kind: PieceKind::Geodesic,
                start: x.clone(),
                end: y.clone(),
                length: d,
            }],
        })
    };

    let swapped = p[0] > q[0];
    if swapped {
        std::mem::swap(&mut p, &mut q);
    }
    let span = q[0] - p[0];
    if span <= 1e-15 * big_h {
        // vertical geodesic: its highest point is an endpoint
        return direct();
    }
    let center = ((q[0] * q[0] + q[1] * q[1]) - (p[0] * p[0] + p[1] * p[1])) / (2.0 * span);
    let radius = ((p[0] - center).powi(2) + p[1] * p[1]).sqrt();
    let crosses = center > p[0] && center < q[0] && radius > big_h * (1.0 + ON_HOROSPHERE);
    if !crosses {
        return direct();
    }
    let top_p = p[0] + (big_h * big_h - p[1] * p[1]).max(0.0).sqrt();
    let top_q = q[0] - (big_h * big_h - q[1] * q[1]).max(0.0).sqrt();
    if top_p >= top_q {
        return direct();
    }
    let a = [top_p, big_h];
    let b = [top_q, big_h];
    let mut legs = vec![
        (PieceKind::Geodesic, p, a, uhp_distance(p, a)),
        (PieceKind::Horocycle, a, b, (top_q - top_p) / big_h),
        (PieceKind::Geodesic, b, q, uhp_distance(b, q)),
    ];
    if swapped {
        legs.reverse();
        for leg in &mut legs {
            std::mem::swap(&mut leg.1, &mut leg.2);
        }
    }
    let pieces: Vec<PathPiece> = legs
        .into_iter()
        .filter(|(kind, _, _, len)| *kind == PieceKind::Horocycle || *len > 0.0)
        .map(|(kind, s, e, length)| PathPiece {
            kind,
            start: chart.from_uhp(s),
            end: chart.from_uhp(e),
            length,
        })
        .collect();
    Ok(ComplementPath {
        length: pieces.iter().map(|p| p.length).sum(),
        direct: false,
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{busemann, IdealPoint};
    use nalgebra::DVector;

    fn horoball(dir: &[f64], level: f64) -> Horoball {
        Horoball::new(IdealPoint::from_direction(&DVector::from_column_slice(dir)).unwrap(), level).unwrap()
    }

    #[test]
    fn chart_roundtrip_and_height() {
        let h = horoball(&[0.6, 0.8], -0.7);
        let chart = UhpChart::new(&h).unwrap();
        for s in [[0.1, 0.2], [-1.0, 0.4], [2.0, -3.0]] {
            let x = HyperboloidPoint::renormalized(&s);
            let back = chart.from_uhp(chart.to_uhp(&x));
            assert!((back.coords() - x.coords()).amax() < 1e-11);
        }
        // points at height H lie on the horosphere
        for t in [-2.0, 0.0, 0.3, 5.0] {
            let p = chart.from_uhp([t, chart.height]);
            assert!((busemann(&h.base, &p).unwrap() - h.level).abs() < 1e-10);
        }
    }

    #[test]
    fn chart_is_isometric() {
        let chart = UhpChart::new(&horoball(&[1.0, 0.0], 0.3)).unwrap();
        let pts = [[0.0, 0.5], [1.0, 2.0], [-3.0, 0.1]];
        for p in pts {
            for q in pts {
                let d = distance(&chart.from_uhp(p), &chart.from_uhp(q)).unwrap();
                assert!((d - uhp_distance(p, q)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn missing_horoball_is_direct() {
        let h = horoball(&[0.0, 1.0], -3.0);
        let x = HyperboloidPoint::renormalized(&[-0.5, 0.0]);
        let y = HyperboloidPoint::renormalized(&[0.5, 0.0]);
        let path = complement_path(&x, &y, &h).unwrap();
        assert!(path.direct);
        assert_eq!(path.length, distance(&x, &y).unwrap());
    }

    #[test]
    fn detour_is_longer_and_symmetric() {
        let h = horoball(&[0.0, 1.0], 0.5);
        let x = HyperboloidPoint::renormalized(&[-2.0, -0.2]);
        let y = HyperboloidPoint::renormalized(&[2.0, -0.2]);
        let p = complement_path(&x, &y, &h).unwrap();
        assert!(!p.direct);
        assert!(p.length > distance(&x, &y).unwrap());
        assert_eq!(p.pieces.len(), 3);
        let q = complement_path(&y, &x, &h).unwrap();
        assert!((p.length - q.length).abs() < 1e-9);
        // pieces chain end to start
        for w in p.pieces.windows(2) {
            assert!((w[0].end.coords() - w[1].start.coords()).amax() < 1e-9);
        }
    }

    #[test]
    fn rejects_inside_and_wrong_dimension() {
        let h = horoball(&[0.0, 1.0], 0.5);
        let inside = HyperboloidPoint::origin(2);
        let y = HyperboloidPoint::renormalized(&[2.0, -0.2]);
        assert_eq!(complement_path(&inside, &y, &h), Err(ActionError::InsideHoroball("x")));
        let h3 = Horoball::new(IdealPoint::from_direction(&DVector::from_vec(vec![0.0, 0.0, 1.0])).unwrap(), -1.0).unwrap();
        let o3 = HyperboloidPoint::origin(3);
        assert!(matches!(complement_path(&o3, &o3, &h3), Err(ActionError::NotPlanar { dim: 3 })));
    }
}
