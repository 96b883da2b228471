//! Numerical check for [`complement_path`](super::complement_path).
//!
//! Polygonal paths whose vertices sit at evenly spaced abscissae in the
//! upper half-plane chart, with heights bounded by the horocycle, are
//! shortened by a bounded Newton iteration and then refined. Lengths are
//! measured on the hyperboloid, not with the half-plane formula.

use super::complement::UhpChart;
use super::ActionError;
use crate::models::{lorentz_dot, HyperboloidPoint, Horoball};

/// Upper half-plane point to the hyperboloid.
fn lift(x: f64, y: f64) -> [f64; 3] {
    let s = x * x + y * y;
    [(1.0 + s) / (2.0 * y), x / y, (s - 1.0) / (2.0 * y)]
}

fn hyp_dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let diff = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let q = -lorentz_dot(&diff, &diff);
    2.0 * (q.max(0.0).sqrt() / 2.0).asinh()
}

struct Chain {
    xs: Vec<f64>,
    log_ys: Vec<f64>,
}

impl Chain {
    fn point(&self, i: usize) -> [f64; 3] {
        lift(self.xs[i], self.log_ys[i].exp())
    }

    fn length(&self) -> f64 {
        (1..self.xs.len()).map(|i| hyp_dist(&self.point(i - 1), &self.point(i))).sum()
    }

    /// Gradient and tridiagonal Hessian of the length in the interior
    /// `log y` values, by central differences on each edge.
    fn derivatives(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        const H1: f64 = 1e-6;
        const H2: f64 = 1e-4;
        let m = self.xs.len() - 1;
        let mut grad = vec![0.0; m + 1];
        let mut diag = vec![0.0; m + 1];
        let mut off = vec![0.0; m + 1];
        for i in 0..m {
            let e = |a: f64, b: f64| {
                hyp_dist(
                    &lift(self.xs[i], (self.log_ys[i] + a).exp()),
                    &lift(self.xs[i + 1], (self.log_ys[i + 1] + b).exp()),
                )
            };
            let f0 = e(0.0, 0.0);
            grad[i] += (e(H1, 0.0) - e(-H1, 0.0)) / (2.0 * H1);
            grad[i + 1] += (e(0.0, H1) - e(0.0, -H1)) / (2.0 * H1);
            diag[i] += (e(H2, 0.0) - 2.0 * f0 + e(-H2, 0.0)) / (H2 * H2);
            diag[i + 1] += (e(0.0, H2) - 2.0 * f0 + e(0.0, -H2)) / (H2 * H2);
            off[i] = (e(H2, H2) - e(H2, -H2) - e(-H2, H2) + e(-H2, -H2)) / (4.0 * H2 * H2);
        }
        (grad, diag, off)
    }

    /// Projected Newton iteration with the bound `lo ≤ log y ≤ hi`.
    fn relax(&mut self, lo: f64, hi: f64) {
        let m = self.xs.len() - 1;
        if m < 2 {
            return;
        }
        let mut current = self.length();
        for _ in 0..200 {
            let (grad, diag, off) = self.derivatives();
            let free: Vec<bool> = (0..=m)
                .map(|i| i > 0 && i < m && !(self.log_ys[i] >= hi && grad[i] < 0.0))
                .collect();
            let pg: f64 = (1..m).filter(|&i| free[i]).map(|i| grad[i].abs()).fold(0.0, f64::max);
            if pg < 1e-13 {
                break;
            }
            let mut damping = 0.0;
            let step = loop {
                if let Some(d) = solve_tridiagonal(&grad, &diag, &off, &free, damping) {
                    break d;
                }
                damping = if damping == 0.0 { 1e-8 } else { damping * 10.0 };
            };
            let mut t = 1.0;
            let mut improved = false;
            for _ in 0..40 {
                let trial = Chain {
                    xs: self.xs.clone(),
                    log_ys: self
                        .log_ys
                        .iter()
                        .zip(&step)
                        .map(|(s, d)| (s + t * d).clamp(lo, hi))
                        .collect(),
                };
                let len = trial.length();
                if len < current {
                    *self = trial;
                    current = len;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }
    }

    /// Doubles the number of segments, placing new vertices by
    /// interpolating `log y`.
    fn refine(&self) -> Chain {
        let m = self.xs.len() - 1;
        let (x0, x1) = (self.xs[0], self.xs[m]);
        let xs: Vec<f64> = (0..=2 * m).map(|k| x0 + (x1 - x0) * k as f64 / (2 * m) as f64).collect();
        let log_ys = (0..=2 * m)
            .map(|k| {
                if k % 2 == 0 {
                    self.log_ys[k / 2]
                } else {
                    0.5 * (self.log_ys[k / 2] + self.log_ys[k / 2 + 1])
                }
            })
            .collect();
        Chain { xs, log_ys }
    }
}

/// Solves `(H + λ)d = −g` on the free indices (fixed ones get `d = 0`).
/// Returns `None` when a pivot is not positive.
fn solve_tridiagonal(grad: &[f64], diag: &[f64], off: &[f64], free: &[bool], damping: f64) -> Option<Vec<f64>> {
    let n = grad.len();
    let mut c = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut prev_free = false;
    for i in 0..n {
        if !free[i] {
            prev_free = false;
            continue;
        }
        let coupling = if prev_free { off[i - 1] } else { 0.0 };
        let pivot = diag[i] + damping - coupling * c[i.saturating_sub(1)];
        if !(pivot > 0.0) {
            return None;
        }
        let upper = if i + 1 < n && free[i + 1] { off[i] } else { 0.0 };
        c[i] = upper / pivot;
        r[i] = (-grad[i] - coupling * if prev_free { r[i - 1] } else { 0.0 }) / pivot;
        prev_free = true;
    }
    let mut d = vec![0.0; n];
    for i in (0..n).rev() {
        if free[i] {
            let next = if i + 1 < n && free[i + 1] { d[i + 1] } else { 0.0 };
            d[i] = r[i] - c[i] * next;
        }
    }
    Some(d)
}

/// Length of the best polygonal path found with `segments` pieces (rounded
/// up to the refinement schedule) from `x` to `y` avoiding the open
/// horoball `h`. Converges to the true length from below.
pub fn detour_oracle_length(
    x: &HyperboloidPoint,
    y: &HyperboloidPoint,
    h: &Horoball,
    segments: usize,
) -> Result<f64, ActionError> {
    let chart = UhpChart::new(h)?;
    let (p, q) = (chart.to_uhp(x), chart.to_uhp(y));
    let big_h = chart.height;
    for (pt, name) in [(p, "x"), (q, "y")] {
        if pt[1] > big_h * (1.0 + 1e-12) {
            return Err(ActionError::InsideHoroball(name));
        }
    }
    let lo = (0.5 * p[1].min(q[1])).ln();
    let hi = big_h.ln();
    let mut m = 25.min(segments.max(1));
    let mut chain = Chain {
        xs: (0..=m).map(|k| p[0] + (q[0] - p[0]) * k as f64 / m as f64).collect(),
        log_ys: (0..=m)
            .map(|k| {
                let t = k as f64 / m as f64;
                let straight = (1.0 - t) * p[1].ln() + t * q[1].ln();
                let arch = hi.min(straight + 4.0 * t * (1.0 - t) * (hi - straight).max(0.0));
                if k == 0 || k == m {
                    straight
                } else {
                    arch
                }
            })
            .collect(),
    };
    chain.relax(lo, hi);
    while m < segments {
        chain = chain.refine();
        m *= 2;
        chain.relax(lo, hi);
    }
    Ok(chain.length())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::complement_path;
    use crate::models::{distance, IdealPoint};
    use nalgebra::DVector;

    #[test]
    fn lift_matches_hyperboloid() {
        let a = lift(0.3, 0.7);
        assert!((lorentz_dot(&a, &a) - 1.0).abs() < 1e-14 && a[0] > 0.0);
        let o = lift(0.0, 1.0);
        assert!((hyp_dist(&o, &lift(0.0, 2f64)) - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn unobstructed_matches_distance() {
        let h = Horoball::new(IdealPoint::from_direction(&DVector::from_vec(vec![0.0, 1.0])).unwrap(), -3.0).unwrap();
        let x = HyperboloidPoint::renormalized(&[-0.4, 0.0]);
        let y = HyperboloidPoint::renormalized(&[0.4, 0.1]);
        let oracle = detour_oracle_length(&x, &y, &h, 50).unwrap();
        let d = distance(&x, &y).unwrap();
        assert!((oracle - d).abs() < 1e-9, "{oracle} vs {d}");
    }

    #[test]
    fn short_detour_agrees_with_closed_form() {
        let h = Horoball::new(IdealPoint::from_direction(&DVector::from_vec(vec![0.0, 1.0])).unwrap(), 0.0).unwrap();
        let chart = UhpChart::new(&h).unwrap();
        let big_h = chart.height;
        let x = chart.from_uhp([-big_h, 0.5 * big_h]);
        let y = chart.from_uhp([0.9 * big_h, 0.6 * big_h]);
        let exact = complement_path(&x, &y, &h).unwrap();
        assert!(!exact.direct);
        let oracle = detour_oracle_length(&x, &y, &h, 200).unwrap();
        assert!(oracle <= exact.length + 1e-12);
        assert!((oracle - exact.length).abs() < 1e-6, "{oracle} vs {}", exact.length);
    }
}
