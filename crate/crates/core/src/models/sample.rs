//! Seeded random points and isometries for property checks.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{HyperboloidPoint, Isometry};

/// Uniformly distributed unit vector in ℝⁿ.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

/// Point at distance drawn uniformly from `[0, max_dist]` from `e₀`, in a
/// uniformly random direction.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize, max_dist: f64) -> HyperboloidPoint {
    let dir = random_direction(rng, n);
    let t = rng.random_range(0.0..=max_dist);
    HyperboloidPoint::along(&dir, t).expect("unit direction")
}

/// Product of `factors` random coordinate boosts (rapidity in
/// `[−max_rapidity, max_rapidity]`) and spatial rotations.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, n: usize, factors: usize, max_rapidity: f64) -> Isometry {
    let mut g = Isometry::identity(n);
    for _ in 0..factors {
        let axis = rng.random_range(1..=n);
        g = g.compose(&Isometry::boost(n, axis, rng.random_range(-max_rapidity..=max_rapidity)));
        if n >= 2 {
            let i = rng.random_range(1..=n);
            let mut j = rng.random_range(1..n);
            if j >= i {
                j += 1;
            }
            let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            g = g.compose(&Isometry::rotation(n, i, j, theta));
        }
    }
    g
}
