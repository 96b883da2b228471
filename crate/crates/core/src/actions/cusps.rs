use serde::{Deserialize, Serialize};

use super::polyhedron::Polyhedron;
use super::{ActionError, GroupElementSet};
use crate::models::{Horoball, Isometry};

/// Angle below which an element is treated as fixing a base point.
pub const STABILIZER_ANGLE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorocuspReport {
    pub disjoint: bool,
    /// Words of elements outside the stabilizer whose image meets the horoball.
    pub offending: Vec<Vec<i32>>,
    pub checked: usize,
}

/// Checks `g(B) ∩ B = ∅` (closures) for every enumerated `g` outside the
/// stabilizer of the base point. The default stabilizer test compares the
/// base point with its image up to [`STABILIZER_ANGLE`].
pub fn horocusp_check(
    elems: &GroupElementSet,
    h: &Horoball,
    in_stabilizer: Option<&dyn Fn(&Isometry) -> bool>,
) -> HorocuspReport {
    let default = |g: &Isometry| g.apply_ideal(&h.base).0.angle_to(&h.base) <= STABILIZER_ANGLE;
    let mut offending = Vec::new();
    let mut checked = 0;
    for e in elems.iter() {
        let fixes = match in_stabilizer {
            Some(f) => f(&e.isometry),
            None => default(&e.isometry),
        };
        if fixes {
            continue;
        }
        checked += 1;
        if !h.transformed(&e.isometry).disjoint(h) {
            offending.push(e.word.clone());
        }
    }
    HorocuspReport {
        disjoint: offending.is_empty(),
        offending,
        checked,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkResult {
    pub horoball: Horoball,
    pub bisection_steps: usize,
    pub changed: bool,
}

/// Bisection budget for [`shrink_horoballs`].
pub const SHRINK_MAX_STEPS: usize = 40;
pub const SHRINK_RESOLUTION: f64 = 1e-12;

/// Lowers each horoball's level until the point of its horosphere opposite
/// the tangency point (taken in the Poincaré model, tested in Klein
/// coordinates) lies in `c`. Levels never increase, so disjoint inputs stay
/// disjoint.
pub fn shrink_horoballs(horoballs: &[Horoball], c: &Polyhedron) -> Result<Vec<ShrinkResult>, ActionError> {
    horoballs.iter().map(|h| shrink_one(h, c)).collect()
}

fn antipode_in(h: &Horoball, level: f64, c: &Polyhedron) -> bool {
    let probe = Horoball {
        base: h.base.clone(),
        level,
    };
    let w = probe.antipode_poincare().to_klein();
    c.contains(w.coords().as_slice(), SHRINK_RESOLUTION)
}

fn shrink_one(h: &Horoball, c: &Polyhedron) -> Result<ShrinkResult, ActionError> {
    if c.dim != h.dim() {
        return Err(ActionError::DimensionMismatch {
            expected: c.dim,
            got: h.dim(),
        });
    }
    let u = h.direction();
    if !c.satisfies_halfspaces(u.as_slice(), SHRINK_RESOLUTION) {
        return Err(ActionError::BaseOutsideRegion);
    }
    if antipode_in(h, h.level, c) {
        return Ok(ShrinkResult {
            horoball: h.clone(),
            bisection_steps: 0,
            changed: false,
        });
    }
    // Bracket: `hi` fails, step down until `lo` passes.
    let hi0 = h.level;
    let mut step = 1.0;
    let mut lo = hi0 - step;
    let mut tries = 0;
    while !antipode_in(h, lo, c) {
        step *= 2.0;
        lo = hi0 - step;
        tries += 1;
        if tries > 60 {
            return Err(ActionError::BaseOutsideRegion);
        }
    }
    let mut hi = hi0;
    let mut steps = 0;
    while steps < SHRINK_MAX_STEPS && hi - lo > SHRINK_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if antipode_in(h, mid, c) {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    Ok(ShrinkResult {
        horoball: Horoball {
            base: h.base.clone(),
            level: lo,
        },
        bisection_steps: steps,
        changed: true,
    })
}
