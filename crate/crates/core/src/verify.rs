//! The acceptance suite: twelve checks tying the library to the worked
//! examples and to the geometric properties it relies on.
//!
//! Each check returns a JSON summary that depends only on the seed, so two
//! runs with the same seed produce identical reports. Wall-clock budgets are
//! enforced in `pass` but never written into the summary.

use std::time::{Duration, Instant};

use nalgebra::DVector;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::actions::{
    complement_path, detour_oracle_length, dirichlet_domain, proper_action_count, shrink_horoballs, word_ball,
    DirichletOptions, GroupElementSet, HalfSpace, Polyhedron, UhpChart, SHRINK_MAX_STEPS,
};
use crate::arrangements::{
    aut_sharp_trivial, build_coble_lattice_example, build_dual_hesse, check_pair, dual_hesse_pair,
    general_position_4, max_collinear, spanned_lines, strict_transform_classes, CoefficientClass, Overall,
    SncStatus,
};
use crate::cohom::{
    distinct_mod_center, elementary_generators, evaluate_word, h1_z2, no_relation_search, sanov_generators,
    semidirect_order2_classes, small_groups, CycloMatrix2, IntMatrix2, DEFAULT_MAX_BITS,
};
use crate::lattice::PicardLattice;
use crate::models::sample::{random_isometry, random_point};
use crate::models::{
    cat0_check, distance, GeodesicSegment, HyperboloidPoint, Horoball, IdealPoint, Isometry, ModelError,
};

/// Sample sizes and seed for the randomized checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub model_samples: usize,
    pub triangles: usize,
    pub dirichlet_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            model_samples: 10_000,
            triangles: 1_000,
            dirichlet_points: 1_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub details: Value,
    /// Wall-clock time, excluded from serialized reports.
    #[serde(skip)]
    pub elapsed: Duration,
}

pub const CRITERIA: [(u8, &str, Option<f64>); 12] = [
    (1, "dual Hesse combinatorics", Some(1.0)),
    (2, "strict transforms sum to -3K", None),
    (3, "pair verdicts", None),
    (4, "trivial Aut# criterion", None),
    (5, "Coble lattice identities", None),
    (6, "model consistency", Some(10.0)),
    (7, "CAT(0) comparisons and Klein geodesics", None),
    (8, "Dirichlet slab and word-ball consistency", None),
    (9, "proper action counts", None),
    (10, "horoball geometry", None),
    (11, "free-group search", Some(30.0)),
    (12, "cohomology suite", Some(10.0)),
];

/// Runs one criterion by number (1–12).
pub fn run_criterion(id: u8, opts: &VerifyOptions) -> Option<CriterionResult> {
    let &(_, title, budget) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let outcome = match id {
        1 => dual_hesse_combinatorics(),
        2 => divisor_identity(),
        3 => pair_verdicts(),
        4 => aut_sharp(),
        5 => coble_identities(),
        6 => model_consistency(opts),
        7 => cat0_suite(opts),
        8 => dirichlet_slab(opts),
        9 => proper_counts(),
        10 => horoball_geometry(),
        11 => free_group_search(),
        12 => cohomology_suite(),
        _ => return None,
    };
    let elapsed = start.elapsed();
    let (mut pass, details) = match outcome {
        Ok(r) => r,
        Err(e) => (false, json!({ "error": e })),
    };
    if let Some(limit) = budget {
        pass &= elapsed.as_secs_f64() < limit;
    }
    Some(CriterionResult {
        id,
        title: title.to_string(),
        pass,
        details,
        elapsed,
    })
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, opts)).collect()
}

type Outcome = Result<(bool, Value), String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn dual_hesse_combinatorics() -> Outcome {
    let cfg = build_dual_hesse();
    let points_per_line = cfg.line_degrees();
    let lines_per_point = cfg.point_degrees();
    let pass = cfg.points().len() == 12
        && cfg.lines().len() == 9
        && points_per_line.iter().all(|&d| d == 4)
        && lines_per_point.iter().all(|&d| d == 3);
    Ok((
        pass,
        json!({
            "points": cfg.points().len(),
            "lines": cfg.lines().len(),
            "points_per_line": points_per_line,
            "lines_per_point": lines_per_point,
        }),
    ))
}

fn divisor_identity() -> Outcome {
    let cfg = build_dual_hesse();
    let lattice = PicardLattice::new(12);
    let classes = strict_transform_classes(&cfg);
    let total = classes.iter().sum::<Option<_>>().ok_or("no classes")?;
    let residual = total.clone() + 3 * lattice.canonical_class();
    let pass = lattice.rank() == 13 && total.is_integral() && residual.is_numerically_trivial();
    Ok((pass, json!({ "sum": total, "sum_plus_3k": residual })))
}

fn pair_verdicts() -> Outcome {
    let hesse = check_pair(&dual_hesse_pair()).map_err(err)?;
    let coble = check_pair(&build_coble_lattice_example().spec).map_err(err)?;
    let pass = hesse.overall == Overall::KltCy
        && hesse.snc == SncStatus::Holds
        && coble.overall == Overall::LcCy
        && coble.coefficient_class == CoefficientClass::LcOnly;
    Ok((pass, json!({ "dual_hesse": hesse, "coble": coble })))
}

fn aut_sharp() -> Outcome {
    let cfg = build_dual_hesse();
    let mc = max_collinear(cfg.points()).map_err(err)?;
    let trivial = aut_sharp_trivial(cfg.points());
    let gp4 = general_position_4(cfg.points()).map_err(err)?;
    let spanned = spanned_lines(&cfg, &[9, 10, 11], &(0..9).collect::<Vec<_>>());
    let all_known = spanned.values().all(Option::is_some);
    let pass = mc.count == 4 && mc.count < 11 && trivial && gp4 && all_known && spanned.len() == 27;
    Ok((
        pass,
        json!({
            "max_collinear": mc.count,
            "aut_sharp_trivial": trivial,
            "general_position_4": gp4,
            "spanned_pairs_checked": spanned.len(),
            "spanned_lines_in_configuration": all_known,
        }),
    ))
}

fn coble_identities() -> Outcome {
    let ex = build_coble_lattice_example();
    let ids = ex.identities().map_err(err)?;
    let pass = ids.self_intersections == ["-2", "-2", "-2", "-2", "-3"] && ids.c6_is_minus_2k && ids.k_plus_half_c6_is_zero;
    Ok((pass, json!(ids)))
}

fn rel_gap(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).amax() / a.amax().max(1.0)
}

fn model_consistency(opts: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut by_dim = Vec::new();
    let mut pass = true;
    for n in [2, 3, 12] {
        let cases: Vec<(HyperboloidPoint, HyperboloidPoint, Isometry)> = (0..opts.model_samples)
            .map(|_| {
                (
                    random_point(&mut rng, n, 3.0),
                    random_point(&mut rng, n, 3.0),
                    random_isometry(&mut rng, n, 2, 1.0),
                )
            })
            .collect();
        let stats: Vec<(f64, f64)> = cases
            .par_iter()
            .map(|(x, y, g)| -> Result<(f64, f64), ModelError> {
                let via_klein = x.to_klein().to_hyperboloid();
                let via_poincare = x.to_poincare().to_hyperboloid();
                let roundtrip = rel_gap(x.coords(), via_klein.coords()).max(rel_gap(x.coords(), via_poincare.coords()));
                let invariance = (distance(&g.apply(x), &g.apply(y))? - distance(x, y)?).abs();
                Ok((roundtrip, invariance))
            })
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let max_roundtrip = stats.iter().map(|s| s.0).fold(0.0, f64::max);
        let max_invariance = stats.iter().map(|s| s.1).fold(0.0, f64::max);
        pass &= max_roundtrip <= 1e-12 && max_invariance <= 1e-9;
        by_dim.push(json!({ "n": n, "max_roundtrip": max_roundtrip, "max_invariance": max_invariance }));
    }
    Ok((pass, json!({ "samples_per_dimension": opts.model_samples, "dimensions": by_dim })))
}

/// Largest distance of the Klein images of points along a segment from the
/// straight line through the endpoint images.
fn klein_deviation(seg: &GeodesicSegment, samples: usize) -> Result<f64, ModelError> {
    let a = seg.start().to_klein().coords().clone();
    let b = seg.end().to_klein().coords().clone();
    let d = &b - &a;
    let len = d.norm();
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let s = (k as f64 + 0.5) / samples as f64;
        let w = seg.point_at_fraction(s)?.to_klein().coords() - &a;
        let off = if len > 0.0 { &w - &d * (w.dot(&d) / (len * len)) } else { w };
        worst = worst.max(off.norm());
    }
    Ok(worst)
}

fn cat0_suite(opts: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(7));
    let mut max_violation = f64::NEG_INFINITY;
    let mut comparisons = 0;
    let mut klein = 0.0f64;
    for _ in 0..opts.triangles {
        let a = random_point(&mut rng, 3, 3.0);
        let b = random_point(&mut rng, 3, 3.0);
        let c = random_point(&mut rng, 3, 3.0);
        let r = cat0_check(&a, &b, &c, 10, &mut rng).map_err(err)?;
        max_violation = max_violation.max(r.max_violation);
        comparisons += r.comparisons;
        let seg = GeodesicSegment::new(a, b).map_err(err)?;
        klein = klein.max(klein_deviation(&seg, 10).map_err(err)?);
    }
    let pass = max_violation <= 1e-9 && klein <= 1e-9;
    Ok((
        pass,
        json!({
            "triangles": opts.triangles,
            "comparisons": comparisons,
            "max_violation": max_violation,
            "max_klein_deviation": klein,
        }),
    ))
}

/// For random `x`, the element `g*` of `W_{2L}` bringing the center closest
/// to `x` must, when it lies in `W_L`, send `x` back into the domain built
/// from `W_L`.
pub fn dirichlet_consistency(
    gens: &[Isometry],
    center: &HyperboloidPoint,
    l: usize,
    points: &[HyperboloidPoint],
) -> Result<(usize, usize, f64), String> {
    let small: GroupElementSet = word_ball(gens, l).map_err(err)?;
    let big = word_ball(gens, 2 * l).map_err(err)?;
    let domain = dirichlet_domain(&small, center, &DirichletOptions::default()).map_err(err)?;
    let orbit: Vec<HyperboloidPoint> = big.iter().map(|e| e.isometry.apply(center)).collect();
    let mut checked = 0;
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for x in points {
        let mut best = (f64::INFINITY, 0);
        for (k, y) in orbit.iter().enumerate() {
            let d = distance(x, y).map_err(err)?;
            if d < best.0 {
                best = (d, k);
            }
        }
        let g = &big.elements[best.1].isometry;
        if !small.iter().any(|e| e.isometry.relative_gap(g) <= 1e-9) {
            continue;
        }
        checked += 1;
        let w = g.inverse().apply(x).to_klein();
        let slack = domain
            .halfspaces
            .iter()
            .map(|h| h.slack(w.coords().as_slice()))
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(slack);
        if slack > 1e-9 {
            failures += 1;
        }
    }
    Ok((checked, failures, worst))
}

fn dirichlet_slab(opts: &VerifyOptions) -> Outcome {
    let gens = [Isometry::boost(2, 1, 2.0)];
    let e0 = HyperboloidPoint::origin(2);
    let elems = word_ball(&gens, 1).map_err(err)?;
    let domain = dirichlet_domain(&elems, &e0, &DirichletOptions::default()).map_err(err)?;
    let t = 1f64.tanh();
    let slab = Polyhedron::new(
        2,
        vec![
            HalfSpace::new(vec![1.0, 0.0], t).map_err(err)?,
            HalfSpace::new(vec![-1.0, 0.0], t).map_err(err)?,
        ],
    )
    .map_err(err)?;
    let slab_ok = domain.approx_eq(&slab, 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(8));
    let points: Vec<HyperboloidPoint> = (0..opts.dirichlet_points).map(|_| random_point(&mut rng, 2, 6.0)).collect();
    let (checked, failures, worst) = dirichlet_consistency(&gens, &e0, 4, &points)?;
    let pass = slab_ok && failures == 0 && checked > 0;
    Ok((
        pass,
        json!({
            "domain": domain,
            "matches_slab": slab_ok,
            "points": points.len(),
            "checked": checked,
            "failures": failures,
            "max_slack": worst,
        }),
    ))
}

fn proper_counts() -> Outcome {
    let elems = word_ball(&[Isometry::boost(2, 1, 2.0)], 6).map_err(err)?;
    let e0 = HyperboloidPoint::origin(2);
    let small = proper_action_count(&elems, &e0, 0.5).map_err(err)?;
    let large = proper_action_count(&elems, &e0, 1.5).map_err(err)?;
    Ok((small == 1 && large == 3, json!({ "r=0.5": small, "r=1.5": large })))
}

fn horoball_geometry() -> Outcome {
    let mut ball_error: f64 = 0.0;
    let directions: [&[f64]; 4] = [&[1.0, 0.0], &[0.6, -0.8], &[0.0, 0.0, 1.0], &[1.0, 2.0, -2.0]];
    for dir in directions {
        let u = DVector::from_column_slice(dir).normalize();
        let h = Horoball::new(IdealPoint::from_direction(&u).map_err(err)?, -(3f64.ln())).map_err(err)?;
        let ball = h.to_euclidean();
        let center = DVector::from_column_slice(&ball.center);
        let tangency = &center + &u * ball.radius;
        ball_error = ball_error
            .max((ball.radius - 0.25).abs())
            .max((&center - &u * 0.75).amax())
            .max((tangency - &u).amax());
    }

    let half_disk = Polyhedron::new(2, vec![HalfSpace::new(vec![1.0, 0.0], 0.0).map_err(err)?]).map_err(err)?;
    let h = Horoball::new(IdealPoint::from_direction(&DVector::from_vec(vec![-1.0, 0.0])).map_err(err)?, 1.0)
        .map_err(err)?;
    let before = h.antipode_poincare().to_klein().coords()[0];
    let shrunk = shrink_horoballs(&[h], &half_disk).map_err(err)?.remove(0);
    let after = shrunk.horoball.antipode_poincare().to_klein().coords()[0];
    let shrink_ok = before > 0.0 && after <= 1e-12 && shrunk.bisection_steps <= SHRINK_MAX_STEPS;

    let (paths, paths_ok) = complement_cases()?;
    let pass = ball_error <= 1e-12 && shrink_ok && paths_ok;
    Ok((
        pass,
        json!({
            "euclidean_ball_error": ball_error,
            "shrink": {
                "antipode_before": before,
                "antipode_after": after,
                "level": shrunk.horoball.level,
                "bisection_steps": shrunk.bisection_steps,
            },
            "complement_paths": paths,
        }),
    ))
}

/// Configurations given in the half-plane chart of the horoball, as
/// `(x, y)` pairs in units of the horocycle height.
const COMPLEMENT_CASES: [([f64; 2], [f64; 2]); 4] = [
    ([-0.7, 0.75], [0.7, 0.75]),
    ([-0.9, 0.6], [0.5, 0.8]),
    ([-0.3, 0.5], [0.4, 0.6]),
    ([-0.6, 0.8], [0.6, 0.85]),
];

fn complement_cases() -> Result<(Vec<Value>, bool), String> {
    let h = Horoball::new(IdealPoint::from_direction(&DVector::from_vec(vec![0.3, 0.9])).map_err(err)?, 0.2)
        .map_err(err)?;
    let chart = UhpChart::new(&h).map_err(err)?;
    let big_h = chart.height;
    let mut out = Vec::new();
    let mut ok = true;
    for (p, q) in COMPLEMENT_CASES {
        let x = chart.from_uhp([p[0] * big_h, p[1] * big_h]);
        let y = chart.from_uhp([q[0] * big_h, q[1] * big_h]);
        let path = complement_path(&x, &y, &h).map_err(err)?;
        let direct = distance(&x, &y).map_err(err)?;
        let oracle = detour_oracle_length(&x, &y, &h, 200).map_err(err)?;
        let case_ok = path.length >= direct
            && (path.direct == (path.length == direct))
            && (path.direct || path.length > direct)
            && (path.length - oracle).abs() <= 1e-6;
        ok &= case_ok;
        out.push(json!({
            "direct_geodesic": path.direct,
            "length": path.length,
            "distance": direct,
            "oracle": oracle,
            "pass": case_ok,
        }));
    }
    // a detour must actually occur in at least one case, and be missed in another
    let kinds: Vec<bool> = out.iter().map(|v| v["direct_geodesic"].as_bool().unwrap_or(false)).collect();
    ok &= kinds.contains(&true) && kinds.contains(&false);
    Ok((out, ok))
}

fn free_group_search() -> Outcome {
    let sanov = no_relation_search(&sanov_generators(), 12, None, DEFAULT_MAX_BITS).map_err(err)?;
    let gens = elementary_generators();
    let elementary = no_relation_search(&gens, 12, None, DEFAULT_MAX_BITS).map_err(err)?;
    let witness_ok = elementary
        .witness
        .as_ref()
        .is_some_and(|w| w.len() <= 12 && evaluate_word(&gens, w).is_some_and(|m| m == IntMatrix2::identity()));

    let id = IntMatrix2::identity();
    let minus = IntMatrix2::scalar(BigInt::from(-1));
    let [a, b] = sanov_generators();
    let c = |m: &IntMatrix2| CycloMatrix2::from(m);
    let pairs = [
        (c(&id), c(&id)),
        (c(&id), c(&minus)),
        (c(&a), c(&b)),
        (c(&a), c(&a.inverse().expect("unimodular"))),
        (c(&a.mul(&b)), c(&b.mul(&a))),
    ];
    let expected = [false, true, true, true, true];
    let got = distinct_mod_center(&pairs);
    let pass = sanov.free_up_to_l && !elementary.free_up_to_l && witness_ok && got == expected;
    Ok((
        pass,
        json!({
            "free_pair": sanov,
            "elementary_pair": elementary,
            "distinct_mod_center": got,
        }),
    ))
}

fn cohomology_suite() -> Outcome {
    let groups = small_groups();
    let find = |name: &str| groups.iter().find(|g| g.0 == name).map(|g| g.1.clone()).ok_or("missing group");
    let z2 = h1_z2(&find("Z2")?).count;
    let z3_inv = h1_z2(&find("Z3")?.with_sigma(vec![0, 2, 1]).map_err(err)?).count;
    let mut pairs = 0;
    let mut bad = Vec::new();
    for (name, g) in &groups {
        for sigma in g.involutive_automorphisms() {
            let a = g.clone().with_sigma(sigma.clone()).map_err(err)?;
            let r = semidirect_order2_classes(&a);
            pairs += 1;
            if !(r.well_defined && r.surjective && r.count <= r.h1_count) {
                bad.push(json!({ "group": name, "sigma": sigma, "result": r }));
            }
        }
    }
    let pass = z2 == 2 && z3_inv == 1 && bad.is_empty();
    Ok((
        pass,
        json!({
            "h1_z2_trivial": z2,
            "h1_z3_inversion": z3_inv,
            "group_action_pairs": pairs,
            "failures": bad,
        }),
    ))
}
