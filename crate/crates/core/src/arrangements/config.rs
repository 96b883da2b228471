use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ArrangementError, CycloNum};
use crate::lattice::{DivisorClass, PicardLattice};

type Triple = [CycloNum; 3];

fn dot(u: &Triple, v: &Triple) -> CycloNum {
    &(&(&u[0] * &v[0]) + &(&u[1] * &v[1])) + &(&u[2] * &v[2])
}

fn cross(u: &Triple, v: &Triple) -> Triple {
    [
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

fn det3(u: &Triple, v: &Triple, w: &Triple) -> CycloNum {
    dot(u, &cross(v, w))
}

fn is_zero_triple(u: &Triple) -> bool {
    u.iter().all(CycloNum::is_zero)
}

/// Equality up to a nonzero scalar: all 2×2 minors vanish.
fn proportional(u: &Triple, v: &Triple) -> bool {
    is_zero_triple(&cross(u, v))
}

/// Point `[x : y : z]` of P² over ℚ(ζ).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Triple", into = "Triple")]
pub struct ProjPoint(Triple);

/// Line `{αx + βy + γz = 0}` of P² over ℚ(ζ).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Triple", into = "Triple")]
pub struct ProjLine(Triple);

macro_rules! projective {
    ($ty:ident, $err:ident) => {
        impl $ty {
            pub fn new(c: Triple) -> Result<Self, ArrangementError> {
                if is_zero_triple(&c) {
                    Err(ArrangementError::$err)
                } else {
                    Ok($ty(c))
                }
            }

            pub fn from_ints(c: [i64; 3]) -> Result<Self, ArrangementError> {
                Self::new(c.map(CycloNum::from))
            }

            pub fn coords(&self) -> &Triple {
                &self.0
            }
        }

        impl PartialEq for $ty {
            fn eq(&self, other: &Self) -> bool {
                proportional(&self.0, &other.0)
            }
        }

        impl Eq for $ty {}

        impl TryFrom<Triple> for $ty {
            type Error = ArrangementError;
            fn try_from(c: Triple) -> Result<Self, Self::Error> {
                Self::new(c)
            }
        }

        impl From<$ty> for Triple {
            fn from(p: $ty) -> Triple {
                p.0
            }
        }
    };
}
projective!(ProjPoint, ZeroPoint);
projective!(ProjLine, ZeroLine);

impl ProjPoint {
    /// Line through two distinct points.
    pub fn join(&self, other: &ProjPoint) -> Option<ProjLine> {
        ProjLine::new(cross(&self.0, &other.0)).ok()
    }
}

impl ProjLine {
    /// Common point of two distinct lines.
    pub fn meet(&self, other: &ProjLine) -> Option<ProjPoint> {
        ProjPoint::new(cross(&self.0, &other.0)).ok()
    }

    /// Line `y = c·x`.
    pub fn y_equals(c: CycloNum) -> Self {
        ProjLine([c, -CycloNum::one(), CycloNum::zero()])
    }

    /// Line `z = c·x`.
    pub fn z_equals_x(c: CycloNum) -> Self {
        ProjLine([c, CycloNum::zero(), -CycloNum::one()])
    }

    /// Line `z = c·y`.
    pub fn z_equals_y(c: CycloNum) -> Self {
        ProjLine([CycloNum::zero(), c, -CycloNum::one()])
    }
}

/// Exact incidence test: the linear form of `l` vanishes at `p`.
pub fn incidence(p: &ProjPoint, l: &ProjLine) -> bool {
    dot(&p.0, &l.0).is_zero()
}

/// True when the three points lie on a common line.
pub fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> bool {
    det3(&p.0, &q.0, &r.0).is_zero()
}

/// Points and lines with their incidence matrix (`incidence[i][j]` for point
/// `i` and line `j`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfiguration")]
pub struct Configuration {
    points: Vec<ProjPoint>,
    lines: Vec<ProjLine>,
    #[serde(skip_deserializing)]
    incidence: Vec<Vec<bool>>,
}

#[derive(Deserialize)]
struct RawConfiguration {
    points: Vec<ProjPoint>,
    lines: Vec<ProjLine>,
}

impl TryFrom<RawConfiguration> for Configuration {
    type Error = ArrangementError;
    fn try_from(raw: RawConfiguration) -> Result<Self, Self::Error> {
        Configuration::new(raw.points, raw.lines)
    }
}

impl Configuration {
    pub fn new(points: Vec<ProjPoint>, lines: Vec<ProjLine>) -> Result<Self, ArrangementError> {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(ArrangementError::DuplicatePoints(i, j));
                }
            }
        }
        let incidence = points
            .iter()
            .map(|p| lines.iter().map(|l| incidence(p, l)).collect())
            .collect();
        Ok(Configuration {
            points,
            lines,
            incidence,
        })
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn incidence(&self) -> &[Vec<bool>] {
        &self.incidence
    }

    /// Number of lines through each point.
    pub fn point_degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(|row| row.iter().filter(|&&b| b).count()).collect()
    }

    /// Number of points on each line.
    pub fn line_degrees(&self) -> Vec<usize> {
        (0..self.lines.len())
            .map(|j| self.incidence.iter().filter(|row| row[j]).count())
            .collect()
    }

    /// Indices (0-based) of the points on line `j`.
    pub fn points_on(&self, j: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| self.incidence[i][j]).collect()
    }

    /// Index of the configuration line through points `i` and `j`, if any.
    pub fn line_through_pair(&self, i: usize, j: usize) -> Option<usize> {
        let l = self.points[i].join(&self.points[j])?;
        self.lines.iter().position(|m| *m == l)
    }

    /// Same configuration with points reordered: new position `perm[i]`
    /// (0-based) receives old point `i`.
    pub fn relabel_points(&self, perm: &[usize]) -> Result<Self, ArrangementError> {
        let mut points = self.points.clone();
        for (i, &j) in perm.iter().enumerate() {
            points[j] = self.points[i].clone();
        }
        Configuration::new(points, self.lines.clone())
    }

    pub fn permute_lines(&self, perm: &[usize]) -> Result<Self, ArrangementError> {
        let mut lines = self.lines.clone();
        for (i, &j) in perm.iter().enumerate() {
            lines[j] = self.lines[i].clone();
        }
        Configuration::new(self.points.clone(), lines)
    }
}

/// The nine points `[1 : ζⁱ : ζʲ]` (i-major) followed by the three
/// coordinate points, and the nine lines `y = ζᵏx`, `z = ζᵏx`, `z = ζᵏy`.
pub fn build_dual_hesse() -> Configuration {
    let z = CycloNum::zeta_pow;
    let mut points = Vec::with_capacity(12);
    for i in 0..3 {
        for j in 0..3 {
            points.push(ProjPoint([CycloNum::one(), z(i), z(j)]));
        }
    }
    for c in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
        points.push(ProjPoint::from_ints(c).expect("coordinate point"));
    }
    let mut lines = Vec::with_capacity(9);
    lines.extend((0..3).map(|k| ProjLine::y_equals(z(k))));
    lines.extend((0..3).map(|k| ProjLine::z_equals_x(z(k))));
    lines.extend((0..3).map(|k| ProjLine::z_equals_y(z(k))));
    Configuration::new(points, lines).expect("distinct points")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collinearity {
    pub count: usize,
    pub witness: Option<ProjLine>,
}

/// Largest number of points on a common line, over all lines spanned by
/// pairs of input points.
pub fn max_collinear(points: &[ProjPoint]) -> Result<Collinearity, ArrangementError> {
    if points.len() < 2 {
        return Err(ArrangementError::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let best = (0..points.len())
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..points.len()).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let l = points[i].join(&points[j])?;
            let count = points.iter().filter(|p| incidence(p, &l)).count();
            Some((count, i, j, l))
        })
        .max_by(|a, b| a.0.cmp(&b.0).then((b.1, b.2).cmp(&(a.1, a.2))));
    Ok(match best {
        Some((count, _, _, l)) => Collinearity {
            count,
            witness: Some(l),
        },
        // all points coincide, which `Configuration` rules out
        None => Collinearity {
            count: points.len(),
            witness: None,
        },
    })
}

/// True when some four of the points have no three collinear.
pub fn general_position_4(points: &[ProjPoint]) -> Result<bool, ArrangementError> {
    let n = points.len();
    if n < 4 {
        return Err(ArrangementError::TooFewPoints { needed: 4, got: n });
    }
    let mut collinear_triples = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if collinear(&points[i], &points[j], &points[k]) {
                    collinear_triples.insert((i, j, k));
                }
            }
        }
    }
    let found = (0..n).into_par_iter().any(|a| {
        for b in a + 1..n {
            for c in b + 1..n {
                if collinear_triples.contains(&(a, b, c)) {
                    continue;
                }
                for d in c + 1..n {
                    let bad = [(a, b, d), (a, c, d), (b, c, d)];
                    if !bad.iter().any(|t| collinear_triples.contains(t)) {
                        return true;
                    }
                }
            }
        }
        false
    });
    Ok(found)
}

/// Whether the automorphisms acting trivially on the Picard group of the
/// blow-up at `points` reduce to the identity: true unless all points but at
/// most one are collinear.
pub fn aut_sharp_trivial(points: &[ProjPoint]) -> bool {
    if points.len() < 3 {
        return false;
    }
    match max_collinear(points) {
        Ok(c) => c.count < points.len() - 1,
        Err(_) => false,
    }
}

/// Classes `E₀ − Σ_{p ∈ ℓ} E_p` of the strict transforms of the lines in the
/// blow-up at all configuration points (point `i` becomes `E_{i+1}`).
pub fn strict_transform_classes(cfg: &Configuration) -> Vec<DivisorClass> {
    let lattice = PicardLattice::new(cfg.points.len());
    (0..cfg.lines.len())
        .map(|j| {
            let through: Vec<usize> = cfg.points_on(j).iter().map(|i| i + 1).collect();
            lattice.line_through(&through).expect("indices in range")
        })
        .collect()
}

/// For each pair (coordinate point, other point) in the two index lists,
/// the configuration line through both, if there is one.
pub fn spanned_lines(cfg: &Configuration, first: &[usize], second: &[usize]) -> BTreeMap<(usize, usize), Option<usize>> {
    let mut out = BTreeMap::new();
    for &i in first {
        for &j in second {
            out.insert((i, j), cfg.line_through_pair(i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: [i64; 3]) -> ProjPoint {
        ProjPoint::from_ints(c).unwrap()
    }

    #[test]
    fn incidence_examples() {
        let diag = ProjLine::y_equals(CycloNum::one());
        assert!(incidence(&pt([1, 1, 1]), &diag));
        assert!(!incidence(&pt([1, 0, 0]), &diag));
        assert!(incidence(&pt([0, 0, 1]), &diag));
        assert!(ProjPoint::from_ints([0, 0, 0]).is_err());
    }

    #[test]
    fn projective_equality() {
        let z = CycloNum::zeta();
        let p = ProjPoint::new([CycloNum::one(), z.clone(), z.pow(2)]).unwrap();
        let q = ProjPoint::new([z.clone(), z.pow(2), CycloNum::one()]).unwrap();
        assert_eq!(p, q);
        assert_ne!(p, pt([1, 1, 1]));
    }

    #[test]
    fn dual_hesse_combinatorics() {
        let cfg = build_dual_hesse();
        assert_eq!(cfg.points().len(), 12);
        assert_eq!(cfg.lines().len(), 9);
        assert!(cfg.point_degrees().iter().all(|&d| d == 3));
        assert!(cfg.line_degrees().iter().all(|&d| d == 4));
        // C₁ : y = x contains [1:1:1], [1:1:ζ], [1:1:ζ²] and [0:0:1]
        assert_eq!(cfg.points_on(0), vec![0, 1, 2, 11]);
    }

    #[test]
    fn lines_through_coordinate_points_are_configuration_lines() {
        let cfg = build_dual_hesse();
        let found = spanned_lines(&cfg, &[9, 10, 11], &(0..9).collect::<Vec<_>>());
        assert_eq!(found.len(), 27);
        assert!(found.values().all(Option::is_some));
        // through [1:0:0] and [1:ζⁱ:ζʲ] it is z = ζ^{j−i} y
        for i in 0..3 {
            for j in 0..3 {
                let line = found[&(9, 3 * i + j)].unwrap();
                assert_eq!(line, 6 + (j + 3 - i) % 3);
            }
        }
    }

    #[test]
    fn collinearity_counts() {
        assert_eq!(max_collinear(&[pt([1, 0, 0]), pt([0, 1, 0])]).unwrap().count, 2);
        let three = [pt([1, 0, 0]), pt([1, 1, 0]), pt([0, 1, 0])];
        assert_eq!(max_collinear(&three).unwrap().count, 3);
        assert_eq!(max_collinear(build_dual_hesse().points()).unwrap().count, 4);
        assert!(max_collinear(&three[..1]).is_err());
    }

    #[test]
    fn aut_sharp_boundary_cases() {
        let on_line: Vec<ProjPoint> = (0..12).map(|t| pt([1, t, 0])).collect();
        assert!(!aut_sharp_trivial(&on_line));
        let mut eleven: Vec<ProjPoint> = on_line[..11].to_vec();
        eleven.push(pt([0, 0, 1]));
        assert!(!aut_sharp_trivial(&eleven));
        assert!(!general_position_4(&eleven).unwrap());
        let hesse = build_dual_hesse();
        assert!(aut_sharp_trivial(hesse.points()));
        assert!(general_position_4(hesse.points()).unwrap());
        let frame = [pt([1, 0, 0]), pt([0, 1, 0]), pt([0, 0, 1]), pt([1, 1, 1])];
        assert!(general_position_4(&frame).unwrap());
        assert!(!general_position_4(&on_line[..4]).unwrap());
    }

    #[test]
    fn strict_transforms_of_dual_hesse() {
        let cfg = build_dual_hesse();
        let classes = strict_transform_classes(&cfg);
        let lattice = PicardLattice::new(12);
        assert_eq!(classes[0], DivisorClass::from_ints(&[1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, -1]));
        for (i, a) in classes.iter().enumerate() {
            for (j, b) in classes.iter().enumerate() {
                let expected = if i == j { -3 } else { 0 };
                assert_eq!(lattice.intersect(a, b).unwrap(), crate::lattice::rat(expected));
            }
        }
        let total = classes.iter().sum::<Option<DivisorClass>>().unwrap();
        assert!((total + 3 * lattice.canonical_class()).is_numerically_trivial());
    }

    #[test]
    fn duplicate_points_rejected() {
        let r = Configuration::new(vec![pt([1, 2, 3]), pt([2, 4, 6])], vec![]);
        assert_eq!(r, Err(ArrangementError::DuplicatePoints(0, 1)));
    }

    #[test]
    fn json_roundtrip() {
        let cfg = build_dual_hesse();
        let s = serde_json::to_string(&cfg).unwrap();
        let back: Configuration = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.incidence(), cfg.incidence());
    }
}
