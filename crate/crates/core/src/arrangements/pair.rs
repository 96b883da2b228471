use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::config::{build_dual_hesse, incidence, strict_transform_classes, Configuration};
use super::ArrangementError;
use crate::lattice::{rat, ratio, rational_serde, DivisorClass, PicardLattice};

/// One prime component of the boundary divisor with its coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub class: DivisorClass,
    #[serde(with = "rational_serde")]
    pub coefficient: BigRational,
    #[serde(default = "yes")]
    pub reduced_irreducible: bool,
}

fn yes() -> bool {
    true
}

/// A plane curve known only through the blown-up points it passes through
/// (each with multiplicity one).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicCurve {
    pub degree: u32,
    /// 1-based indices of blown-up points on the curve.
    pub through: Vec<usize>,
    /// Declared smooth; lines always are.
    #[serde(default)]
    pub smooth: bool,
}

/// Curves matching the components one to one, plus the sets of components
/// declared to pass through a common point that is not blown up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicArrangement {
    pub curves: Vec<SymbolicCurve>,
    #[serde(default)]
    pub unblown_concurrences: Vec<Vec<usize>>,
}

/// Geometry used for the combinatorial normal-crossings test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SncSource {
    /// Component `i` is the strict transform of line `i`, and every
    /// configuration point is blown up.
    Lines { configuration: Configuration },
    Symbolic { arrangement: SymbolicArrangement },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub lattice: PicardLattice,
    pub components: Vec<Component>,
    #[serde(default)]
    pub snc_source: Option<SncSource>,
    /// Accept normal crossings when the combinatorial test cannot decide.
    #[serde(default)]
    pub snc_attested: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SncStatus {
    Holds,
    Fails,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientClass {
    #[serde(rename = "KLT")]
    Klt,
    #[serde(rename = "lc-only")]
    LcOnly,
    #[serde(rename = "fails")]
    Fails,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Overall {
    #[serde(rename = "KLT-CY")]
    KltCy,
    #[serde(rename = "lc-CY")]
    LcCy,
    #[serde(rename = "not-CY")]
    NotCy,
    #[serde(rename = "indeterminate")]
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub snc: SncStatus,
    pub coefficient_class: CoefficientClass,
    pub cy: bool,
    pub overall: Overall,
    pub trace: Vec<String>,
}

impl PairSpec {
    /// `K + Σ cᵢ·Cᵢ`.
    pub fn log_canonical_class(&self) -> Result<DivisorClass, ArrangementError> {
        let mut acc = self.lattice.canonical_class();
        for c in &self.components {
            self.lattice.intersect(&c.class, &c.class)?;
            acc = acc + &c.coefficient * &c.class;
        }
        Ok(acc)
    }

    /// Components (and the matching source curves) reordered: new position
    /// `perm[i]` (0-based) receives old component `i`.
    pub fn permute_components(&self, perm: &[usize]) -> Result<PairSpec, ArrangementError> {
        let mut components = self.components.clone();
        for (i, &j) in perm.iter().enumerate() {
            components[j] = self.components[i].clone();
        }
        let snc_source = match &self.snc_source {
            None => None,
            Some(SncSource::Lines { configuration }) => Some(SncSource::Lines {
                configuration: configuration.permute_lines(perm)?,
            }),
            Some(SncSource::Symbolic { arrangement }) => {
                let mut curves = arrangement.curves.clone();
                for (i, &j) in perm.iter().enumerate() {
                    curves[j] = arrangement.curves[i].clone();
                }
                let unblown_concurrences = arrangement
                    .unblown_concurrences
                    .iter()
                    .map(|set| set.iter().map(|&i| perm[i]).collect())
                    .collect();
                Some(SncSource::Symbolic {
                    arrangement: SymbolicArrangement {
                        curves,
                        unblown_concurrences,
                    },
                })
            }
        };
        Ok(PairSpec {
            components,
            snc_source,
            ..self.clone()
        })
    }

    /// Blown-up points relabeled: old point `i` (1-based) becomes
    /// `perm[i − 1]`.
    pub fn relabel_points(&self, perm: &[usize]) -> Result<PairSpec, ArrangementError> {
        let components = self
            .components
            .iter()
            .map(|c| Component {
                class: c.class.relabel(perm),
                ..c.clone()
            })
            .collect();
        let snc_source = match &self.snc_source {
            None => None,
            Some(SncSource::Lines { configuration }) => {
                let zero_based: Vec<usize> = perm.iter().map(|j| j - 1).collect();
                Some(SncSource::Lines {
                    configuration: configuration.relabel_points(&zero_based)?,
                })
            }
            Some(SncSource::Symbolic { arrangement }) => Some(SncSource::Symbolic {
                arrangement: SymbolicArrangement {
                    curves: arrangement
                        .curves
                        .iter()
                        .map(|c| SymbolicCurve {
                            through: c.through.iter().map(|&i| perm[i - 1]).collect(),
                            ..c.clone()
                        })
                        .collect(),
                    unblown_concurrences: arrangement.unblown_concurrences.clone(),
                },
            }),
        };
        Ok(PairSpec {
            components,
            snc_source,
            ..self.clone()
        })
    }
}

/// Decides whether `(X, Δ)` is a KLT or log-canonical Calabi-Yau pair.
///
/// The Calabi-Yau test `K + Δ = 0` is exact. Normal crossings are decided
/// combinatorially from the attached source only: strict transforms must meet
/// pairwise with intersection number 0 or 1, and no three may share a point
/// that was not blown up. A failed normal-crossings test on this model does
/// not rule out a log resolution with good coefficients, so it yields
/// `indeterminate` rather than `not-CY`.
pub fn check_pair(spec: &PairSpec) -> Result<Verdict, ArrangementError> {
    let mut trace = Vec::new();
    for (index, c) in spec.components.iter().enumerate() {
        if c.coefficient <= BigRational::zero() {
            return Err(ArrangementError::NonPositiveCoefficient { index });
        }
    }
    let residual = spec.log_canonical_class()?;
    let cy = residual.is_numerically_trivial();
    trace.push(if cy {
        "K + Δ = 0 exactly".to_string()
    } else {
        format!("K + Δ = {residual} is nonzero")
    });

    let one = BigRational::one();
    let coefficient_class = if spec.components.iter().all(|c| c.coefficient < one) {
        CoefficientClass::Klt
    } else if spec.components.iter().all(|c| c.coefficient <= one) {
        CoefficientClass::LcOnly
    } else {
        CoefficientClass::Fails
    };
    trace.push(format!("coefficients: {coefficient_class:?}"));

    let mut snc = snc_status(spec, &mut trace)?;
    if snc == SncStatus::Unknown && spec.snc_attested {
        trace.push("normal crossings taken from the attestation flag".to_string());
        snc = SncStatus::Holds;
    }

    let overall = if !cy || coefficient_class == CoefficientClass::Fails {
        Overall::NotCy
    } else if snc != SncStatus::Holds {
        Overall::Indeterminate
    } else if coefficient_class == CoefficientClass::Klt {
        Overall::KltCy
    } else {
        Overall::LcCy
    };
    Ok(Verdict {
        snc,
        coefficient_class,
        cy,
        overall,
        trace,
    })
}

fn snc_status(spec: &PairSpec, trace: &mut Vec<String>) -> Result<SncStatus, ArrangementError> {
    if let Some(i) = spec.components.iter().position(|c| !c.reduced_irreducible) {
        trace.push(format!("component {i} is not declared reduced and irreducible"));
        return Ok(SncStatus::Unknown);
    }
    let Some(source) = &spec.snc_source else {
        trace.push("no arrangement attached; normal crossings unknown".to_string());
        return Ok(SncStatus::Unknown);
    };
    let n = spec.components.len();
    let lattice = &spec.lattice;
    let degrees: Vec<u32> = match source {
        SncSource::Lines { configuration } => {
            if configuration.lines().len() != n || configuration.points().len() != lattice.k() {
                return Err(ArrangementError::SourceMismatch(format!(
                    "{} lines and {} points for {} components on {} blown-up points",
                    configuration.lines().len(),
                    configuration.points().len(),
                    n,
                    lattice.k()
                )));
            }
            for (j, class) in strict_transform_classes(configuration).iter().enumerate() {
                if *class != spec.components[j].class {
                    return Err(ArrangementError::SourceMismatch(format!(
                        "component {j} is not the strict transform of line {j}"
                    )));
                }
            }
            vec![1; n]
        }
        SncSource::Symbolic { arrangement } => {
            if arrangement.curves.len() != n {
                return Err(ArrangementError::SourceMismatch(format!(
                    "{} curves for {} components",
                    arrangement.curves.len(),
                    n
                )));
            }
            for (j, curve) in arrangement.curves.iter().enumerate() {
                let mults: BTreeMap<usize, u32> = curve.through.iter().map(|&i| (i, 1)).collect();
                if lattice.curve_class(curve.degree, &mults)? != spec.components[j].class {
                    return Err(ArrangementError::SourceMismatch(format!(
                        "component {j} does not match its declared curve"
                    )));
                }
            }
            arrangement.curves.iter().map(|c| c.degree).collect()
        }
    };

    let cubics: Vec<usize> = (0..n).filter(|&i| degrees[i] != 1).collect();
    if let SncSource::Symbolic { arrangement } = source {
        let eligible = match cubics.as_slice() {
            [] => true,
            [i] => degrees[*i] == 3 && arrangement.curves[*i].smooth,
            _ => false,
        };
        if !eligible {
            trace.push("curves other than lines and one smooth cubic; normal crossings unknown".to_string());
            return Ok(SncStatus::Unknown);
        }
    }

    let mut undecided = false;
    for i in 0..n {
        for j in i + 1..n {
            let m = lattice.intersect(&spec.components[i].class, &spec.components[j].class)?;
            if m == rat(0) || m == rat(1) {
                continue;
            }
            if degrees[i] == 1 && degrees[j] == 1 {
                trace.push(format!("components {i} and {j} have intersection number {m}"));
                return Ok(SncStatus::Fails);
            }
            trace.push(format!(
                "components {i} and {j} have intersection number {m}; transversality undecided"
            ));
            undecided = true;
        }
    }

    match source {
        SncSource::Lines { configuration } => {
            let lines = configuration.lines();
            for i in 0..n {
                for j in i + 1..n {
                    let Some(p) = lines[i].meet(&lines[j]) else {
                        continue;
                    };
                    if configuration.points().contains(&p) {
                        continue;
                    }
                    if let Some(k) = (j + 1..n).find(|&k| incidence(&p, &lines[k])) {
                        trace.push(format!("lines {i}, {j}, {k} meet at a point that is not blown up"));
                        return Ok(SncStatus::Fails);
                    }
                }
            }
        }
        SncSource::Symbolic { arrangement } => {
            if let Some(set) = arrangement.unblown_concurrences.iter().find(|s| s.len() >= 3) {
                trace.push(format!("components {set:?} share a point that is not blown up"));
                return Ok(SncStatus::Fails);
            }
        }
    }
    if undecided {
        return Ok(SncStatus::Unknown);
    }
    trace.push("strict transforms meet pairwise transversally, at most two through any point".to_string());
    Ok(SncStatus::Holds)
}

/// The dual Hesse blow-up with `Δ = ⅓ Σ Ĉᵢ`, carrying its configuration for
/// the normal-crossings test.
pub fn dual_hesse_pair() -> PairSpec {
    let cfg = build_dual_hesse();
    let third = ratio(1, 3);
    let components = strict_transform_classes(&cfg)
        .into_iter()
        .map(|class| Component {
            class,
            coefficient: third.clone(),
            reduced_irreducible: true,
        })
        .collect();
    PairSpec {
        lattice: PicardLattice::new(cfg.points().len()),
        components,
        snc_source: Some(SncSource::Lines { configuration: cfg }),
        snc_attested: false,
    }
}

/// Coble surface data: blow-up at `p₁₂, p₁₃, p₁₄, p₂₃, p₂₄, p₃₄` (points
/// 1–6), `q₁, q₂, q₃` (7–9) and `a` (10).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CobleExample {
    /// Strict transforms `R₁, …, R₅` of the five lines.
    pub curves: Vec<DivisorClass>,
    /// `C₆ = R₁ + R₂ + R₃ + R₄ + 2R₅`.
    pub c6: DivisorClass,
    /// The pair `(X, ½C₆)`.
    pub spec: PairSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CobleIdentities {
    pub self_intersections: Vec<String>,
    pub c6_is_minus_2k: bool,
    pub k_plus_half_c6_is_zero: bool,
}

impl CobleExample {
    pub fn identities(&self) -> Result<CobleIdentities, ArrangementError> {
        let lattice = &self.spec.lattice;
        let self_intersections = self
            .curves
            .iter()
            .map(|r| lattice.self_intersection(r).map(|x| x.to_string()))
            .collect::<Result<_, _>>()?;
        let k = lattice.canonical_class();
        let c6_is_minus_2k = (&self.c6 + &(2 * k.clone())).is_numerically_trivial();
        let k_plus_half_c6_is_zero = (&k + &(&ratio(1, 2) * &self.c6)).is_numerically_trivial();
        Ok(CobleIdentities {
            self_intersections,
            c6_is_minus_2k,
            k_plus_half_c6_is_zero,
        })
    }
}

/// Points on each line of the Coble example (1-based).
const COBLE_LINES: [&[usize]; 5] = [&[1, 2, 3], &[1, 4, 5], &[2, 4, 6], &[3, 5, 6], &[7, 8, 9, 10]];

pub fn build_coble_lattice_example() -> CobleExample {
    let lattice = PicardLattice::new(10);
    let curves: Vec<DivisorClass> = COBLE_LINES
        .iter()
        .map(|through| lattice.line_through(through).expect("indices in range"))
        .collect();
    let c6 = curves[..4].iter().fold(2 * curves[4].clone(), |acc, r| acc + r.clone());
    let half = ratio(1, 2);
    let components = curves
        .iter()
        .enumerate()
        .map(|(i, class)| Component {
            class: class.clone(),
            coefficient: if i < 4 { half.clone() } else { rat(1) },
            reduced_irreducible: true,
        })
        .collect();
    let arrangement = SymbolicArrangement {
        curves: COBLE_LINES
            .iter()
            .map(|through| SymbolicCurve {
                degree: 1,
                through: through.to_vec(),
                smooth: true,
            })
            .collect(),
        unblown_concurrences: Vec::new(),
    };
    CobleExample {
        curves,
        c6,
        spec: PairSpec {
            lattice,
            components,
            snc_source: Some(SncSource::Symbolic { arrangement }),
            snc_attested: false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_hesse_is_klt_cy() {
        let v = check_pair(&dual_hesse_pair()).unwrap();
        assert_eq!(v.snc, SncStatus::Holds);
        assert_eq!(v.coefficient_class, CoefficientClass::Klt);
        assert!(v.cy);
        assert_eq!(v.overall, Overall::KltCy);
    }

    #[test]
    fn coble_is_lc_not_klt() {
        let ex = build_coble_lattice_example();
        let ids = ex.identities().unwrap();
        assert_eq!(ids.self_intersections, vec!["-2", "-2", "-2", "-2", "-3"]);
        assert!(ids.c6_is_minus_2k && ids.k_plus_half_c6_is_zero);
        let mut expected = vec![-2; 11];
        expected[0] = 6;
        assert_eq!(ex.c6, DivisorClass::from_ints(&expected));
        let v = check_pair(&ex.spec).unwrap();
        assert_eq!(v.coefficient_class, CoefficientClass::LcOnly);
        assert_eq!(v.snc, SncStatus::Holds);
        assert_eq!(v.overall, Overall::LcCy);
    }

    #[test]
    fn empty_boundary_is_not_cy() {
        let spec = PairSpec {
            lattice: PicardLattice::new(12),
            components: vec![],
            snc_source: None,
            snc_attested: false,
        };
        let v = check_pair(&spec).unwrap();
        assert!(!v.cy);
        assert_eq!(v.overall, Overall::NotCy);
    }

    #[test]
    fn unknown_snc_and_attestation() {
        let mut spec = dual_hesse_pair();
        spec.snc_source = None;
        assert_eq!(check_pair(&spec).unwrap().overall, Overall::Indeterminate);
        spec.snc_attested = true;
        assert_eq!(check_pair(&spec).unwrap().overall, Overall::KltCy);
    }

    #[test]
    fn declared_concurrence_fails_snc() {
        let mut ex = build_coble_lattice_example();
        if let Some(SncSource::Symbolic { arrangement }) = &mut ex.spec.snc_source {
            arrangement.unblown_concurrences.push(vec![0, 1, 4]);
        }
        let v = check_pair(&ex.spec).unwrap();
        assert_eq!(v.snc, SncStatus::Fails);
        assert_eq!(v.overall, Overall::Indeterminate);
    }

    #[test]
    fn concurrent_lines_at_unblown_point() {
        use crate::arrangements::{ProjLine, ProjPoint};
        // x = 0, y = 0 and x = y all pass through [0:0:1], which is not blown up
        let lines = vec![
            ProjLine::from_ints([1, 0, 0]).unwrap(),
            ProjLine::from_ints([0, 1, 0]).unwrap(),
            ProjLine::from_ints([1, -1, 0]).unwrap(),
        ];
        let cfg = Configuration::new(vec![ProjPoint::from_ints([0, 1, 1]).unwrap()], lines).unwrap();
        let classes = strict_transform_classes(&cfg);
        let spec = PairSpec {
            lattice: PicardLattice::new(1),
            components: classes
                .into_iter()
                .map(|class| Component {
                    class,
                    coefficient: ratio(1, 2),
                    reduced_irreducible: true,
                })
                .collect(),
            snc_source: Some(SncSource::Lines { configuration: cfg }),
            snc_attested: true,
        };
        assert_eq!(check_pair(&spec).unwrap().snc, SncStatus::Fails);
    }

    #[test]
    fn invariant_under_permutations() {
        let base = dual_hesse_pair();
        let v0 = check_pair(&base).unwrap();
        let perm = [3, 0, 8, 1, 7, 2, 6, 4, 5];
        let v1 = check_pair(&base.permute_components(&perm).unwrap()).unwrap();
        assert_eq!((v0.snc, v0.overall), (v1.snc, v1.overall));
        let relabel: Vec<usize> = (1..=12).rev().collect();
        let v2 = check_pair(&base.relabel_points(&relabel).unwrap()).unwrap();
        assert_eq!((v0.snc, v0.overall), (v2.snc, v2.overall));
        let coble = build_coble_lattice_example().spec;
        let relabel = [10, 9, 8, 7, 6, 5, 4, 3, 2, 1];
        let v3 = check_pair(&coble.relabel_points(&relabel).unwrap().permute_components(&[4, 3, 2, 1, 0]).unwrap()).unwrap();
        assert_eq!(v3.overall, Overall::LcCy);
    }

    #[test]
    fn rejects_nonpositive_coefficient() {
        let mut spec = dual_hesse_pair();
        spec.components[2].coefficient = ratio(-1, 3);
        assert_eq!(check_pair(&spec), Err(ArrangementError::NonPositiveCoefficient { index: 2 }));
    }

    #[test]
    fn json_roundtrip() {
        let spec = build_coble_lattice_example().spec;
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains(r#""coefficient":"1/2""#));
        let back: PairSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
    }
}
