//! Exact point-line configurations in P² over ℚ(ζ) with ζ³ = 1, their
//! blow-ups, and Calabi-Yau pair verdicts.

mod config;
mod cyclo;
mod pair;

use thiserror::Error;

use crate::lattice::LatticeError;

pub use config::{
    aut_sharp_trivial, build_dual_hesse, collinear, general_position_4, incidence, max_collinear, spanned_lines,
    strict_transform_classes, Collinearity, Configuration, ProjLine, ProjPoint,
};
pub use cyclo::CycloNum;
pub use pair::{
    build_coble_lattice_example, check_pair, dual_hesse_pair, CobleExample, CobleIdentities, CoefficientClass,
    Component, Overall, PairSpec, SncSource, SncStatus, SymbolicArrangement, SymbolicCurve, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("all coordinates of the point are zero")]
    ZeroPoint,
    #[error("all coefficients of the line are zero")]
    ZeroLine,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("coefficient of component {index} must be positive")]
    NonPositiveCoefficient { index: usize },
    #[error("arrangement does not match the components: {0}")]
    SourceMismatch(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
