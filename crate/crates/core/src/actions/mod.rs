//! Discrete groups acting on hyperbolic space: word balls, Dirichlet
//! domains, horoball tests and paths in cusp complements.

mod complement;
mod cusps;
mod domain;
mod group;
mod oracle;
pub mod polyhedron;

use thiserror::Error;

use crate::models::ModelError;

pub use complement::{complement_path, uhp_distance, ComplementPath, PathPiece, PieceKind, UhpChart};
pub use cusps::{horocusp_check, shrink_horoballs, HorocuspReport, ShrinkResult, SHRINK_MAX_STEPS, STABILIZER_ANGLE};
pub use domain::{
    bisector, dirichlet_domain, limit_points, project_cone, proper_action_count, ConeProjection, ConeSpec,
    DirichletOptions,
};
pub use group::{word_ball, word_ball_capped, GroupElement, GroupElementSet, DEDUP_TOL, DEFAULT_ELEMENT_CAP};
pub use oracle::detour_oracle_length;
pub use polyhedron::{convex_hull, HalfSpace, Hull, Polyhedron, HULL_DIM_CAP};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ActionError {
    #[error("half-space has a zero normal")]
    DegenerateHalfSpace,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("convex hulls are only computed up to dimension {HULL_DIM_CAP}, got {dim}")]
    DimensionCap { dim: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("no generators given")]
    NoGenerators,
    #[error("more than {cap} distinct elements")]
    ElementCap { cap: usize },
    #[error("element {word:?} fixes the center point")]
    NontrivialStabilizer { word: Vec<i32> },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("ray {index} is outside the closed positive cone (square {square})")]
    RayOutsidePositiveCone { index: usize, square: f64 },
    #[error("horoball base point is outside the region")]
    BaseOutsideRegion,
    #[error("point {0} lies inside the open horoball")]
    InsideHoroball(&'static str),
    #[error("only implemented in dimension 2, got {dim}")]
    NotPlanar { dim: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}
