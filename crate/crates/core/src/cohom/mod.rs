//! Nonabelian cohomology of ℤ/2 with coefficients in a finite group, and
//! exact word searches in 2×2 integer matrix groups.
//!
//! Cocycles for the generator `σ` of ℤ/2 are elements `z` with `z·σ(z) = e`,
//! identified by `z ~ c⁻¹·z·σ(c)`. The mirrored convention `c·z·σ(c)⁻¹`
//! gives the same classes.

mod groups;
mod words;

use thiserror::Error;

pub use groups::{h1_z2, semidirect_order2_classes, small_groups, FiniteGroupTable, H1Result, SemidirectResult};
pub use words::{
    distinct_mod_center, elementary_generators, evaluate_word, no_relation_search, pingpong_witness,
    sanov_generators, CycloMatrix2, IntMatrix2, PingPongReport, RelationSearch, DEFAULT_MAX_BITS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomError {
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("sigma is not an automorphism of the group")]
    NotAutomorphism,
    #[error("sigma is not an involution")]
    NotInvolution,
    #[error("no generators given")]
    NoGenerators,
    #[error("word length must be at least 1")]
    ZeroWordLength,
    #[error("generator {index} is not invertible over the integers")]
    NotInvertible { index: usize },
    #[error("matrix entries exceed {bits} bits")]
    Overflow { bits: u64 },
    #[error("sample {index} is the zero vector")]
    ZeroSample { index: usize },
}
