//! Lorentzian Picard lattices, hyperbolic geometry and exact checks for log
//! Calabi-Yau pairs on blow-ups of the projective plane.
//!
//! The guide in `book/` walks through each module; its snippets run as
//! doctests of this crate.

pub mod lattice;
pub mod models;
pub mod actions;
pub mod arrangements;
pub mod cohom;
pub mod cli;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/actions.md")]
    mod actions {}
    #[doc = include_str!("../../../book/src/horoballs.md")]
    mod horoballs {}
    #[doc = include_str!("../../../book/src/arrangements.md")]
    mod arrangements {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
