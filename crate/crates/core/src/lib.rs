//! Pseudomanifolds, their normalization, top-perversity intersection
//! homology and the flat norm on simplicial chains.
//!
//! The central check is [`normalization::derham_verify`]: for a
//! pseudomanifold X, the rational intersection homology of X in the top
//! perversity agrees degree by degree with the rational cohomology of its
//! normalization X̃. Both sides are computed exactly from one triangulation.

pub mod cli;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod flatnorm;
pub mod homology;
pub mod intersection;
pub mod io;
pub mod matrix;
pub mod normalization;
pub mod snf;
mod unionfind;

pub use complex::{Simplex, SimplicialComplex, Subcomplex, Vertex};
pub use error::{Error, Result};
pub use homology::{Coefficients, HomologyResult};
