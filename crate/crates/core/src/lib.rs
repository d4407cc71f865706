//! Exact combinatorics of wonderful compactifications of subvariety arrangements.
//!
//! The crate works at the level of arrangements: every geometric question
//! (intersection, containment, dimension) is answered by a [`Model`]. Three base
//! models are provided (rational linear subspaces, polydiagonals of `Xⁿ`, anchored
//! polydiagonals of `(ℙ¹)ⁿ⁻³`), and the blow-up engine produces derived models for
//! every level of a blow-up sequence.

pub mod arrangement;
pub mod blowup;
pub mod diagonal;
pub mod dim;
pub mod error;
pub mod families;
pub mod graph;
pub mod json;
pub mod linear;
pub mod model;
pub mod nest;

pub use dim::Dim;
pub use error::{Error, Result};
pub use model::{Locus, Model};
