//! Partial higher dimensional automata.
//!
//! Models are finite graded cell sets with a partial table of composite
//! faces. The crate validates them, completes them to total HDA, enumerates
//! paths and their confluent homotopy classes, computes colimits of path
//! shapes and bounded unfoldings, and checks open maps, coverings and lifts.

pub mod colimit;
pub mod completion;
pub mod cube;
pub mod fixtures;
pub mod homotopy;
pub mod io;
pub mod lifting;
pub mod model;
pub mod morphism;
pub mod paths;
pub mod unfolding;
mod union_find;

pub use cube::{delete_letters, eval_coface, CubeError, Direction, Face, FaceWord, LabelWord};
pub use model::{saturate, validate_phda, Cell, CellId, FaceEntry, ModelError, Phda, RawPhda, Violation, ViolationKind};
pub use morphism::{compose, identity, validate_morphism, Morphism, MorphismError, MorphismViolation};
pub use paths::{Path, Spine};
