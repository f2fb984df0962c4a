//! Cutoffs, the curvature force and its potential, characteristic
//! geometry and the boundary/volume operators of the half-space problem.

mod characteristic;
mod cutoff;
mod force;
mod lemma;
mod operators;

pub use characteristic::{Characteristic, TurningPoint};
pub use cutoff::{CutoffSpec, Smoothness};
pub use force::{ForceField, ForceMode};
pub use lemma::{force_lemma_suite, ForceLemmaReport};
pub use operators::Case;
