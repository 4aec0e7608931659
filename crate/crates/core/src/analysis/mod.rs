//! Set-level analyses built on the model and generator machinery.

mod jaccard;
mod memory;
mod split;
mod validity;

pub use jaccard::jaccard;
pub use memory::{compile_memory, EquivalenceRecord};
pub use split::{split_experiment, SplitMergeReport};
pub use validity::{hypothesis_validity, BlockValidity, ValidityReport};
