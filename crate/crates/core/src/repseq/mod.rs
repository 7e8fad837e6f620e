//! Representations of free groups, normalized rank profiles and repair.

mod family;
mod profile;
mod repair;
mod representation;

pub use family::{family_generate, FamilyDescriptor, MAX_FAMILY_DIM};
pub use profile::{atiyah_check, normalized_rank, AtiyahReport, NormalizedRank, ProfileEntry, RankProfile};
pub use repair::repair_to_invertible;
pub use representation::{Representation, RepresentationFile};
