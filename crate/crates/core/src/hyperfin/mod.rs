//! Hyperfiniteness witnesses, their search, and linear expansion constants.

mod expansion;
mod search;
mod witness;

pub use expansion::{cheeger_exact, cheeger_random, expander_check, growth_ratio, ExpansionReport, MAX_EXACT_SUBSPACES};
pub use search::{witness_search, SearchOutcome};
pub use witness::{grown, witness_check, witness_failures, witness_from_tiling, HyperfiniteWitness, WitnessFile};
