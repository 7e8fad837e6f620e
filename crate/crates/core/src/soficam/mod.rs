//! Sofic approximations: defect and rank-bound checks, Følner pairs and
//! truncated multiplication for polynomials, and approximate extensions of
//! representations.

mod extension;
mod folner;
mod poly;
mod sofic;

pub use extension::{approx_extension_check, ExtensionReport, GeneratorImage, MAX_EXTENSION_WORDS};
pub use folner::{folner_pair, truncation_map, FolnerPair, PolyInstance};
pub use poly::{parse_poly, Poly};
pub use sofic::{
    sofic_check, truncation_sofic_data, MapFile, RankBound, RankBoundFile, SoficData, SoficDataFile, SoficReport,
};
