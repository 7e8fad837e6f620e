//! Linear tilings: good vectors, centers, greedy maximal tilings and
//! certificate checking.

mod io;
mod map;
mod tile;

pub use io::{ProductEntry, TilingProblem, TilingProblemFile};
pub use map::{laurent_exponents, monomial_f, FSubspaceData, FiniteApproxMap};
pub use tile::{
    candidate_space, certificate_failures, greedy_tiling, is_center, precondition_check, verify_certificate,
    GreedyOptions, PreconditionReport, TilingCertificate,
};
