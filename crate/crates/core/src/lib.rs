//! Exact finite-field computations for finite-dimensional representations of
//! free groups: normalized rank profiles, linear tilings, hyperfiniteness
//! witnesses, dimension expansion, sofic approximations and
//! noncommutative rational expressions.

mod cursor;
pub mod error;
pub mod cli;
pub mod freealg;
pub mod gf;
pub mod hyperfin;
pub mod ncrat;
pub mod rational;
pub mod repseq;
pub mod rng;
pub mod soficam;
pub mod tiling;

pub use error::{Error, ParseError, Result};
