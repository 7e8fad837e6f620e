//! Free-group words, the group algebra `K F_r` and matrices over it.

mod element;
mod parse;
mod word;

pub use element::{AlgebraElement, AlgebraMatrix};
pub use parse::parse_element;
pub use word::{Letter, Word};
