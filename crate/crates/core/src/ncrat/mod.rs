//! Noncommutative rational expressions: parsing, evaluation on matrix
//! tuples, domains and randomized equivalence testing.

mod eval;
mod expr;

pub use eval::{
    equiv_probabilistic, evaluate, in_domain, sampling_field, Counterexample, EquivOptions, EvalResult, Verdict,
};
pub use expr::{hua_left, hua_right, parse_ratexpr, print_ratexpr, RatExpr};
