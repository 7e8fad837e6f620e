//! Exact arithmetic over GF(q): scalars, dense matrices and subspaces.

mod field;
mod matrix;
mod subspace;

pub use field::{Field, FieldSpec, Scalar, MAX_ORDER};
pub use matrix::{rank_distance, DenseMatrix};
pub use subspace::{
    enumerate_subspaces, gaussian_binomial, projection_onto, subspaces_independent, sum_all,
    Subspace, SubspaceIter,
};

/// A column vector of field elements.
pub type Vector = Vec<Scalar>;
