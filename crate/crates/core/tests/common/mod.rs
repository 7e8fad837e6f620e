//! Fixtures shared by the integration and acceptance tests.
#![allow(dead_code)]

use linrep::gf::{DenseMatrix, Field, Scalar, Subspace};
use linrep::hyperfin::HyperfiniteWitness;
use linrep::ncrat::RatExpr;
use linrep::rational::Rational;
use linrep::repseq::Representation;
use rand::Rng;

/// Random expression in the shape the parser produces: sums and products
/// have at least two children and constants are field codes.
pub fn random_ratexpr<R: Rng>(field: &Field, vars: usize, depth: usize, rng: &mut R) -> RatExpr {
    let leaf = depth == 0 || rng.random_bool(0.3);
    if leaf {
        return if rng.random_bool(0.75) {
            RatExpr::Var(rng.random_range(1..=vars))
        } else {
            RatExpr::Const(Scalar(rng.random_range(0..field.order())))
        };
    }
    match rng.random_range(0..3) {
        0 => RatExpr::inv(random_ratexpr(field, vars, depth - 1, rng)),
        k => {
            let n = rng.random_range(2..=3);
            let children = (0..n).map(|_| random_ratexpr(field, vars, depth - 1, rng)).collect();
            if k == 1 {
                RatExpr::Sum(children)
            } else {
                RatExpr::Prod(children)
            }
        }
    }
}

/// Direct sum of random invertible blocks of size at most `max_block`
/// with `r` generators, total dimension `n`.
pub fn block_fixture<R: Rng>(field: &Field, n: usize, max_block: usize, r: u32, rng: &mut R) -> Representation {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = rng.random_range(1..=max_block.min(left));
        let gens = (0..r).map(|_| DenseMatrix::random_invertible(field, size, rng)).collect();
        parts.push(Representation::new(field, size, gens).unwrap());
        left -= size;
    }
    Representation::direct_sum(&parts).unwrap()
}

/// Single-field mutations of an accepted witness, each of which breaks one
/// of the witness conditions. `kind` selects the mutation.
pub const MUTATION_KINDS: usize = 6;

pub fn mutate<R: Rng>(w: &HyperfiniteWitness, n: usize, kind: usize, rng: &mut R) -> HyperfiniteWitness {
    let mut m = w.clone();
    let field = w.tiles[0].field().clone();
    let pick = |rng: &mut R| rng.random_range(0..w.tiles.len());
    match kind {
        // K below the largest tile
        0 => m.k = w.tiles.iter().map(Subspace::dim).max().unwrap() - 1,
        // a tile listed twice
        1 => {
            let j = pick(rng);
            m.tiles.insert(rng.random_range(0..=m.tiles.len()), w.tiles[j].clone());
        }
        // a tile absorbs a vector of another tile
        2 => {
            let a = pick(rng);
            let mut b = pick(rng);
            while b == a {
                b = pick(rng);
            }
            let v = w.tiles[b].basis()[rng.random_range(0..w.tiles[b].dim())].clone();
            m.tiles[a] = Subspace::span(&field, n, w.tiles[a].basis().iter().cloned().chain([v])).unwrap();
        }
        // tiles dropped until coverage falls below (1 - eps) n
        3 => {
            let need = (Rational::from_integer(1) - w.epsilon) * Rational::from_integer(n as i64);
            while Rational::from_integer(m.coverage() as i64) >= need {
                let j = rng.random_range(0..m.tiles.len());
                m.tiles.remove(j);
            }
        }
        // a tile replaced by the zero subspace
        4 => {
            let j = pick(rng);
            m.tiles[j] = Subspace::zero(&field, n);
        }
        // epsilon = 0 admits no tile
        _ => m.epsilon = Rational::from_integer(0),
    }
    m
}
