//! Rank-function axioms and subspace identities on random inputs.

use linrep::gf::{enumerate_subspaces, gaussian_binomial, DenseMatrix, Field, Subspace};
use linrep::rng;
use proptest::prelude::*;
use std::collections::HashSet;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::gf(2).unwrap()),
        Just(Field::gf(3).unwrap()),
        Just(Field::gf_pow(2, 2).unwrap()),
        Just(Field::gf(5).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subadditive_and_product_bounded(field in fields(), n in 1usize..8, seed: u64) {
        let mut r = rng::stream(seed, 0);
        let a = DenseMatrix::random(&field, n, n, &mut r);
        let b = DenseMatrix::random(&field, n, n, &mut r);
        prop_assert!(a.add(&b).unwrap().rank() <= a.rank() + b.rank());
        prop_assert!(a.mul(&b).unwrap().rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn block_additive(field in fields(), n in 1usize..6, m in 1usize..6, seed: u64) {
        let mut r = rng::stream(seed, 1);
        let a = DenseMatrix::random(&field, n, n, &mut r);
        let b = DenseMatrix::random(&field, m, m, &mut r);
        prop_assert_eq!(DenseMatrix::block_diag(&[&a, &b]).unwrap().rank(), a.rank() + b.rank());
    }

    #[test]
    fn orthogonal_idempotents_add(field in fields(), n in 2usize..8, split in 0usize..8, seed: u64) {
        // E, F project onto complementary coordinate blocks, conjugated by P
        let mut r = rng::stream(seed, 2);
        let split = split % n;
        let p = DenseMatrix::random_invertible(&field, n, &mut r);
        let pinv = p.inverse().unwrap();
        let diag = |lo: usize, hi: usize| {
            let mut d = DenseMatrix::zeros(&field, n, n);
            for i in lo..hi {
                d.set(i, i, linrep::gf::Scalar::ONE);
            }
            p.mul(&d).unwrap().mul(&pinv).unwrap()
        };
        let e = diag(0, split);
        let f = diag(split, n);
        prop_assert!(e.mul(&f).unwrap().is_zero() && f.mul(&e).unwrap().is_zero());
        prop_assert_eq!(e.add(&f).unwrap().rank(), e.rank() + f.rank());
    }

    #[test]
    fn dimension_formula(field in fields(), n in 1usize..8, seed: u64) {
        let mut r = rng::stream(seed, 3);
        let sub = |r: &mut rng::Rng| {
            let k = r.random_range(0..=n);
            let vs: Vec<_> = (0..k).map(|_| DenseMatrix::random(&field, 1, n, r).row(0).to_vec()).collect();
            Subspace::span(&field, n, vs).unwrap()
        };
        let u = sub(&mut r);
        let w = sub(&mut r);
        let s = u.sum(&w).unwrap();
        let i = u.intersection(&w).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        prop_assert!(i.is_subspace_of(&u).unwrap() && i.is_subspace_of(&w).unwrap());
    }
}

use rand::Rng as _;

#[test]
fn enumeration_matches_gaussian_binomial() {
    for q in [2u32, 3] {
        let field = Field::gf(q).unwrap();
        for n in 0..=4 {
            for d in 0..=n {
                let all: Vec<Subspace> = enumerate_subspaces(&field, n, d, 1 << 20).unwrap().collect();
                let distinct: HashSet<Vec<Vec<u32>>> = all.iter().map(Subspace::to_int_rows).collect();
                let expected = gaussian_binomial(n, d, q as u64).unwrap();
                assert_eq!(all.len() as u128, expected, "q={q} n={n} d={d}");
                assert_eq!(distinct.len(), all.len());
                assert!(all.iter().all(|s| s.dim() == d));
            }
        }
    }
}
