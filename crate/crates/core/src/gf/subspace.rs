//! Subspaces of `GF(q)^n` in canonical reduced echelon form.
//!
//! Two subspaces are equal exactly when their stored bases are identical,
//! so `==` and `Hash` are structural.

use rand::Rng;

use super::field::{Field, Scalar};
use super::matrix::{rref_in_place, DenseMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    /// rows in reduced row echelon form, pivots strictly increasing
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    /// The span of the given vectors.
    pub fn span<I>(field: &Field, ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut data = Vec::new();
        let mut rows = 0;
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::AmbientMismatch(v.len(), ambient));
            }
            data.extend(v);
            rows += 1;
        }
        Ok(Self::from_buffer(field, ambient, data, rows))
    }

    fn from_buffer(field: &Field, ambient: usize, mut data: Vec<Scalar>, rows: usize) -> Self {
        let pivots = rref_in_place(field, &mut data, rows, ambient, ambient);
        let basis = (0..pivots.len())
            .map(|i| data[i * ambient..(i + 1) * ambient].to_vec())
            .collect();
        Subspace {
            field: field.clone(),
            ambient,
            basis,
        }
    }

    pub fn zero(field: &Field, ambient: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(field: &Field, ambient: usize) -> Self {
        Self::coordinate(field, ambient, 0..ambient)
    }

    /// Span of the unit vectors `e_i`, `i` in `indices`.
    pub fn coordinate(field: &Field, ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().filter(|&i| i < ambient).collect();
        idx.sort_unstable();
        idx.dedup();
        let basis = idx
            .into_iter()
            .map(|i| {
                let mut v = vec![Scalar::ZERO; ambient];
                v[i] = Scalar::ONE;
                v
            })
            .collect();
        Subspace {
            field: field.clone(),
            ambient,
            basis,
        }
    }

    /// Integer-code rows, reduced on the way in.
    pub fn from_int_rows(field: &Field, ambient: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut vectors = Vec::with_capacity(rows.len());
        for r in rows {
            if let Some(bad) = r.iter().find(|&&c| c >= field.order()) {
                return Err(Error::InvalidInput(format!("entry {bad} outside {field}")));
            }
            vectors.push(r.iter().map(|&c| Scalar(c)).collect());
        }
        Self::span(field, ambient, vectors)
    }

    pub fn to_int_rows(&self) -> Vec<Vec<u32>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|s| s.0).collect())
            .collect()
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }
    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    #[inline]
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|s| !s.is_zero()).expect("basis rows are nonzero"))
            .collect()
    }

    /// Basis rows as a `dim x ambient` matrix.
    pub fn to_matrix(&self) -> DenseMatrix {
        let data = self.basis.iter().flatten().copied().collect();
        DenseMatrix::new(&self.field, self.dim(), self.ambient, data).expect("consistent shape")
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if v.len() != self.ambient {
            return Err(Error::AmbientMismatch(v.len(), self.ambient));
        }
        let f = &self.field;
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for (row, pc) in self.basis.iter().zip(self.pivots()) {
            let c = rest[pc];
            super::matrix::row_sub_scaled(f, &mut rest, row, c);
            coords.push(c);
        }
        Ok(rest.iter().all(|s| s.is_zero()).then_some(coords))
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Subspace::span(
            &self.field,
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    /// Intersection by the Zassenhaus construction: reduce rows `[u | u]`
    /// and `[w | 0]`; rows with vanishing left half span `U ∩ W`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let n = self.ambient;
        let w = 2 * n;
        let rows = self.dim() + other.dim();
        let mut data = vec![Scalar::ZERO; rows * w];
        for (i, u) in self.basis.iter().enumerate() {
            data[i * w..i * w + n].copy_from_slice(u);
            data[i * w + n..(i + 1) * w].copy_from_slice(u);
        }
        for (j, v) in other.basis.iter().enumerate() {
            let i = self.dim() + j;
            data[i * w..i * w + n].copy_from_slice(v);
        }
        let pivots = rref_in_place(&self.field, &mut data, rows, w, w);
        let vectors = pivots
            .iter()
            .enumerate()
            .filter(|(_, &pc)| pc >= n)
            .map(|(i, _)| data[i * w + n..(i + 1) * w].to_vec());
        Subspace::span(&self.field, n, vectors)
    }

    /// The coordinate complement: unit vectors at the non-pivot columns.
    pub fn complement(&self) -> Subspace {
        let pivots = self.pivots();
        Subspace::coordinate(
            &self.field,
            self.ambient,
            (0..self.ambient).filter(|c| !pivots.contains(c)),
        )
    }

    /// `M(self)` for a matrix with `ambient` columns.
    pub fn image(&self, m: &DenseMatrix) -> Result<Subspace> {
        if m.field() != &self.field {
            return Err(Error::FieldMismatch(m.field().to_string(), self.field.to_string()));
        }
        let mut vectors = Vec::with_capacity(self.dim());
        for b in &self.basis {
            vectors.push(m.apply(b)?);
        }
        Subspace::span(&self.field, m.rows(), vectors)
    }

    /// Rows of a matrix `A` with `self = ker A`.
    pub fn annihilator(&self) -> DenseMatrix {
        let ann = self.to_matrix().kernel();
        ann.to_matrix()
    }

    /// `{x : M x ∈ self}` for a matrix with `ambient` rows.
    pub fn preimage(&self, m: &DenseMatrix) -> Result<Subspace> {
        if m.rows() != self.ambient {
            return Err(Error::AmbientMismatch(m.rows(), self.ambient));
        }
        let ann = self.annihilator();
        if ann.rows() == 0 {
            return Ok(Subspace::full(&self.field, m.cols()));
        }
        Ok(ann.mul(m)?.kernel())
    }

    /// A uniformly random element.
    pub fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Scalar> {
        let f = &self.field;
        let q = f.order();
        let mut v = vec![Scalar::ZERO; self.ambient];
        for b in &self.basis {
            let c = Scalar(rng.random_range(0..q));
            super::matrix::row_sub_scaled(f, &mut v, b, f.neg(c));
        }
        v
    }

    /// Element with the given basis coordinates.
    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut v = vec![Scalar::ZERO; self.ambient];
        for (b, &c) in self.basis.iter().zip(coords) {
            super::matrix::row_sub_scaled(f, &mut v, b, f.neg(c));
        }
        v
    }
}

/// Sum of a family of subspaces of a common ambient space.
pub fn sum_all(field: &Field, ambient: usize, spaces: &[Subspace]) -> Result<Subspace> {
    for s in spaces {
        if s.ambient != ambient {
            return Err(Error::AmbientMismatch(s.ambient, ambient));
        }
        if &s.field != field {
            return Err(Error::FieldMismatch(s.field.to_string(), field.to_string()));
        }
    }
    Subspace::span(field, ambient, spaces.iter().flat_map(|s| s.basis.iter().cloned()))
}

/// True iff the dimension of the sum equals the sum of dimensions.
pub fn subspaces_independent(spaces: &[Subspace]) -> Result<bool> {
    let Some(first) = spaces.first() else {
        return Ok(true);
    };
    let total = sum_all(&first.field, first.ambient, spaces)?;
    Ok(total.dim() == spaces.iter().map(Subspace::dim).sum::<usize>())
}

/// The idempotent with image `v` and kernel `w`.
pub fn projection_onto(v: &Subspace, w: &Subspace) -> Result<DenseMatrix> {
    v.check(w)?;
    let n = v.ambient;
    if v.dim() + w.dim() != n || !subspaces_independent(&[v.clone(), w.clone()])? {
        return Err(Error::NotComplementary);
    }
    // columns: basis of V then basis of W; P = C diag(I, 0) C^-1
    let columns: Vec<Vec<Scalar>> = v.basis.iter().chain(&w.basis).cloned().collect();
    let c = DenseMatrix::from_columns(&v.field, n, &columns)?;
    let c_inv = c.inverse()?;
    let mut keep = DenseMatrix::zeros(&v.field, n, n);
    for i in 0..v.dim() {
        keep.set(i, i, Scalar::ONE);
    }
    c.mul(&keep)?.mul(&c_inv)
}

/// Gaussian binomial `[n choose d]_q`, `None` on overflow.
pub fn gaussian_binomial(n: usize, d: usize, q: u64) -> Option<u128> {
    if d > n {
        return Some(0);
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num = num.checked_mul(q.checked_pow((n - i) as u32)?.checked_sub(1)?)?;
        den = den.checked_mul(q.checked_pow((i + 1) as u32)?.checked_sub(1)?)?;
        let g = num_integer::gcd(num, den);
        num /= g;
        den /= g;
    }
    Some(num / den)
}

/// Every `d`-dimensional subspace of `field^n` exactly once, ordered by pivot
/// pattern (lexicographic) and then by the free entries (lexicographic,
/// row-major). Fails if the count exceeds `cap`.
pub fn enumerate_subspaces(field: &Field, n: usize, d: usize, cap: u128) -> Result<SubspaceIter> {
    if d > n {
        return Err(Error::InvalidInput(format!("dimension {d} exceeds ambient {n}")));
    }
    let count = gaussian_binomial(n, d, field.order() as u64).unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::BudgetExceeded { needed: count, cap });
    }
    let mut it = SubspaceIter {
        field: field.clone(),
        n,
        pivots: (0..d).collect(),
        free: Vec::new(),
        digits: Vec::new(),
        done: false,
        remaining: count,
    };
    it.reset_free();
    Ok(it)
}

pub struct SubspaceIter {
    field: Field,
    n: usize,
    pivots: Vec<usize>,
    /// (row, column) positions that are free in the current pattern
    free: Vec<(usize, usize)>,
    digits: Vec<u32>,
    done: bool,
    remaining: u128,
}

impl SubspaceIter {
    fn reset_free(&mut self) {
        self.free.clear();
        for (row, &pc) in self.pivots.iter().enumerate() {
            for c in pc + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((row, c));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    /// Advance to the next pivot combination; false when exhausted.
    fn next_pattern(&mut self) -> bool {
        let d = self.pivots.len();
        let n = self.n;
        let Some(i) = (0..d).rev().find(|&i| self.pivots[i] < n - d + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..d {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        self.reset_free();
        true
    }

    fn advance(&mut self) {
        let q = self.field.order();
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] < q {
                return;
            }
            self.digits[k] = 0;
        }
        if !self.next_pattern() {
            self.done = true;
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let mut basis = vec![vec![Scalar::ZERO; self.n]; self.pivots.len()];
        for (row, &pc) in self.pivots.iter().enumerate() {
            basis[row][pc] = Scalar::ONE;
        }
        for (&(row, c), &v) in self.free.iter().zip(&self.digits) {
            basis[row][c] = Scalar(v);
        }
        let out = Subspace {
            field: self.field.clone(),
            ambient: self.n,
            basis,
        };
        self.remaining = self.remaining.saturating_sub(1);
        self.advance();
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn v(f: &Field, xs: &[u32]) -> Vec<Scalar> {
        xs.iter().map(|&x| f.scalar(x).unwrap()).collect()
    }

    #[test]
    fn sum_examples() {
        let f = Field::gf(2).unwrap();
        let u = Subspace::span(&f, 3, [v(&f, &[1, 1, 0]), v(&f, &[0, 0, 1])]).unwrap();
        assert_eq!(u.sum(&u).unwrap(), u);
        let w = Subspace::span(&f, 3, [v(&f, &[0, 1, 1])]).unwrap();
        assert_eq!(u.sum(&w).unwrap().dim(), 3);
        let e1 = Subspace::coordinate(&f, 2, [0]);
        let e2 = Subspace::coordinate(&f, 2, [1]);
        assert!(e1.sum(&e2).unwrap().is_full());
    }

    #[test]
    fn intersection_examples() {
        let f = Field::gf(3).unwrap();
        let a = Subspace::coordinate(&f, 3, [0, 1]);
        let b = Subspace::coordinate(&f, 3, [1, 2]);
        assert_eq!(a.intersection(&b).unwrap(), Subspace::coordinate(&f, 3, [1]));
        assert_eq!(a.intersection(&a).unwrap(), a);
        let e1 = Subspace::coordinate(&f, 3, [0]);
        let e2 = Subspace::coordinate(&f, 3, [1]);
        assert!(e1.intersection(&e2).unwrap().is_zero());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let f = Field::gf(2).unwrap();
        let a = Subspace::full(&f, 2);
        let b = Subspace::full(&f, 3);
        assert!(matches!(a.sum(&b), Err(Error::AmbientMismatch(2, 3))));
        assert!(a.intersection(&b).is_err());
        assert!(subspaces_independent(&[a, b]).is_err());
    }

    #[test]
    fn independence_examples() {
        let f = Field::gf(2).unwrap();
        let e1 = Subspace::coordinate(&f, 2, [0]);
        let e2 = Subspace::coordinate(&f, 2, [1]);
        assert!(subspaces_independent(&[e1.clone(), e2.clone()]).unwrap());
        assert!(!subspaces_independent(&[e1.clone(), e1.clone()]).unwrap());
        let diag = Subspace::span(&f, 2, [v(&f, &[1, 1])]).unwrap();
        assert!(!subspaces_independent(&[e1, e2, diag]).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let f2 = Field::gf(2).unwrap();
        assert_eq!(enumerate_subspaces(&f2, 2, 1, 1000).unwrap().count(), 3);
        assert_eq!(enumerate_subspaces(&f2, 4, 2, 1000).unwrap().count(), 35);
        let zero: Vec<_> = enumerate_subspaces(&f2, 4, 0, 10).unwrap().collect();
        assert_eq!(zero, vec![Subspace::zero(&f2, 4)]);
        assert!(matches!(
            enumerate_subspaces(&f2, 4, 2, 34),
            Err(Error::BudgetExceeded { needed: 35, cap: 34 })
        ));
    }

    #[test]
    fn enumeration_is_exhaustive_and_duplicate_free() {
        for q in [2u32, 3] {
            let f = Field::gf(q).unwrap();
            for n in 0..=4 {
                for d in 0..=n {
                    let all: Vec<Subspace> = enumerate_subspaces(&f, n, d, 1 << 20).unwrap().collect();
                    let expected = gaussian_binomial(n, d, q as u64).unwrap() as usize;
                    assert_eq!(all.len(), expected, "q={q} n={n} d={d}");
                    // canonical: re-reducing changes nothing
                    for s in &all {
                        let again = Subspace::span(&f, n, s.basis().iter().cloned()).unwrap();
                        assert_eq!(&again, s);
                        assert_eq!(s.dim(), d);
                    }
                    let set: HashSet<_> = all.iter().cloned().collect();
                    assert_eq!(set.len(), all.len());
                }
            }
        }
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(2, 1, 2), Some(3));
        assert_eq!(gaussian_binomial(4, 2, 2), Some(35));
        assert_eq!(gaussian_binomial(4, 2, 3), Some(130));
        assert_eq!(gaussian_binomial(8, 4, 2), Some(200787));
        assert_eq!(gaussian_binomial(3, 5, 2), Some(0));
    }

    #[test]
    fn projection_examples() {
        let f = Field::gf(2).unwrap();
        let full = Subspace::full(&f, 3);
        let zero = Subspace::zero(&f, 3);
        assert!(projection_onto(&full, &zero).unwrap().is_identity());

        let e1 = Subspace::coordinate(&f, 2, [0]);
        let e2 = Subspace::coordinate(&f, 2, [1]);
        let p = projection_onto(&e1, &e2).unwrap();
        assert_eq!(p.to_int_rows(), vec![vec![1, 0], vec![0, 0]]);

        let diag = Subspace::span(&f, 2, [v(&f, &[1, 1])]).unwrap();
        let p = projection_onto(&diag, &e2).unwrap();
        assert_eq!(p.mul(&p).unwrap(), p);
        assert_eq!(p.rank(), 1);
        assert_eq!(p.column_space(), diag);
        assert_eq!(p.kernel(), e2);

        assert!(matches!(projection_onto(&e1, &e1), Err(Error::NotComplementary)));
    }

    #[test]
    fn preimage_and_image() {
        let f = Field::gf(2).unwrap();
        // shift e0 -> e1 -> e2 -> 0
        let shift = DenseMatrix::from_rows(&f, &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let target = Subspace::coordinate(&f, 3, [1]);
        let pre = target.preimage(&shift).unwrap();
        // x with shift(x) in span{e1}: x0 free, x1 = 0, x2 free
        assert_eq!(pre, Subspace::coordinate(&f, 3, [0, 2]));
        let img = Subspace::full(&f, 3).image(&shift).unwrap();
        assert_eq!(img, Subspace::coordinate(&f, 3, [1, 2]));
    }

    #[test]
    fn complement_is_complementary() {
        let f = Field::gf(3).unwrap();
        let s = Subspace::span(&f, 4, [v(&f, &[1, 2, 0, 1]), v(&f, &[0, 0, 1, 2])]).unwrap();
        let c = s.complement();
        assert_eq!(c.dim(), 2);
        assert!(subspaces_independent(&[s, c]).unwrap());
    }
}
