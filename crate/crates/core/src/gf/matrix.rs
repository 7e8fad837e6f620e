use std::fmt;

use rand::Rng;

use super::field::{Field, Scalar};
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Row-major dense matrix over a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<u32> = self.row(i).iter().map(|s| s.0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// `dst <- dst - factor * src`
#[inline]
pub(crate) fn row_sub_scaled(field: &Field, dst: &mut [Scalar], src: &[Scalar], factor: Scalar) {
    if factor.is_zero() {
        return;
    }
    if field.characteristic() == 2 && factor == Scalar::ONE {
        for (d, s) in dst.iter_mut().zip(src) {
            d.0 ^= s.0;
        }
        return;
    }
    let neg = field.neg(factor);
    for (d, &s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = field.add(*d, field.mul(neg, s));
        }
    }
}

/// In-place reduced row echelon form of a row-major buffer. Pivots are
/// searched only in the first `pivot_cols` columns; row operations act on
/// the full width. Returns the pivot columns.
pub(crate) fn rref_in_place(
    field: &Field,
    data: &mut [Scalar],
    rows: usize,
    cols: usize,
    pivot_cols: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if i != r {
            for k in 0..cols {
                data.swap(i * cols + k, r * cols + k);
            }
        }
        let inv = field.inv(data[r * cols + c]).expect("pivot is nonzero");
        if inv != Scalar::ONE {
            for k in c..cols {
                data[r * cols + k] = field.mul(data[r * cols + k], inv);
            }
        }
        let (head, tail) = data.split_at_mut(r * cols);
        let (pivot_row, rest) = tail.split_at_mut(cols);
        for row in head.chunks_exact_mut(cols).chain(rest.chunks_exact_mut(cols)) {
            let f = row[c];
            row_sub_scaled(field, &mut row[c..], &pivot_row[c..], f);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl DenseMatrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| s.0 >= field.order()) {
            return Err(Error::InvalidInput(format!(
                "entry {bad} outside {field}"
            )));
        }
        Ok(DenseMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Self::scalar(field, n, Scalar::ONE)
    }

    /// `c * Id_n`
    pub fn scalar(field: &Field, n: usize, c: Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// Builds a matrix from rows of integer codes.
    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&c| Scalar(c)).collect();
        Self::new(field, rows.len(), cols, data)
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}`.
    pub fn permutation(field: &Field, perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut m = Self::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(format!("{perm:?} is not a permutation")));
            }
            m.data[i * n + j] = Scalar::ONE;
        }
        Ok(m)
    }

    /// Uniformly random entries.
    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let q = field.order();
        let data = (0..rows * cols).map(|_| Scalar(rng.random_range(0..q))).collect();
        DenseMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Uniformly random invertible matrix, by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn from_columns(field: &Field, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch("column length".into()));
            }
            for (i, &v) in col.iter().enumerate() {
                m.data[i * columns.len() + j] = v;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    #[inline]
    pub fn data(&self) -> &[Scalar] {
        &self.data
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_int_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|s| s.0).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { Scalar::ONE } else { Scalar::ZERO })
            })
    }

    fn check_same(&self, other: &Self, what: &str) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "add")?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(DenseMatrix { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "sub")?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(DenseMatrix { data, ..self.clone() })
    }

    /// `self += c * other`
    pub fn add_scaled_assign(&mut self, other: &Self, c: Scalar) -> Result<()> {
        self.check_same(other, "add")?;
        let neg = self.field.neg(c);
        row_sub_scaled(&self.field.clone(), &mut self.data, &other.data, neg);
        Ok(())
    }

    pub fn scale(&self, c: Scalar) -> Self {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        DenseMatrix { data, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let neg = f.neg(a);
                row_sub_scaled(f, dst, other.row(k), neg);
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&self.field, &mut m.data, m.rows, m.cols, m.cols);
        (m, pivots)
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rref_in_place(&self.field, &mut data, self.rows, self.cols, self.cols).len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let w = 2 * n;
        let mut aug = vec![Scalar::ZERO; n * w];
        for i in 0..n {
            aug[i * w..i * w + n].copy_from_slice(self.row(i));
            aug[i * w + n + i] = Scalar::ONE;
        }
        let pivots = rref_in_place(&self.field, &mut aug, n, w, n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        let data = (0..n).flat_map(|i| aug[i * w + n..(i + 1) * w].to_vec()).collect();
        Ok(DenseMatrix {
            field: self.field.clone(),
            rows: n,
            cols: n,
            data,
        })
    }

    /// The null space `{x : self * x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let f = &self.field;
        let vectors = (0..self.cols).filter(|&c| !is_pivot[c]).map(|free| {
            let mut v = vec![Scalar::ZERO; self.cols];
            v[free] = Scalar::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            v
        });
        Subspace::span(f, self.cols, vectors).expect("kernel vectors have ambient length")
    }

    /// Column space as a subspace of `field^rows`.
    pub fn column_space(&self) -> Subspace {
        let t = self.transpose();
        Subspace::span(&self.field, self.rows, (0..t.rows).map(|i| t.row(i).to_vec()))
            .expect("columns have ambient length")
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let w = self.cols + 1;
        let mut aug = vec![Scalar::ZERO; self.rows * w];
        for i in 0..self.rows {
            aug[i * w..i * w + self.cols].copy_from_slice(self.row(i));
            aug[i * w + self.cols] = b[i];
        }
        let pivots = rref_in_place(&self.field, &mut aug, self.rows, w, w);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::ZERO; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[row * w + self.cols];
        }
        Ok(Some(x))
    }

    /// `diag(blocks[0], blocks[1], ...)`
    pub fn block_diag(blocks: &[&DenseMatrix]) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::InvalidInput("no blocks".into()));
        };
        let field = first.field.clone();
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(&field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            if b.field != field {
                return Err(Error::FieldMismatch(field.to_string(), b.field.to_string()));
            }
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &DenseMatrix) {
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }
}

/// Normalized rank distance `rank(a - b) / n` as an integer pair
/// `(rank(a - b), n)`.
pub fn rank_distance(a: &DenseMatrix, b: &DenseMatrix) -> Result<(usize, usize)> {
    Ok((a.sub(b)?.rank(), a.rows()))
}
