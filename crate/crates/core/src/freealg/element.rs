use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use super::word::{Letter, Word};
use crate::error::{Error, Result};
use crate::gf::{Field, Scalar};

/// An element of the group algebra `K F_r`: a finite sum of reduced words
/// with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    field: Field,
    r: u32,
    terms: BTreeMap<Word, Scalar>,
}

impl AlgebraElement {
    pub fn zero(field: &Field, r: u32) -> Self {
        AlgebraElement {
            field: field.clone(),
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Field, r: u32) -> Self {
        Self::monomial(field, r, Scalar::ONE, Word::identity())
    }

    /// `c * w`; the caller guarantees `w` only uses generators `1..=r`.
    pub fn monomial(field: &Field, r: u32, c: Scalar, w: Word) -> Self {
        let mut e = Self::zero(field, r);
        if !c.is_zero() {
            e.terms.insert(w, c);
        }
        e
    }

    pub fn from_terms(field: &Field, r: u32, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Result<Self> {
        let mut e = Self::zero(field, r);
        for (w, c) in terms {
            if w.max_generator() > r {
                return Err(Error::InvalidInput(format!(
                    "word {w} uses a generator beyond r = {r}"
                )));
            }
            if c.0 >= field.order() {
                return Err(Error::InvalidInput(format!("coefficient {c} outside {field}")));
            }
            e.add_term(w, c);
        }
        Ok(e)
    }

    fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let s = f.add(*existing, c);
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }
    #[inline]
    pub fn rank_of_group(&self) -> u32 {
        self.r
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).copied().unwrap_or(Scalar::ZERO)
    }

    /// Longest word carrying a nonzero coefficient, 0 for scalars.
    pub fn length(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.r != other.r {
            return Err(Error::InvalidInput(format!(
                "free group rank mismatch: {} vs {}",
                self.r, other.r
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        AlgebraElement {
            terms: self.terms.iter().map(|(w, &c)| (w.clone(), f.neg(c))).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Scalar) -> Self {
        let mut out = Self::zero(&self.field, self.r);
        for (w, &a) in &self.terms {
            out.add_term(w.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        let mut out = Self::zero(f, self.r);
        for (u, &a) in &self.terms {
            for (v, &b) in &other.terms {
                out.add_term(u.multiply(v), f.mul(a, b));
            }
        }
        Ok(out)
    }

    /// Random element with up to `max_terms` terms of word length up to
    /// `max_len`.
    pub fn random<R: Rng + ?Sized>(field: &Field, r: u32, max_terms: usize, max_len: usize, rng: &mut R) -> Self {
        let mut e = Self::zero(field, r);
        let n_terms = rng.random_range(0..=max_terms);
        for _ in 0..n_terms {
            let len = rng.random_range(0..=max_len);
            let w = Word::from_letters((0..len).map(|_| {
                Letter::new(rng.random_range(1..=r.max(1)), rng.random_bool(0.5))
            }));
            let c = Scalar(rng.random_range(0..field.order()));
            if r > 0 || w.is_identity() {
                e.add_term(w, c);
            }
        }
        e
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (w.is_identity(), c.0) {
                (true, _) => write!(f, "{c}")?,
                (false, 1) => write!(f, "{w}")?,
                (false, _) => write!(f, "{c}*{w}")?,
            }
        }
        Ok(())
    }
}

/// An `n x n` matrix over `K F_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMatrix {
    field: Field,
    r: u32,
    n: usize,
    entries: Vec<AlgebraElement>,
}

impl AlgebraMatrix {
    pub fn new(field: &Field, r: u32, n: usize, entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} algebra matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field || e.r != r) {
            return Err(Error::InvalidInput(format!(
                "entry {bad} is not over {field} with r = {r}"
            )));
        }
        Ok(AlgebraMatrix {
            field: field.clone(),
            r,
            n,
            entries,
        })
    }

    pub fn identity(field: &Field, r: u32, n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    AlgebraElement::one(field, r)
                } else {
                    AlgebraElement::zero(field, r)
                }
            })
            .collect();
        AlgebraMatrix {
            field: field.clone(),
            r,
            n,
            entries,
        }
    }

    /// 1x1 matrix `[a]`.
    pub fn single(a: AlgebraElement) -> Self {
        AlgebraMatrix {
            field: a.field.clone(),
            r: a.r,
            n: 1,
            entries: vec![a],
        }
    }

    /// Square array of element strings, as found in matrix files.
    pub fn parse_rows(field: &Field, r: u32, rows: &[Vec<String>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch("algebra matrix must be square".into()));
            }
            for s in row {
                entries.push(super::parse::parse_element(s, field, r)?);
            }
        }
        Self::new(field, r, n, entries)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn size(&self) -> usize {
        self.n
    }
    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.n + j]
    }
    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    /// Maximum word length over all entries; 0 for scalar matrices.
    pub fn length(&self) -> usize {
        self.entries.iter().map(AlgebraElement::length).max().unwrap_or(0)
    }

    /// `diag(self, other)`
    pub fn block_diag(&self, other: &AlgebraMatrix) -> Result<Self> {
        if self.field != other.field || self.r != other.r {
            return Err(Error::InvalidInput("block_diag over different algebras".into()));
        }
        let n = self.n + other.n;
        let mut entries = vec![AlgebraElement::zero(&self.field, self.r); n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                entries[i * n + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                entries[(self.n + i) * n + self.n + j] = other.get(i, j).clone();
            }
        }
        Self::new(&self.field, self.r, n, entries)
    }
}
