use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{AlgebraElement, AlgebraMatrix, Word};
use crate::gf::{DenseMatrix, Field, FieldSpec, Scalar};

/// A representation of the free group `F_r` on `K^n`, given by the images
/// of the generators. Inverses are computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    field: Field,
    n: usize,
    generators: Vec<DenseMatrix>,
    inverses: Vec<DenseMatrix>,
}

/// On-disk form: generators as row-major integer lists.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationFile {
    pub field: FieldSpec,
    pub r: u32,
    pub n: usize,
    pub generators: Vec<Vec<u32>>,
}

impl Representation {
    /// Fails if a generator is not square of the common size or singular.
    pub fn new(field: &Field, n: usize, generators: Vec<DenseMatrix>) -> Result<Self> {
        let mut inverses = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.field() != field {
                return Err(Error::FieldMismatch(g.field().to_string(), field.to_string()));
            }
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator {} is {}x{}, expected {n}x{n}",
                    i + 1,
                    g.rows(),
                    g.cols()
                )));
            }
            inverses.push(g.inverse().map_err(|_| {
                Error::InvalidInput(format!("generator {} is not invertible", i + 1))
            })?);
        }
        Ok(Representation {
            field: field.clone(),
            n,
            generators,
            inverses,
        })
    }

    pub fn from_file(file: &RepresentationFile) -> Result<Self> {
        let spec = FieldSpec::new(file.field.p, file.field.deg, file.field.modulus.clone())?;
        let field = Field::new(spec);
        if file.generators.len() != file.r as usize {
            return Err(Error::InvalidInput(format!(
                "r = {} but {} generators given",
                file.r,
                file.generators.len()
            )));
        }
        let gens = file
            .generators
            .iter()
            .map(|g| DenseMatrix::new(&field, file.n, file.n, g.iter().map(|&c| Scalar(c)).collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&field, file.n, gens)
    }

    pub fn to_file(&self) -> RepresentationFile {
        RepresentationFile {
            field: self.field.spec().clone(),
            r: self.r(),
            n: self.n,
            generators: self
                .generators
                .iter()
                .map(|g| g.data().iter().map(|s| s.0).collect())
                .collect(),
        }
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }
    /// Number of free generators.
    #[inline]
    pub fn r(&self) -> u32 {
        self.generators.len() as u32
    }
    /// Dimension of the representation space.
    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn generators(&self) -> &[DenseMatrix] {
        &self.generators
    }
    pub fn inverses(&self) -> &[DenseMatrix] {
        &self.inverses
    }

    /// Image of a word: the product of generator images, left to right.
    pub fn apply_word(&self, w: &Word) -> Result<DenseMatrix> {
        if w.max_generator() > self.r() {
            return Err(Error::InvalidInput(format!(
                "word {w} uses generators beyond r = {}",
                self.r()
            )));
        }
        let mut acc = DenseMatrix::identity(&self.field, self.n);
        for l in w.letters() {
            let g = if l.inverse {
                &self.inverses[l.gen as usize - 1]
            } else {
                &self.generators[l.gen as usize - 1]
            };
            acc = acc.mul(g)?;
        }
        Ok(acc)
    }

    fn check_algebra(&self, field: &Field, r: u32) -> Result<()> {
        if field != &self.field {
            return Err(Error::FieldMismatch(field.to_string(), self.field.to_string()));
        }
        if r != self.r() {
            return Err(Error::InvalidInput(format!(
                "element over F_{r} applied to a representation of F_{}",
                self.r()
            )));
        }
        Ok(())
    }

    fn apply_cached(&self, a: &AlgebraElement, cache: &mut HashMap<Word, DenseMatrix>) -> Result<DenseMatrix> {
        let mut out = DenseMatrix::zeros(&self.field, self.n, self.n);
        for (w, &c) in a.terms() {
            if !cache.contains_key(w) {
                let img = self.apply_word(w)?;
                cache.insert(w.clone(), img);
            }
            out.add_scaled_assign(&cache[w], c)?;
        }
        Ok(out)
    }

    /// Image of a group-algebra element.
    pub fn apply_element(&self, a: &AlgebraElement) -> Result<DenseMatrix> {
        self.check_algebra(a.field(), a.rank_of_group())?;
        self.apply_cached(a, &mut HashMap::new())
    }

    /// Image of an `s x s` algebra matrix: the `(s n) x (s n)` block matrix
    /// whose `(i, j)` block is the image of entry `(i, j)`.
    pub fn apply_matrix(&self, a: &AlgebraMatrix) -> Result<DenseMatrix> {
        self.check_algebra(a.field(), a.r())?;
        let s = a.size();
        let n = self.n;
        let mut cache = HashMap::new();
        let mut out = DenseMatrix::zeros(&self.field, s * n, s * n);
        for i in 0..s {
            for j in 0..s {
                let entry = a.get(i, j);
                if entry.is_zero() {
                    continue;
                }
                let block = self.apply_cached(entry, &mut cache)?;
                out.set_block(i * n, j * n, &block);
            }
        }
        Ok(out)
    }

    /// Direct sum acting block-diagonally.
    pub fn direct_sum(parts: &[Representation]) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidInput("empty direct sum".into()));
        };
        let r = first.r();
        if parts.iter().any(|p| p.r() != r) {
            return Err(Error::InvalidInput("direct sum of representations with different r".into()));
        }
        let n = parts.iter().map(|p| p.n).sum();
        let gens = (0..r as usize)
            .map(|i| {
                let blocks: Vec<&DenseMatrix> = parts.iter().map(|p| &p.generators[i]).collect();
                DenseMatrix::block_diag(&blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&first.field, n, gens)
    }
}
