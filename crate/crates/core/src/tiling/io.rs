use serde::{Deserialize, Serialize};

use super::map::{laurent_exponents, monomial_f, FSubspaceData, FiniteApproxMap};
use crate::error::{Error, Result};
use crate::gf::{DenseMatrix, Field, FieldSpec, Scalar, Subspace};
use crate::rational::Rational;

/// One entry of the multiplication table; `a` and `b` are 1-based labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductEntry {
    pub a: usize,
    pub b: usize,
    pub coords: Vec<u32>,
}

/// Tiling input file. `phi` lists row-major matrices in basis order, the
/// first being the identity. `h` defaults to the whole space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TilingProblemFile {
    pub field: FieldSpec,
    pub n: usize,
    pub phi: Vec<Vec<u32>>,
    pub products: Vec<ProductEntry>,
    pub f: Vec<Vec<u32>>,
    pub f_inv: Vec<Vec<u32>>,
    #[serde(default)]
    pub h: Option<Vec<Vec<u32>>>,
    pub i: usize,
    #[serde(with = "crate::rational::serde_repr")]
    pub delta: Rational,
}

/// A map, an `F`, a subspace `H` and the parameters `(i, delta)`.
#[derive(Clone, Debug)]
pub struct TilingProblem {
    pub map: FiniteApproxMap,
    pub f: FSubspaceData,
    pub h: Subspace,
    pub i: usize,
    pub delta: Rational,
}

fn scalars(field: &Field, v: &[u32]) -> Result<Vec<Scalar>> {
    v.iter().map(|&c| field.scalar(c)).collect()
}

impl TilingProblem {
    pub fn from_file(file: &TilingProblemFile) -> Result<Self> {
        let spec = FieldSpec::new(file.field.p, file.field.deg, file.field.modulus.clone())?;
        let field = Field::new(spec);
        let n = file.n;
        let phi = file
            .phi
            .iter()
            .map(|m| DenseMatrix::new(&field, n, n, scalars(&field, m)?))
            .collect::<Result<Vec<_>>>()?;
        let mut map = FiniteApproxMap::new(&field, n, phi)?;
        for p in &file.products {
            if p.a == 0 || p.b == 0 {
                return Err(Error::InvalidInput("basis labels are 1-based".into()));
            }
            map.set_product(p.a - 1, p.b - 1, scalars(&field, &p.coords)?)?;
        }
        let to_coords = |rows: &[Vec<u32>]| rows.iter().map(|r| scalars(&field, r)).collect::<Result<Vec<_>>>();
        let f = FSubspaceData::new(&map, to_coords(&file.f)?, to_coords(&file.f_inv)?)?;
        let h = match &file.h {
            Some(rows) => Subspace::from_int_rows(&field, n, rows)?,
            None => Subspace::full(&field, n),
        };
        if file.delta <= Rational::from_integer(0) || file.delta >= Rational::from_integer(1) {
            return Err(Error::InvalidInput("delta must lie in (0, 1)".into()));
        }
        Ok(TilingProblem {
            map,
            f,
            h,
            i: file.i,
            delta: file.delta,
        })
    }

    pub fn to_file(&self) -> TilingProblemFile {
        let ints = |v: &[Scalar]| v.iter().map(|s| s.0).collect::<Vec<_>>();
        TilingProblemFile {
            field: self.map.field().spec().clone(),
            n: self.map.dim(),
            phi: self.map.phi_basis().iter().map(|m| ints(m.data())).collect(),
            products: self
                .map
                .products()
                .map(|((a, b), c)| ProductEntry {
                    a: a + 1,
                    b: b + 1,
                    coords: ints(c),
                })
                .collect(),
            f: self.f.basis().iter().map(|v| ints(v)).collect(),
            f_inv: self.f.inverses().iter().map(|v| ints(v)).collect(),
            h: (!self.h.is_full()).then(|| self.h.to_int_rows()),
            i: self.i,
            delta: self.delta,
        }
    }

    /// Truncation of Laurent polynomials over `GF(2)` to degrees `0..m`,
    /// basis `1, x, x^-1, x^2, x^-2`, `F = span{1, x}`, `H` everything,
    /// `i = 3`.
    pub fn laurent_fixture(m: usize, delta: Rational) -> Result<Self> {
        let field = Field::gf(2)?;
        let exps = laurent_exponents(5);
        let map = FiniteApproxMap::monomial_truncation(&field, m, &exps)?;
        let f = monomial_f(&map, &exps, &[0, 1])?;
        Ok(TilingProblem {
            h: Subspace::full(&field, m),
            map,
            f,
            i: 3,
            delta,
        })
    }
}
