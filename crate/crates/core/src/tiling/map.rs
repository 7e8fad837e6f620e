use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf::{DenseMatrix, Field, Scalar, Subspace};
use crate::rational::{frac, Rational};

/// A unit-preserving linear map from `span{r_1..r_imax}` to `n x n`
/// matrices, with a partial multiplication table on basis pairs.
///
/// Basis indices are 0-based here; index 0 is the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteApproxMap {
    field: Field,
    n: usize,
    phi: Vec<DenseMatrix>,
    mult: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl FiniteApproxMap {
    /// `phi[0]` must be the identity.
    pub fn new(field: &Field, n: usize, phi: Vec<DenseMatrix>) -> Result<Self> {
        let Some(unit) = phi.first() else {
            return Err(Error::InvalidInput("map needs at least the unit basis element".into()));
        };
        for (j, m) in phi.iter().enumerate() {
            if m.field() != field {
                return Err(Error::FieldMismatch(m.field().to_string(), field.to_string()));
            }
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "phi of basis element {} is {}x{}, expected {n}x{n}",
                    j + 1,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if !unit.is_identity() {
            return Err(Error::InvalidInput("phi of the unit must be the identity".into()));
        }
        Ok(FiniteApproxMap {
            field: field.clone(),
            n,
            phi,
            mult: BTreeMap::new(),
        })
    }

    /// Records `r_a r_b` as a coordinate vector over the whole basis.
    pub fn set_product(&mut self, a: usize, b: usize, coords: Vec<Scalar>) -> Result<()> {
        let count = self.basis_count();
        if a >= count || b >= count {
            return Err(Error::InvalidInput(format!(
                "product ({}, {}) outside a basis of {count} elements",
                a + 1,
                b + 1
            )));
        }
        self.check_coords(&coords)?;
        self.mult.insert((a, b), coords);
        Ok(())
    }

    fn check_coords(&self, coords: &[Scalar]) -> Result<()> {
        if coords.len() != self.basis_count() {
            return Err(Error::DimensionMismatch(format!(
                "coordinate vector of length {}, basis has {} elements",
                coords.len(),
                self.basis_count()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| c.0 >= self.field.order()) {
            return Err(Error::InvalidInput(format!("coefficient {bad} outside {}", self.field)));
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn basis_count(&self) -> usize {
        self.phi.len()
    }
    pub fn phi_basis(&self) -> &[DenseMatrix] {
        &self.phi
    }
    pub fn product(&self, a: usize, b: usize) -> Option<&[Scalar]> {
        self.mult.get(&(a, b)).map(Vec::as_slice)
    }
    pub fn products(&self) -> impl Iterator<Item = ((usize, usize), &[Scalar])> {
        self.mult.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    /// `phi` extended linearly to a coordinate vector.
    pub fn phi(&self, coords: &[Scalar]) -> Result<DenseMatrix> {
        self.check_coords(coords)?;
        let mut out = DenseMatrix::zeros(&self.field, self.n, self.n);
        for (m, &c) in self.phi.iter().zip(coords) {
            if !c.is_zero() {
                out.add_scaled_assign(m, c)?;
            }
        }
        Ok(out)
    }

    fn check_i(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.basis_count() {
            return Err(Error::InvalidInput(format!(
                "i = {i} outside 1..={}",
                self.basis_count()
            )));
        }
        Ok(())
    }

    /// Vectors on which `phi` is multiplicative for all products of the
    /// first `i` basis elements. Basis pairs suffice by bilinearity.
    pub fn good_subspace(&self, i: usize) -> Result<Subspace> {
        self.check_i(i)?;
        let mut g = Subspace::full(&self.field, self.n);
        for s in 0..i {
            for t in 0..i {
                let coords = self.product(s, t).ok_or(Error::MissingProduct(s + 1, t + 1))?;
                let defect = self.phi(coords)?.sub(&self.phi[s].mul(&self.phi[t])?)?;
                g = g.intersection(&defect.kernel())?;
                if g.is_zero() {
                    return Ok(g);
                }
            }
        }
        Ok(g)
    }

    /// `dim G >= (1 - 1/i) n`
    pub fn is_good_map(&self, i: usize) -> Result<bool> {
        let g = self.good_subspace(i)?;
        Ok(good_threshold_met(g.dim(), self.n, i))
    }
}

pub(crate) fn good_threshold_met(dim: usize, n: usize, i: usize) -> bool {
    frac(dim, 1) >= (Rational::from_integer(1) - frac(1, i)) * frac(n, 1)
}

/// A finite-dimensional `F` containing the unit, given by a basis of
/// coordinate vectors together with the coordinates of each basis
/// element's inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSubspaceData {
    basis: Vec<Vec<Scalar>>,
    inverses: Vec<Vec<Scalar>>,
}

impl FSubspaceData {
    pub fn new(map: &FiniteApproxMap, basis: Vec<Vec<Scalar>>, inverses: Vec<Vec<Scalar>>) -> Result<Self> {
        if basis.len() != inverses.len() {
            return Err(Error::InvalidInput(format!(
                "{} basis elements but {} inverses",
                basis.len(),
                inverses.len()
            )));
        }
        for v in basis.iter().chain(&inverses) {
            map.check_coords(v)?;
        }
        let count = map.basis_count();
        let span = Subspace::span(map.field(), count, basis.iter().cloned())?;
        if span.dim() != basis.len() {
            return Err(Error::InvalidInput("F basis is linearly dependent".into()));
        }
        let mut unit = vec![Scalar::ZERO; count];
        unit[0] = Scalar::ONE;
        if !span.contains(&unit)? {
            return Err(Error::InvalidInput("F must contain the unit".into()));
        }
        Ok(FSubspaceData { basis, inverses })
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }
    pub fn inverses(&self) -> &[Vec<Scalar>] {
        &self.inverses
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    /// Keeps the first `count` basis elements, which must still contain 1.
    pub fn prefix(&self, map: &FiniteApproxMap, count: usize) -> Result<Self> {
        let count = count.min(self.dim());
        Self::new(
            map,
            self.basis[..count].to_vec(),
            self.inverses[..count].to_vec(),
        )
    }
}

/// `0, 1, -1, 2, -2, ...`: exponents of the Laurent monomial basis.
pub fn laurent_exponents(count: usize) -> Vec<i64> {
    (0..count as i64)
        .map(|j| if j % 2 == 1 { (j + 1) / 2 } else { -(j / 2) })
        .collect()
}

impl FiniteApproxMap {
    /// Truncated multiplication by monomials on `span{1, x, ..., x^(m-1)}`.
    ///
    /// Basis element `j` is `x^exponents[j]`; its image multiplies by that
    /// monomial and discards everything outside the degree window. Products
    /// are recorded whenever the exponent sum is itself in the list.
    pub fn monomial_truncation(field: &Field, m: usize, exponents: &[i64]) -> Result<Self> {
        if exponents.first() != Some(&0) {
            return Err(Error::InvalidInput("the first basis monomial must be 1".into()));
        }
        let mut seen = std::collections::HashMap::new();
        for (j, &e) in exponents.iter().enumerate() {
            if seen.insert(e, j).is_some() {
                return Err(Error::InvalidInput(format!("exponent {e} repeated")));
            }
        }
        let phi = exponents
            .iter()
            .map(|&e| {
                let mut t = DenseMatrix::zeros(field, m, m);
                for d in 0..m as i64 {
                    let target = d + e;
                    if (0..m as i64).contains(&target) {
                        t.set(target as usize, d as usize, Scalar::ONE);
                    }
                }
                t
            })
            .collect();
        let mut map = Self::new(field, m, phi)?;
        for (a, &ea) in exponents.iter().enumerate() {
            for (b, &eb) in exponents.iter().enumerate() {
                if let Some(&c) = seen.get(&(ea + eb)) {
                    let mut coords = vec![Scalar::ZERO; exponents.len()];
                    coords[c] = Scalar::ONE;
                    map.mult.insert((a, b), coords);
                }
            }
        }
        Ok(map)
    }

    /// Laurent monomial basis `1, x, x^-1, x^2, x^-2, ...` of length `count`.
    pub fn laurent_truncation(field: &Field, m: usize, count: usize) -> Result<Self> {
        Self::monomial_truncation(field, m, &laurent_exponents(count))
    }
}

/// `F = span{x^e : e in exponents}` inside a monomial truncation map whose
/// basis also contains the inverse monomials.
pub fn monomial_f(map: &FiniteApproxMap, all_exponents: &[i64], f_exponents: &[i64]) -> Result<FSubspaceData> {
    let index = |e: i64| {
        all_exponents
            .iter()
            .position(|&x| x == e)
            .ok_or_else(|| Error::InvalidInput(format!("monomial x^{e} is not a basis element")))
    };
    let unit = |j: usize| {
        let mut v = vec![Scalar::ZERO; all_exponents.len()];
        v[j] = Scalar::ONE;
        v
    };
    let mut basis = Vec::new();
    let mut inverses = Vec::new();
    for &e in f_exponents {
        basis.push(unit(index(e)?));
        inverses.push(unit(index(-e)?));
    }
    FSubspaceData::new(map, basis, inverses)
}
