use super::poly::Poly;
use crate::error::{Error, Result};
use crate::gf::{projection_onto, DenseMatrix, Field, Subspace};
use crate::rational::{frac, Rational};

/// Polynomials over `field` acting on `V_m = span{1, x, ..., x^(m-1)}` for
/// `m` up to `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyInstance {
    pub field: Field,
    pub cap: usize,
}

/// `V_1 = deg < m - d` inside `V = deg < m`, both as subspaces of `K^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerPair {
    pub m: usize,
    pub d: usize,
    pub v1: Subspace,
    pub v: Subspace,
}

/// Smallest `m` with `E V_1 ⊂ V` and `dim V_1 >= (1 - delta) dim V`, where
/// `d` is the largest degree in `E`: `m = max(d + 1, ceil(d / delta))`.
pub fn folner_pair(inst: &PolyInstance, elements: &[Poly], delta: Rational) -> Result<FolnerPair> {
    if delta <= Rational::from_integer(0) || delta > Rational::from_integer(1) {
        return Err(Error::Infeasible(format!("delta = {delta} outside (0, 1]")));
    }
    let d = elements.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let m = (d + 1).max((frac(d, 1) / delta).ceil().to_integer() as usize);
    if m > inst.cap {
        return Err(Error::Infeasible(format!(
            "degree {d} at delta = {delta} needs m = {m}, above the cap {}",
            inst.cap
        )));
    }
    Ok(FolnerPair {
        m,
        d,
        v1: Subspace::coordinate(&inst.field, m, 0..m - d),
        v: Subspace::full(&inst.field, m),
    })
}

/// Matrix on `V_m` of `P ∘ M_p`: multiply by `p`, then project onto `V_m`
/// along `w`, a complement of `V_m` in `deg < m + deg p`. `None` takes the
/// span of the high monomials, which truncates.
pub fn truncation_map(inst: &PolyInstance, m: usize, w: Option<&Subspace>, p: &Poly) -> Result<DenseMatrix> {
    let field = &inst.field;
    let deg = p.degree().unwrap_or(0);
    if m == 0 || m > inst.cap {
        return Err(Error::InvalidInput(format!("m = {m} outside 1..={}", inst.cap)));
    }
    if deg >= m {
        return Err(Error::InvalidInput(format!(
            "degree {deg} is not below m = {m}"
        )));
    }
    let big = m + deg;
    let mut mult = DenseMatrix::zeros(field, big, m);
    for col in 0..m {
        for (k, &c) in p.coeffs().iter().enumerate() {
            mult.set(col + k, col, c);
        }
    }
    let projected = match w {
        None => mult,
        Some(w) => {
            let v = Subspace::coordinate(field, big, 0..m);
            projection_onto(&v, w)?.mul(&mult)?
        }
    };
    let mut out = DenseMatrix::zeros(field, m, m);
    for i in 0..m {
        for j in 0..m {
            out.set(i, j, projected.get(i, j));
        }
    }
    Ok(out)
}
