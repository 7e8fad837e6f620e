use crate::error::{Error, Result};
use crate::gf::{DenseMatrix, Scalar};

/// Nearest invertible matrix in rank distance.
///
/// `M'` agrees with `M` on a coordinate complement `C` of `ker M` and sends
/// the echelon kernel basis onto a coordinate complement of `Im M`, so
/// `M - M'` vanishes on `C` and `rank(M - M') = n - rank(M)`.
pub fn repair_to_invertible(m: &DenseMatrix) -> Result<DenseMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "repair needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let field = m.field();
    let n = m.rows();
    let kernel = m.kernel();
    if kernel.is_zero() {
        return Ok(m.clone());
    }
    let kernel_complement = kernel.complement();
    let image_complement = m.column_space().complement();

    // source basis [C | K] and its target [M C | U]
    let mut source: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut target: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for c in kernel_complement.basis() {
        target.push(m.apply(c)?);
        source.push(c.clone());
    }
    for (k, u) in kernel.basis().iter().zip(image_complement.basis()) {
        source.push(k.clone());
        target.push(u.clone());
    }
    debug_assert_eq!(source.len(), n);
    let s = DenseMatrix::from_columns(field, n, &source)?;
    let t = DenseMatrix::from_columns(field, n, &target)?;
    t.mul(&s.inverse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{rank_distance, Field};

    fn gf2() -> Field {
        Field::gf(2).unwrap()
    }

    #[test]
    fn examples() {
        let f = gf2();
        let id = DenseMatrix::identity(&f, 3);
        assert_eq!(repair_to_invertible(&id).unwrap(), id);

        let z = DenseMatrix::zeros(&f, 4, 4);
        let r = repair_to_invertible(&z).unwrap();
        assert!(r.is_invertible());
        assert_eq!(rank_distance(&z, &r).unwrap().0, 4);

        let d = DenseMatrix::from_rows(&f, &[vec![1, 0], vec![0, 0]]).unwrap();
        let r = repair_to_invertible(&d).unwrap();
        assert!(r.is_identity());
    }

    #[test]
    fn rejects_non_square() {
        assert!(repair_to_invertible(&DenseMatrix::zeros(&gf2(), 2, 3)).is_err());
    }

    #[test]
    fn distance_equals_defect_over_gf3() {
        let f = Field::gf(3).unwrap();
        let m = DenseMatrix::from_rows(&f, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 0]]).unwrap();
        let r = repair_to_invertible(&m).unwrap();
        assert!(r.is_invertible());
        assert_eq!(rank_distance(&m, &r).unwrap().0, 3 - m.rank());
    }
}
