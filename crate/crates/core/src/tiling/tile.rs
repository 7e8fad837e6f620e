use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::map::{good_threshold_met, FSubspaceData, FiniteApproxMap};
use crate::error::{Error, Result};
use crate::gf::{DenseMatrix, Field, FieldSpec, Scalar, Subspace};
use crate::rational::{frac, Rational};
use crate::rng;

/// The subspaces a tiling run needs, computed once.
struct Prepared {
    field: Field,
    n: usize,
    f_images: Vec<DenseMatrix>,
    good: Subspace,
    h: Subspace,
    good_and_h: Subspace,
}

impl Prepared {
    fn new(map: &FiniteApproxMap, f: &FSubspaceData, h: &Subspace, i: usize) -> Result<Self> {
        if h.ambient() != map.dim() {
            return Err(Error::AmbientMismatch(h.ambient(), map.dim()));
        }
        if h.field() != map.field() {
            return Err(Error::FieldMismatch(h.field().to_string(), map.field().to_string()));
        }
        let good = map.good_subspace(i)?;
        let good_and_h = good.intersection(h)?;
        let f_images = f.basis().iter().map(|c| map.phi(c)).collect::<Result<Vec<_>>>()?;
        Ok(Prepared {
            field: map.field().clone(),
            n: map.dim(),
            f_images,
            good,
            h: h.clone(),
            good_and_h,
        })
    }

    fn candidate_space(&self) -> Result<Subspace> {
        let mut a = Subspace::full(&self.field, self.n);
        for m in &self.f_images {
            a = a.intersection(&self.good_and_h.preimage(m)?)?;
        }
        Ok(a)
    }

    /// `phi(F) x` when `x` is a center, otherwise `None`.
    fn center_tile(&self, x: &[Scalar]) -> Result<Option<Subspace>> {
        if x.len() != self.n {
            return Err(Error::AmbientMismatch(x.len(), self.n));
        }
        let mut images = Vec::with_capacity(self.f_images.len());
        for m in &self.f_images {
            let y = m.apply(x)?;
            if !self.good.contains(&y)? || !self.h.contains(&y)? {
                return Ok(None);
            }
            images.push(y);
        }
        let tile = Subspace::span(&self.field, self.n, images)?;
        Ok((tile.dim() == self.f_images.len()).then_some(tile))
    }
}

/// `{x : phi(f) x in G ∩ H for every f in the F basis}`
pub fn candidate_space(map: &FiniteApproxMap, f: &FSubspaceData, h: &Subspace, i: usize) -> Result<Subspace> {
    Prepared::new(map, f, h, i)?.candidate_space()
}

/// The center conditions at a single vector; independence from other tiles
/// is a property of the whole set.
pub fn is_center(map: &FiniteApproxMap, f: &FSubspaceData, h: &Subspace, i: usize, x: &[Scalar]) -> Result<bool> {
    Ok(Prepared::new(map, f, h, i)?.center_tile(x)?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreconditionReport {
    /// F and the listed inverses lie in `span{r_1..r_i}`
    pub f_in_span: bool,
    pub dim_candidate: usize,
    /// `dim A >= (1 - delta/4) n`
    pub candidate_large: bool,
    pub max_kernel_dim: usize,
    /// `dim Ker phi(f) <= (delta/3) n` for every F basis element
    pub kernels_small: bool,
    /// `|F| <= q^(delta n / 3)`, i.e. `dim F <= delta n / 3`
    pub f_small: bool,
    /// `dim H >= (1 - 1/i) n`
    pub h_large: bool,
    pub dim_good: usize,
    pub good_map: bool,
}

impl PreconditionReport {
    pub fn all(&self) -> bool {
        self.f_in_span && self.candidate_large && self.kernels_small && self.f_small && self.h_large && self.good_map
    }
}

pub fn precondition_check(
    map: &FiniteApproxMap,
    f: &FSubspaceData,
    h: &Subspace,
    i: usize,
    delta: Rational,
) -> Result<PreconditionReport> {
    let p = Prepared::new(map, f, h, i)?;
    let n = frac(map.dim(), 1);
    let one = Rational::from_integer(1);
    let f_in_span = f
        .basis()
        .iter()
        .chain(f.inverses())
        .all(|c| c[i..].iter().all(|s| s.is_zero()));
    let a = p.candidate_space()?;
    let max_kernel_dim = p
        .f_images
        .iter()
        .map(|m| map.dim() - m.rank())
        .max()
        .unwrap_or(0);
    Ok(PreconditionReport {
        f_in_span,
        dim_candidate: a.dim(),
        candidate_large: frac(a.dim(), 1) >= (one - delta / 4) * n,
        max_kernel_dim,
        kernels_small: frac(max_kernel_dim, 1) <= delta / 3 * n,
        f_small: frac(f.dim(), 1) <= delta * n / 3,
        h_large: good_threshold_met(h.dim(), map.dim(), i),
        dim_good: p.good.dim(),
        good_map: good_threshold_met(p.good.dim(), map.dim(), i),
    })
}

/// Centers and tiles of a tiling, with the parameters it was built for.
/// Vectors are integer codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingCertificate {
    pub field: FieldSpec,
    pub n: usize,
    pub i: usize,
    #[serde(with = "crate::rational::serde_repr")]
    pub delta: Rational,
    pub dim_f: usize,
    pub h: Vec<Vec<u32>>,
    pub centers: Vec<Vec<u32>>,
    pub tiles: Vec<Vec<Vec<u32>>>,
    pub coverage: usize,
    /// the candidate pool was sampled rather than exhaustive
    pub partial: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GreedyOptions {
    /// candidates tried beyond the echelon basis of `A`
    pub pool_budget: usize,
    pub seed: u64,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions {
            pool_budget: 4096,
            seed: 0,
        }
    }
}

fn codes(v: &[Scalar]) -> Vec<u32> {
    v.iter().map(|s| s.0).collect()
}

fn exhaustive_pool(a: &Subspace) -> Vec<Vec<Scalar>> {
    let q = a.field().order();
    let d = a.dim();
    let mut coords = vec![Scalar::ZERO; d];
    let mut out = Vec::new();
    loop {
        // skip the zero vector
        if coords.iter().any(|c| !c.is_zero()) {
            out.push(a.combine(&coords));
        }
        let mut pos = 0;
        loop {
            if pos == d {
                return out;
            }
            coords[pos].0 += 1;
            if coords[pos].0 < q {
                break;
            }
            coords[pos] = Scalar::ZERO;
            pos += 1;
        }
    }
}

/// Greedy maximal set of centers with independent tiles.
///
/// Candidates are the echelon basis of `A`, then all of `A` when it has at
/// most `pool_budget` elements, otherwise `pool_budget` seeded samples.
/// Acceptance only gets harder as tiles are added, so one pass over an
/// exhaustive pool yields a maximal set. When the preconditions hold and
/// the pool was exhaustive, falling short of `(1 - delta) n` is an error.
pub fn greedy_tiling(
    map: &FiniteApproxMap,
    f: &FSubspaceData,
    h: &Subspace,
    i: usize,
    delta: Rational,
    opts: GreedyOptions,
) -> Result<TilingCertificate> {
    let p = Prepared::new(map, f, h, i)?;
    let a = p.candidate_space()?;
    let q = map.field().order() as u128;
    let exhaustive = (q.checked_pow(a.dim() as u32)).is_some_and(|size| size <= opts.pool_budget as u128);
    let mut pool: Vec<Vec<Scalar>> = a.basis().to_vec();
    if exhaustive {
        pool.extend(exhaustive_pool(&a));
    } else {
        let mut rng = rng::stream(opts.seed, 0);
        pool.extend((0..opts.pool_budget).map(|_| a.random_vector(&mut rng)));
    }

    // center tests are independent of the current tiles, so run them first
    let tiles: Vec<Option<Subspace>> = pool
        .par_iter()
        .map(|x| p.center_tile(x))
        .collect::<Result<Vec<_>>>()?;

    let mut covered = Subspace::zero(map.field(), map.dim());
    let mut centers = Vec::new();
    let mut tile_list = Vec::new();
    for (x, tile) in pool.iter().zip(tiles) {
        let Some(tile) = tile else { continue };
        let joined = covered.sum(&tile)?;
        if joined.dim() == covered.dim() + tile.dim() {
            covered = joined;
            centers.push(codes(x));
            tile_list.push(tile.to_int_rows());
        }
    }
    let coverage = covered.dim();
    let cert = TilingCertificate {
        field: map.field().spec().clone(),
        n: map.dim(),
        i,
        delta,
        dim_f: f.dim(),
        h: h.to_int_rows(),
        centers,
        tiles: tile_list,
        coverage,
        partial: !exhaustive,
    };
    if exhaustive && !coverage_met(coverage, map.dim(), delta) && precondition_check(map, f, h, i, delta)?.all() {
        return Err(Error::TheoremViolated(format!(
            "preconditions hold but greedy coverage {coverage} < (1 - {delta}) * {}",
            map.dim()
        )));
    }
    Ok(cert)
}

fn coverage_met(coverage: usize, n: usize, delta: Rational) -> bool {
    frac(coverage, 1) >= (Rational::from_integer(1) - delta) * frac(n, 1)
}

/// Reasons a certificate is rejected; empty means valid. Every tile is
/// recomputed from its center.
pub fn certificate_failures(
    cert: &TilingCertificate,
    map: &FiniteApproxMap,
    f: &FSubspaceData,
    h: &Subspace,
    i: usize,
    delta: Rational,
) -> Result<Vec<String>> {
    let mut fails = Vec::new();
    if cert.field != *map.field().spec() {
        fails.push("certificate field differs from the map's".into());
        return Ok(fails);
    }
    if cert.n != map.dim() {
        fails.push(format!("certificate n = {} but map has n = {}", cert.n, map.dim()));
        return Ok(fails);
    }
    if cert.i != i || cert.delta != delta || cert.dim_f != f.dim() {
        fails.push("certificate parameters differ from the requested (i, delta, dim F)".into());
    }
    match Subspace::from_int_rows(map.field(), map.dim(), &cert.h) {
        Ok(ch) if ch == *h => {}
        _ => fails.push("certificate H differs from the requested H".into()),
    }
    if cert.tiles.len() != cert.centers.len() {
        fails.push("tile list and center list differ in length".into());
    }
    let p = Prepared::new(map, f, h, i)?;
    let mut tiles = Vec::new();
    for (j, c) in cert.centers.iter().enumerate() {
        let x: Option<Vec<Scalar>> = (c.len() == map.dim() && c.iter().all(|&v| v < map.field().order()))
            .then(|| c.iter().map(|&v| Scalar(v)).collect());
        let Some(x) = x else {
            fails.push(format!("center {} is not a vector of the ambient space", j + 1));
            continue;
        };
        match p.center_tile(&x)? {
            None => fails.push(format!("center {} violates the center conditions", j + 1)),
            Some(tile) => {
                let claimed = cert
                    .tiles
                    .get(j)
                    .and_then(|rows| Subspace::from_int_rows(map.field(), map.dim(), rows).ok());
                if claimed.as_ref() != Some(&tile) {
                    fails.push(format!("tile {} does not match phi(F) applied to its center", j + 1));
                }
                tiles.push(tile);
            }
        }
    }
    let total: usize = tiles.iter().map(Subspace::dim).sum();
    let sum = crate::gf::sum_all(map.field(), map.dim(), &tiles)?;
    if sum.dim() != total {
        fails.push("tiles are not independent".into());
    }
    if !coverage_met(sum.dim(), map.dim(), delta) {
        fails.push(format!(
            "coverage {} below (1 - {delta}) * {}",
            sum.dim(),
            map.dim()
        ));
    }
    if cert.coverage != sum.dim() {
        fails.push(format!("stated coverage {} but tiles span {}", cert.coverage, sum.dim()));
    }
    Ok(fails)
}

pub fn verify_certificate(
    cert: &TilingCertificate,
    map: &FiniteApproxMap,
    f: &FSubspaceData,
    h: &Subspace,
    i: usize,
    delta: Rational,
) -> Result<bool> {
    Ok(certificate_failures(cert, map, f, h, i, delta)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::tiling::map::{laurent_exponents, monomial_f};

    fn gf2() -> Field {
        Field::gf(2).unwrap()
    }

    fn fixture(m: usize) -> (FiniteApproxMap, FSubspaceData, Subspace) {
        let f = gf2();
        let exps = laurent_exponents(5);
        let map = FiniteApproxMap::monomial_truncation(&f, m, &exps).unwrap();
        let fd = monomial_f(&map, &exps, &[0, 1]).unwrap();
        (map, fd, Subspace::full(&f, m))
    }

    fn unit(m: usize, j: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::ZERO; m];
        v[j] = Scalar::ONE;
        v
    }

    #[test]
    fn candidate_space_laurent() {
        let (map, fd, h) = fixture(12);
        let a = candidate_space(&map, &fd, &h, 3).unwrap();
        assert_eq!(a, Subspace::coordinate(&gf2(), 12, 1..10));
        let zero = Subspace::zero(&gf2(), 12);
        assert!(candidate_space(&map, &fd, &zero, 3).unwrap().is_zero());
    }

    #[test]
    fn centers() {
        let f = gf2();
        let map = FiniteApproxMap::monomial_truncation(&f, 4, &[0, 1, 2, 3, 4]).unwrap();
        let fd = monomial_f_poly(&map);
        let h = Subspace::full(&f, 4);
        assert!(is_center(&map, &fd, &h, 3, &unit(4, 0)).unwrap());
        assert!(!is_center(&map, &fd, &h, 3, &unit(4, 3)).unwrap());
        assert!(!is_center(&map, &fd, &h, 3, &[Scalar::ZERO; 4]).unwrap());
    }

    fn monomial_f_poly(map: &FiniteApproxMap) -> FSubspaceData {
        // F = span{1, x}; inverse coordinates are not needed for center tests
        let e = |j: usize| unit(5, j);
        FSubspaceData::new(map, vec![e(0), e(1)], vec![e(0), e(0)]).unwrap()
    }

    #[test]
    fn precondition_arithmetic() {
        let (map, fd, h) = fixture(64);
        let rep = precondition_check(&map, &fd, &h, 3, ratio(1, 4)).unwrap();
        assert!(rep.all(), "{rep:?}");
        assert_eq!(rep.dim_candidate, 61);
        let (map, fd, h) = fixture(16);
        let rep = precondition_check(&map, &fd, &h, 3, ratio(1, 4)).unwrap();
        assert!(!rep.candidate_large);
    }

    #[test]
    fn greedy_and_verify() {
        let (map, fd, h) = fixture(64);
        let delta = ratio(1, 4);
        let cert = greedy_tiling(&map, &fd, &h, 3, delta, GreedyOptions::default()).unwrap();
        assert_eq!(cert.coverage, 62);
        assert_eq!(cert.centers.len(), 31);
        assert!(verify_certificate(&cert, &map, &fd, &h, 3, delta).unwrap());

        let mut dup = cert.clone();
        dup.centers.push(dup.centers[0].clone());
        dup.tiles.push(dup.tiles[0].clone());
        assert!(!verify_certificate(&dup, &map, &fd, &h, 3, delta).unwrap());

        let mut short = cert.clone();
        short.centers.truncate(10);
        short.tiles.truncate(10);
        short.coverage = 20;
        assert!(!verify_certificate(&short, &map, &fd, &h, 3, delta).unwrap());
    }

    #[test]
    fn lines_when_f_is_unit() {
        let (map, _, h) = fixture(10);
        let exps = laurent_exponents(5);
        let fd = monomial_f(&map, &exps, &[0]).unwrap();
        let cert = greedy_tiling(&map, &fd, &h, 3, ratio(1, 4), GreedyOptions::default()).unwrap();
        let a = candidate_space(&map, &fd, &h, 3).unwrap();
        assert_eq!(cert.coverage, a.dim());
        assert!(!cert.partial);
    }
}
