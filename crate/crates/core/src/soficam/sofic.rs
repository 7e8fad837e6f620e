use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{DenseMatrix, Field, FieldSpec, Scalar, Subspace};
use crate::rational::{frac, Rational};
use crate::tiling::{FiniteApproxMap, ProductEntry};

/// An element of the span with its claimed normalized-rank lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBound {
    pub element: Vec<Scalar>,
    pub bound: Rational,
}

/// A sequence of maps on a common basis with defect bounds `s_k` and rank
/// lower bounds on a finite element list. Products are checked over the
/// first `i` basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoficData {
    pub i: usize,
    pub maps: Vec<FiniteApproxMap>,
    pub s: Vec<Rational>,
    pub j: Vec<RankBound>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoficReport {
    pub k: usize,
    pub n: usize,
    pub unit_ok: bool,
    /// dimension of the sum of images of all basis-pair defects, which
    /// bounds the defect rank of every pair in the span
    pub defect_rank: usize,
    pub max_pair_defect: usize,
    #[serde(with = "crate::rational::serde_repr")]
    pub defect: Rational,
    #[serde(with = "crate::rational::serde_repr")]
    pub s_k: Rational,
    pub multiplicative_ok: bool,
    #[serde(with = "crate::rational::serde_repr")]
    pub min_rank_margin: Rational,
    pub rank_bounds_ok: bool,
}

impl SoficReport {
    pub fn all(&self) -> bool {
        self.unit_ok && self.multiplicative_ok && self.rank_bounds_ok
    }
}

/// Checks the `k`-th map (1-based) against `s_k` and the rank bounds.
pub fn sofic_check(data: &SoficData, k: usize) -> Result<SoficReport> {
    let map = k
        .checked_sub(1)
        .and_then(|idx| data.maps.get(idx))
        .ok_or_else(|| Error::InvalidInput(format!("no map with index {k}")))?;
    let s_k = *data
        .s
        .get(k - 1)
        .ok_or_else(|| Error::InvalidInput(format!("no defect bound s_{k}")))?;
    let n = map.dim();
    if data.i == 0 || data.i > map.basis_count() {
        return Err(Error::InvalidInput(format!("i = {} outside the basis", data.i)));
    }
    let phi = map.phi_basis();
    let unit_ok = phi[0].is_identity();

    let pairs: Vec<(usize, usize)> = (0..data.i).flat_map(|s| (0..data.i).map(move |t| (s, t))).collect();
    let defects = pairs
        .par_iter()
        .map(|&(s, t)| {
            let coords = map.product(s, t).ok_or(Error::MissingProduct(s + 1, t + 1))?;
            map.phi(coords)?.sub(&phi[s].mul(&phi[t])?)
        })
        .collect::<Result<Vec<DenseMatrix>>>()?;
    let max_pair_defect = defects.iter().map(DenseMatrix::rank).max().unwrap_or(0);
    let images: Vec<Subspace> = defects.iter().map(DenseMatrix::column_space).collect();
    let defect_rank = crate::gf::sum_all(map.field(), n, &images)?.dim();
    let defect = frac(defect_rank, n);

    let mut min_margin: Option<Rational> = None;
    for rb in &data.j {
        let r = frac(map.phi(&rb.element)?.rank(), n);
        let margin = r - rb.bound;
        min_margin = Some(min_margin.map_or(margin, |m| m.min(margin)));
    }
    let min_rank_margin = min_margin.unwrap_or(Rational::from_integer(0));
    Ok(SoficReport {
        k,
        n,
        unit_ok,
        defect_rank,
        max_pair_defect,
        defect,
        s_k,
        multiplicative_ok: defect < s_k,
        min_rank_margin,
        rank_bounds_ok: min_rank_margin >= Rational::from_integer(0),
    })
}

/// Truncated multiplication on `deg < m` for each `m` in `ms`, with basis
/// `1, x, ..., x^(2d)`, products over `1..x^d`, `s_m = 2d/m`.
pub fn truncation_sofic_data(field: &Field, ms: &[usize], d: usize, j: Vec<RankBound>) -> Result<SoficData> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let exps: Vec<i64> = (0..=2 * d as i64).collect();
    let maps = ms
        .iter()
        .map(|&m| FiniteApproxMap::monomial_truncation(field, m, &exps))
        .collect::<Result<Vec<_>>>()?;
    let s = ms.iter().map(|&m| frac(2 * d, m)).collect();
    Ok(SoficData { i: d + 1, maps, s, j })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankBoundFile {
    pub element: Vec<u32>,
    #[serde(with = "crate::rational::serde_repr")]
    pub bound: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapFile {
    pub n: usize,
    pub phi: Vec<Vec<u32>>,
}

/// On-disk sofic data. The multiplication table is shared by all maps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SoficDataFile {
    pub field: FieldSpec,
    pub basis_size: usize,
    pub i: usize,
    pub products: Vec<ProductEntry>,
    pub maps: Vec<MapFile>,
    #[serde(with = "rational_list")]
    pub s: Vec<Rational>,
    pub j: Vec<RankBoundFile>,
}

mod rational_list {
    use crate::rational::{Rational, RationalRepr};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|&r| RationalRepr::from(r)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<RationalRepr>::deserialize(d)?
            .into_iter()
            .map(|r| Rational::try_from(r).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl SoficData {
    pub fn from_file(file: &SoficDataFile) -> Result<Self> {
        let spec = FieldSpec::new(file.field.p, file.field.deg, file.field.modulus.clone())?;
        let field = Field::new(spec);
        let scalars = |v: &[u32]| v.iter().map(|&c| field.scalar(c)).collect::<Result<Vec<_>>>();
        let mut maps = Vec::with_capacity(file.maps.len());
        for mf in &file.maps {
            if mf.phi.len() != file.basis_size {
                return Err(Error::InvalidInput(format!(
                    "map lists {} matrices for a basis of {}",
                    mf.phi.len(),
                    file.basis_size
                )));
            }
            let phi = mf
                .phi
                .iter()
                .map(|m| DenseMatrix::new(&field, mf.n, mf.n, scalars(m)?))
                .collect::<Result<Vec<_>>>()?;
            let mut map = FiniteApproxMap::new(&field, mf.n, phi)?;
            for p in &file.products {
                if p.a == 0 || p.b == 0 {
                    return Err(Error::InvalidInput("basis labels are 1-based".into()));
                }
                map.set_product(p.a - 1, p.b - 1, scalars(&p.coords)?)?;
            }
            maps.push(map);
        }
        if file.s.len() != maps.len() {
            return Err(Error::InvalidInput(format!(
                "{} maps but {} defect bounds",
                maps.len(),
                file.s.len()
            )));
        }
        let j = file
            .j
            .iter()
            .map(|rb| {
                let element = scalars(&rb.element)?;
                if element.len() != file.basis_size {
                    return Err(Error::DimensionMismatch("rank bound element has the wrong length".into()));
                }
                Ok(RankBound {
                    element,
                    bound: rb.bound,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SoficData {
            i: file.i,
            maps,
            s: file.s.clone(),
            j,
        })
    }

    pub fn to_file(&self) -> Result<SoficDataFile> {
        let first = self
            .maps
            .first()
            .ok_or_else(|| Error::InvalidInput("no maps".into()))?;
        let ints = |v: &[Scalar]| v.iter().map(|s| s.0).collect::<Vec<_>>();
        Ok(SoficDataFile {
            field: first.field().spec().clone(),
            basis_size: first.basis_count(),
            i: self.i,
            products: first
                .products()
                .map(|((a, b), c)| ProductEntry {
                    a: a + 1,
                    b: b + 1,
                    coords: ints(c),
                })
                .collect(),
            maps: self
                .maps
                .iter()
                .map(|m| MapFile {
                    n: m.dim(),
                    phi: m.phi_basis().iter().map(|p| ints(p.data())).collect(),
                })
                .collect(),
            s: self.s.clone(),
            j: self
                .j
                .iter()
                .map(|rb| RankBoundFile {
                    element: ints(&rb.element),
                    bound: rb.bound,
                })
                .collect(),
        })
    }
}
