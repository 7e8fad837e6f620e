use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{sum_all, Scalar, Subspace};
use crate::rational::{frac, Rational};
use crate::repseq::Representation;
use crate::tiling::{FSubspaceData, FiniteApproxMap, TilingCertificate};

/// Tiles `V_j` claimed to be small, almost invariant, independent after
/// one step of growth, and covering most of the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperfiniteWitness {
    pub epsilon: Rational,
    pub k: usize,
    pub tiles: Vec<Subspace>,
}

/// On-disk witness; tile bases are integer rows.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessFile {
    #[serde(with = "crate::rational::serde_repr")]
    pub epsilon: Rational,
    #[serde(rename = "K")]
    pub k: usize,
    pub tiles: Vec<Vec<Vec<u32>>>,
}

impl HyperfiniteWitness {
    pub fn to_file(&self) -> WitnessFile {
        WitnessFile {
            epsilon: self.epsilon,
            k: self.k,
            tiles: self.tiles.iter().map(Subspace::to_int_rows).collect(),
        }
    }

    pub fn from_file(file: &WitnessFile, rep: &Representation) -> Result<Self> {
        let tiles = file
            .tiles
            .iter()
            .map(|rows| Subspace::from_int_rows(rep.field(), rep.dim(), rows))
            .collect::<Result<Vec<_>>>()?;
        Ok(HyperfiniteWitness {
            epsilon: file.epsilon,
            k: file.k,
            tiles,
        })
    }

    pub fn coverage(&self) -> usize {
        self.tiles.iter().map(Subspace::dim).sum()
    }
}

/// `V + sum_i theta(g_i) V`
pub fn grown(rep: &Representation, v: &Subspace) -> Result<Subspace> {
    let mut parts = vec![v.clone()];
    for g in rep.generators() {
        parts.push(v.image(g)?);
    }
    sum_all(rep.field(), rep.dim(), &parts)
}

/// Reasons the witness fails; empty means accepted.
pub fn witness_failures(rep: &Representation, w: &HyperfiniteWitness) -> Result<Vec<String>> {
    for t in &w.tiles {
        if t.ambient() != rep.dim() {
            return Err(Error::AmbientMismatch(t.ambient(), rep.dim()));
        }
        if t.field() != rep.field() {
            return Err(Error::FieldMismatch(t.field().to_string(), rep.field().to_string()));
        }
    }
    let mut fails = Vec::new();
    let one = Rational::from_integer(1);
    let mut grown_tiles = Vec::with_capacity(w.tiles.len());
    for (j, v) in w.tiles.iter().enumerate() {
        if v.dim() > w.k {
            fails.push(format!("tile {} has dimension {} > K = {}", j + 1, v.dim(), w.k));
        }
        let g = grown(rep, v)?;
        if frac(g.dim(), 1) >= (one + w.epsilon) * frac(v.dim(), 1) {
            fails.push(format!(
                "tile {} grows from {} to {}, not below (1 + {})",
                j + 1,
                v.dim(),
                g.dim(),
                w.epsilon
            ));
        }
        grown_tiles.push(g);
    }
    let total: usize = grown_tiles.iter().map(Subspace::dim).sum();
    if sum_all(rep.field(), rep.dim(), &grown_tiles)?.dim() != total {
        fails.push("grown tiles are not independent".into());
    }
    let coverage = w.coverage();
    if frac(coverage, 1) < (one - w.epsilon) * frac(rep.dim(), 1) {
        fails.push(format!(
            "tiles cover {coverage} dimensions, below (1 - {}) * {}",
            w.epsilon,
            rep.dim()
        ));
    }
    Ok(fails)
}

pub fn witness_check(rep: &Representation, w: &HyperfiniteWitness) -> Result<bool> {
    Ok(witness_failures(rep, w)?.is_empty())
}

/// Tiles `V_x = phi(F_1) x` over the centers of a tiling certificate, with
/// `K = dim F`. Whether the result is a witness is left to `witness_check`.
pub fn witness_from_tiling(
    rep: &Representation,
    map: &FiniteApproxMap,
    cert: &TilingCertificate,
    f: &FSubspaceData,
    f1: &FSubspaceData,
    epsilon: Rational,
) -> Result<HyperfiniteWitness> {
    if rep.dim() != map.dim() || cert.n != map.dim() {
        return Err(Error::DimensionMismatch(format!(
            "representation n = {}, map n = {}, certificate n = {}",
            rep.dim(),
            map.dim(),
            cert.n
        )));
    }
    if rep.field() != map.field() {
        return Err(Error::FieldMismatch(rep.field().to_string(), map.field().to_string()));
    }
    let count = map.basis_count();
    let f_span = Subspace::span(map.field(), count, f.basis().iter().cloned())?;
    for v in f1.basis() {
        if !f_span.contains(v)? {
            return Err(Error::InvalidInput("F_1 is not contained in F".into()));
        }
    }
    let images = f1.basis().iter().map(|c| map.phi(c)).collect::<Result<Vec<_>>>()?;
    let mut tiles = Vec::with_capacity(cert.centers.len());
    for c in &cert.centers {
        let x: Vec<Scalar> = c.iter().map(|&v| map.field().scalar(v)).collect::<Result<_>>()?;
        let vs = images.iter().map(|m| m.apply(&x)).collect::<Result<Vec<_>>>()?;
        tiles.push(Subspace::span(map.field(), map.dim(), vs)?);
    }
    Ok(HyperfiniteWitness {
        epsilon,
        k: f.dim(),
        tiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{DenseMatrix, Field};
    use crate::rational::ratio;
    use crate::repseq::{family_generate, FamilyDescriptor};

    fn swaps() -> Representation {
        let d = FamilyDescriptor::BlockDiagonal {
            blocks: vec![FamilyDescriptor::CyclicRegular, FamilyDescriptor::CyclicRegular],
        };
        family_generate(&d, &Field::gf(2).unwrap(), 2).unwrap()
    }

    #[test]
    fn invariant_blocks_accepted() {
        let rep = swaps();
        let f = rep.field().clone();
        let w = HyperfiniteWitness {
            epsilon: ratio(1, 100),
            k: 2,
            tiles: vec![
                Subspace::coordinate(&f, 4, [0, 1]),
                Subspace::coordinate(&f, 4, [2, 3]),
            ],
        };
        assert!(witness_check(&rep, &w).unwrap());
        let mut low_k = w.clone();
        low_k.k = 1;
        assert!(!witness_check(&rep, &low_k).unwrap());
    }

    #[test]
    fn whole_space_and_overlaps() {
        let rep = swaps();
        let f = rep.field().clone();
        let whole = HyperfiniteWitness {
            epsilon: ratio(1, 10),
            k: 4,
            tiles: vec![Subspace::full(&f, 4)],
        };
        assert!(witness_check(&rep, &whole).unwrap());
        let overlap = HyperfiniteWitness {
            epsilon: ratio(1, 10),
            k: 4,
            tiles: vec![Subspace::full(&f, 4), Subspace::coordinate(&f, 4, [0, 1])],
        };
        assert!(!witness_check(&rep, &overlap).unwrap());
    }

    #[test]
    fn zero_tile_rejected() {
        let f = Field::gf(2).unwrap();
        let rep = Representation::new(&f, 2, vec![DenseMatrix::identity(&f, 2)]).unwrap();
        let w = HyperfiniteWitness {
            epsilon: ratio(1, 2),
            k: 2,
            tiles: vec![Subspace::full(&f, 2), Subspace::zero(&f, 2)],
        };
        assert!(!witness_check(&rep, &w).unwrap());
    }

    #[test]
    fn file_round_trip() {
        let rep = swaps();
        let w = HyperfiniteWitness {
            epsilon: ratio(1, 10),
            k: 2,
            tiles: vec![Subspace::coordinate(rep.field(), 4, [0, 1])],
        };
        let json = serde_json::to_string(&w.to_file()).unwrap();
        assert!(json.contains("\"K\":2"));
        let back: WitnessFile = serde_json::from_str(&json).unwrap();
        assert_eq!(HyperfiniteWitness::from_file(&back, &rep).unwrap(), w);
    }
}
