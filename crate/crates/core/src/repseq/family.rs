use serde::{Deserialize, Serialize};

use super::representation::Representation;
use crate::error::{Error, Result};
use crate::gf::{DenseMatrix, Field};
use crate::rng;

/// Largest dimension a family member may have.
pub const MAX_FAMILY_DIM: usize = 1 << 14;

/// A built-in sequence of representations, indexed by `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyDescriptor {
    /// Regular representation of `Z/k`: `g1` is the cyclic shift on `K^k`.
    #[serde(alias = "cyclic")]
    CyclicRegular,
    /// Regular representation of `Z/(m_1 k) x ... x Z/(m_r k)`; `g_i` shifts
    /// the `i`-th coordinate.
    AbelianQuotient { moduli: Vec<usize> },
    /// Permutation representations; member `k` is `tuples[k - 1]`, one
    /// permutation (images of `0..n`) per generator.
    Schreier { tuples: Vec<Vec<Vec<usize>>> },
    /// `r` uniformly random invertible matrices of size `n k`, drawn from the
    /// stream `(seed, k)`.
    RandomInvertible { seed: u64, n: usize, r: u32 },
    /// Direct sum of the members of each block family.
    BlockDiagonal { blocks: Vec<FamilyDescriptor> },
}

fn shift_perm(len: usize) -> Vec<usize> {
    (0..len).map(|j| (j + 1) % len).collect()
}

pub fn family_generate(desc: &FamilyDescriptor, field: &Field, k: usize) -> Result<Representation> {
    if k == 0 {
        return Err(Error::InvalidInput("family index k starts at 1".into()));
    }
    match desc {
        FamilyDescriptor::CyclicRegular => {
            check_dim(k)?;
            let g = DenseMatrix::permutation(field, &shift_perm(k))?;
            Representation::new(field, k, vec![g])
        }
        FamilyDescriptor::AbelianQuotient { moduli } => {
            if moduli.is_empty() || moduli.contains(&0) {
                return Err(Error::InvalidInput("abelian moduli must be positive".into()));
            }
            let sizes: Vec<usize> = moduli.iter().map(|m| m * k).collect();
            let n = sizes
                .iter()
                .try_fold(1usize, |acc, &s| acc.checked_mul(s))
                .ok_or_else(|| Error::InvalidInput("abelian group too large".into()))?;
            check_dim(n)?;
            // mixed radix index: coordinate i has stride prod(sizes[..i])
            let gens = (0..sizes.len())
                .map(|i| {
                    let stride: usize = sizes[..i].iter().product();
                    let perm: Vec<usize> = (0..n)
                        .map(|idx| {
                            let digit = (idx / stride) % sizes[i];
                            let next = (digit + 1) % sizes[i];
                            idx - digit * stride + next * stride
                        })
                        .collect();
                    DenseMatrix::permutation(field, &perm)
                })
                .collect::<Result<Vec<_>>>()?;
            Representation::new(field, n, gens)
        }
        FamilyDescriptor::Schreier { tuples } => {
            let tuple = tuples.get(k - 1).ok_or_else(|| {
                Error::InvalidInput(format!("schreier family has {} members, asked for {k}", tuples.len()))
            })?;
            let n = tuple.first().map_or(0, Vec::len);
            if tuple.is_empty() || tuple.iter().any(|p| p.len() != n) {
                return Err(Error::InvalidInput("schreier permutations must share a length".into()));
            }
            check_dim(n)?;
            let gens = tuple
                .iter()
                .map(|p| DenseMatrix::permutation(field, p))
                .collect::<Result<Vec<_>>>()?;
            Representation::new(field, n, gens)
        }
        FamilyDescriptor::RandomInvertible { seed, n, r } => {
            if *n == 0 {
                return Err(Error::InvalidInput("random_invertible needs n >= 1".into()));
            }
            let dim = n * k;
            check_dim(dim)?;
            let mut rng = rng::stream(*seed, k as u64);
            let gens = (0..*r)
                .map(|_| DenseMatrix::random_invertible(field, dim, &mut rng))
                .collect();
            Representation::new(field, dim, gens)
        }
        FamilyDescriptor::BlockDiagonal { blocks } => {
            if blocks.is_empty() {
                return Err(Error::InvalidInput("block_diagonal needs blocks".into()));
            }
            let parts = blocks
                .iter()
                .map(|b| family_generate(b, field, k))
                .collect::<Result<Vec<_>>>()?;
            check_dim(parts.iter().map(Representation::dim).sum())?;
            Representation::direct_sum(&parts)
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_FAMILY_DIM {
        return Err(Error::InvalidInput(format!(
            "family member dimension {n} outside 1..={MAX_FAMILY_DIM}"
        )));
    }
    Ok(())
}
