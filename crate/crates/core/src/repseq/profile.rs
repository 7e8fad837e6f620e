use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::{family_generate, FamilyDescriptor};
use super::representation::Representation;
use crate::error::{Error, Result};
use crate::freealg::AlgebraMatrix;
use crate::gf::Field;
use crate::rational::{self, Rational};

/// `rank / n_k`, kept as the integer pair it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizedRank {
    pub rank: usize,
    pub n_k: usize,
}

impl NormalizedRank {
    pub fn value(self) -> Rational {
        rational::frac(self.rank, self.n_k)
    }
}

pub fn normalized_rank(rep: &Representation, a: &AlgebraMatrix) -> Result<NormalizedRank> {
    if rep.dim() == 0 {
        return Err(Error::InvalidInput("zero-dimensional representation".into()));
    }
    Ok(NormalizedRank {
        rank: rep.apply_matrix(a)?.rank(),
        n_k: rep.dim(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub k: usize,
    pub n_k: usize,
    pub rank: usize,
}

impl ProfileEntry {
    pub fn value(&self) -> Rational {
        rational::frac(self.rank, self.n_k)
    }
}

/// Normalized ranks along a family, ordered by `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub entries: Vec<ProfileEntry>,
}

impl RankProfile {
    /// Evaluates every `k` in parallel; entries come back in the order of `ks`.
    pub fn compute(desc: &FamilyDescriptor, field: &Field, a: &AlgebraMatrix, ks: &[usize]) -> Result<Self> {
        let entries = ks
            .par_iter()
            .map(|&k| {
                let rep = family_generate(desc, field, k)?;
                let nr = normalized_rank(&rep, a)?;
                Ok(ProfileEntry {
                    k,
                    n_k: nr.n_k,
                    rank: nr.rank,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RankProfile { entries })
    }

    pub fn values(&self) -> Vec<Rational> {
        self.entries.iter().map(ProfileEntry::value).collect()
    }

    /// Header `k,n_k,rank,num,den`, one row per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,n_k,rank,num,den\n");
        for e in &self.entries {
            let v = e.value();
            out.push_str(&format!("{},{},{},{},{}\n", e.k, e.n_k, e.rank, v.numer(), v.denom()));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('k')) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() < 3 {
                return Err(Error::InvalidInput(format!("profile line {}: expected k,n_k,rank", lineno + 1)));
            }
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("profile line {}: bad integer {s:?}", lineno + 1)))
            };
            let entry = ProfileEntry {
                k: num(fields[0])?,
                n_k: num(fields[1])?,
                rank: num(fields[2])?,
            };
            if entry.n_k == 0 {
                return Err(Error::InvalidInput(format!("profile line {}: n_k = 0", lineno + 1)));
            }
            entries.push(entry);
        }
        Ok(RankProfile { entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtiyahReport {
    #[serde(with = "crate::rational::serde_repr")]
    pub limit_estimate: Rational,
    #[serde(with = "crate::rational::serde_repr")]
    pub tail_oscillation: Rational,
    pub nearest_integer: i64,
    pub integral: bool,
    #[serde(with = "crate::rational::serde_repr")]
    pub tolerance: Rational,
}

/// Diagnoses integrality of the profile's limit from its last `window`
/// entries. The estimate is the last value; no extrapolation.
pub fn atiyah_check(profile: &RankProfile, window: usize, tol: Rational) -> Result<AtiyahReport> {
    let have = profile.entries.len();
    if window == 0 || have < window {
        return Err(Error::ProfileTooShort {
            have,
            need: window.max(1),
        });
    }
    let tail: Vec<Rational> = profile.entries[have - window..].iter().map(ProfileEntry::value).collect();
    let limit = *tail.last().expect("window >= 1");
    let max = *tail.iter().max().expect("nonempty");
    let min = *tail.iter().min().expect("nonempty");
    let oscillation = max - min;
    let nearest = rational::nearest_integer(limit);
    let integral = rational::abs_diff(limit, Rational::from_integer(nearest)) <= tol && oscillation <= tol;
    Ok(AtiyahReport {
        limit_estimate: limit,
        tail_oscillation: oscillation,
        nearest_integer: nearest,
        integral,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_element;
    use crate::rational::ratio;

    fn constant(v: (usize, usize), len: usize) -> RankProfile {
        RankProfile {
            entries: (1..=len)
                .map(|k| ProfileEntry {
                    k,
                    n_k: v.1,
                    rank: v.0,
                })
                .collect(),
        }
    }

    #[test]
    fn cyclic_profile() {
        let f = Field::gf(2).unwrap();
        let a = AlgebraMatrix::single(parse_element("g1 - 1", &f, 1).unwrap());
        let ks: Vec<usize> = (2..=8).collect();
        let p = RankProfile::compute(&FamilyDescriptor::CyclicRegular, &f, &a, &ks).unwrap();
        for e in &p.entries {
            assert_eq!(e.value(), ratio(e.k as i64 - 1, e.k as i64));
        }
        let csv = p.to_csv();
        assert!(csv.starts_with("k,n_k,rank,num,den\n2,2,1,1,2\n3,3,2,2,3\n"));
        assert_eq!(RankProfile::from_csv(&csv).unwrap(), p);
    }

    #[test]
    fn identity_and_zero() {
        let f = Field::gf(3).unwrap();
        let rep = family_generate(&FamilyDescriptor::CyclicRegular, &f, 5).unwrap();
        let id = AlgebraMatrix::identity(&f, 1, 2);
        assert_eq!(normalized_rank(&rep, &id).unwrap().value(), Rational::from_integer(2));
        let z = AlgebraMatrix::single(crate::freealg::AlgebraElement::zero(&f, 1));
        assert_eq!(normalized_rank(&rep, &z).unwrap().rank, 0);
    }

    #[test]
    fn atiyah_examples() {
        let half = atiyah_check(&constant((1, 2), 10), 8, ratio(1, 32)).unwrap();
        assert!(!half.integral);
        assert_eq!(half.tail_oscillation, Rational::from_integer(0));
        let two = atiyah_check(&constant((4, 2), 10), 8, ratio(1, 32)).unwrap();
        assert!(two.integral);
        assert_eq!(two.nearest_integer, 2);
        assert!(matches!(
            atiyah_check(&constant((1, 1), 3), 8, ratio(1, 32)),
            Err(Error::ProfileTooShort { have: 3, need: 8 })
        ));
    }
}
