use rayon::prelude::*;
use serde::Serialize;

use super::witness::grown;
use crate::error::{Error, Result};
use crate::gf::{enumerate_subspaces, gaussian_binomial, Subspace};
use crate::rational::{frac, Rational};
use crate::repseq::Representation;
use crate::rng;

/// Hard limit on subspaces visited by one exact scan.
pub const MAX_EXACT_SUBSPACES: u128 = 1 << 24;

const BATCH: usize = 4096;

/// Smallest growth ratio `dim(W + sum_i theta(g_i) W) / dim W` found over
/// nonzero `W` with `dim W <= n/2`, and a subspace attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub min_ratio: Rational,
    pub witness: Subspace,
    pub exact: bool,
    pub samples: u64,
}

#[derive(Serialize)]
struct ExpansionReportJson {
    #[serde(with = "crate::rational::serde_repr")]
    min_ratio: Rational,
    witness: Vec<Vec<u32>>,
    exact: bool,
    samples: u64,
}

impl Serialize for ExpansionReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionReportJson {
            min_ratio: self.min_ratio,
            witness: self.witness.to_int_rows(),
            exact: self.exact,
            samples: self.samples,
        }
        .serialize(s)
    }
}

pub fn growth_ratio(rep: &Representation, w: &Subspace) -> Result<Rational> {
    if w.is_zero() {
        return Err(Error::InvalidInput("growth ratio of the zero subspace".into()));
    }
    Ok(frac(grown(rep, w)?.dim(), w.dim()))
}

fn half_dim(rep: &Representation) -> Result<usize> {
    let half = rep.dim() / 2;
    if half == 0 {
        return Err(Error::InvalidInput(format!(
            "no nonzero subspace of dimension <= n/2 when n = {}",
            rep.dim()
        )));
    }
    Ok(half)
}

/// Minimum of `(ratio, index)`, so ties go to the earliest candidate.
fn better(a: (Rational, u64, Subspace), b: (Rational, u64, Subspace)) -> (Rational, u64, Subspace) {
    if (b.0, b.1) < (a.0, a.1) {
        b
    } else {
        a
    }
}

/// Exact minimum over every subspace of dimension `1..=n/2`, visited in
/// enumeration order. `cap` is clamped to [`MAX_EXACT_SUBSPACES`].
pub fn cheeger_exact(rep: &Representation, cap: u128) -> Result<ExpansionReport> {
    let half = half_dim(rep)?;
    let cap = cap.min(MAX_EXACT_SUBSPACES);
    let q = rep.field().order() as u64;
    let mut total: u128 = 0;
    for d in 1..=half {
        total = total.saturating_add(gaussian_binomial(rep.dim(), d, q).unwrap_or(u128::MAX));
    }
    if total > cap {
        return Err(Error::BudgetExceeded { needed: total, cap });
    }
    let mut best: Option<(Rational, u64, Subspace)> = None;
    let mut index: u64 = 0;
    for d in 1..=half {
        let mut it = enumerate_subspaces(rep.field(), rep.dim(), d, cap)?;
        loop {
            let batch: Vec<Subspace> = it.by_ref().take(BATCH).collect();
            if batch.is_empty() {
                break;
            }
            let base = index;
            index += batch.len() as u64;
            let local = batch
                .into_par_iter()
                .enumerate()
                .map(|(j, w)| Ok((growth_ratio(rep, &w)?, base + j as u64, w)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .reduce(better);
            if let Some(l) = local {
                best = Some(match best {
                    Some(b) => better(b, l),
                    None => l,
                });
            }
        }
    }
    let (min_ratio, _, witness) = best.expect("at least one line exists");
    Ok(ExpansionReport {
        min_ratio,
        witness,
        exact: true,
        samples: index,
    })
}

/// Minimum over `trials` random subspaces: a dimension uniform in
/// `1..=n/2`, spanned by that many uniform vectors. Trial `t` draws from
/// stream `(seed, t)`.
pub fn cheeger_random(rep: &Representation, trials: u64, seed: u64) -> Result<ExpansionReport> {
    let half = half_dim(rep)?;
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let full = Subspace::full(rep.field(), rep.dim());
    let best = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(seed, t);
            let d = rand::Rng::random_range(&mut rng, 1..=half);
            let vectors: Vec<_> = (0..d).map(|_| full.random_vector(&mut rng)).collect();
            let w = Subspace::span(rep.field(), rep.dim(), vectors)?;
            if w.is_zero() {
                return Ok(None);
            }
            Ok(Some((growth_ratio(rep, &w)?, t, w)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .reduce(better);
    let (min_ratio, witness) = match best {
        Some((r, _, w)) => (r, w),
        // every draw was zero: fall back to the first coordinate line
        None => {
            let line = Subspace::coordinate(rep.field(), rep.dim(), [0]);
            (growth_ratio(rep, &line)?, line)
        }
    };
    Ok(ExpansionReport {
        min_ratio,
        witness,
        exact: false,
        samples: trials,
    })
}

/// Every `W` with `dim W <= n/2` grows by a factor of at least `1 + alpha`.
pub fn expander_check(rep: &Representation, alpha: Rational, cap: u128) -> Result<bool> {
    Ok(cheeger_exact(rep, cap)?.min_ratio >= Rational::from_integer(1) + alpha)
}
