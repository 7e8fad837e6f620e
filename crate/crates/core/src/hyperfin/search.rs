use super::witness::{grown, witness_check, HyperfiniteWitness};
use crate::error::{Error, Result};
use crate::gf::{Scalar, Subspace};
use crate::rational::{frac, Rational};
use crate::repseq::Representation;
use crate::rng;

/// Result of a heuristic witness search. `NotFound` only means the budget
/// ran out; it says nothing about the representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(HyperfiniteWitness),
    NotFound { coverage: usize, tried: usize },
}

struct Accumulator<'a> {
    rep: &'a Representation,
    epsilon: Rational,
    k: usize,
    tiles: Vec<Subspace>,
    grown_sum: Subspace,
    coverage: usize,
}

impl Accumulator<'_> {
    fn done(&self) -> bool {
        frac(self.coverage, 1) >= (Rational::from_integer(1) - self.epsilon) * frac(self.rep.dim(), 1)
    }

    fn almost_invariant(&self, v: &Subspace, g: &Subspace) -> bool {
        frac(g.dim(), 1) < (Rational::from_integer(1) + self.epsilon) * frac(v.dim(), 1)
    }

    /// Accepts `v` if it is a valid new tile.
    fn offer(&mut self, v: &Subspace) -> Result<bool> {
        if v.is_zero() || v.dim() > self.k {
            return Ok(false);
        }
        let g = grown(self.rep, v)?;
        if !self.almost_invariant(v, &g) {
            return Ok(false);
        }
        let joined = self.grown_sum.sum(&g)?;
        if joined.dim() != self.grown_sum.dim() + g.dim() {
            return Ok(false);
        }
        self.grown_sum = joined;
        self.coverage += v.dim();
        self.tiles.push(v.clone());
        Ok(true)
    }
}

/// Connected components of the coordinate support graph of the generators.
/// Each component spans an invariant coordinate subspace.
fn support_blocks(rep: &Representation) -> Vec<Vec<usize>> {
    let n = rep.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in rep.generators() {
        for i in 0..n {
            for j in 0..n {
                if !g.get(i, j).is_zero() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_index = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if root_index[r] == usize::MAX {
            root_index[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[root_index[r]].push(x);
    }
    blocks
}

/// Smallest invariant subspace containing `v`, or `None` once it exceeds
/// dimension `k`.
fn orbit_closure(rep: &Representation, v: Vec<Scalar>, k: usize) -> Result<Option<Subspace>> {
    let mut w = Subspace::span(rep.field(), rep.dim(), [v.clone()])?;
    let mut queue = vec![v];
    while let Some(u) = queue.pop() {
        for g in rep.generators() {
            let img = g.apply(&u)?;
            if !w.contains(&img)? {
                w = w.sum(&Subspace::span(rep.field(), rep.dim(), [img.clone()])?)?;
                if w.dim() > k {
                    return Ok(None);
                }
                queue.push(img);
            }
        }
    }
    Ok(Some(w))
}

/// Looks for a witness with tiles of dimension at most `k`.
///
/// Stage 0 takes invariant coordinate blocks from the support graph.
/// Stage 1 takes orbit closures of unit vectors, then of seeded random
/// vectors outside the covered part. Stage 2 grows seeded random lines one
/// step at a time and keeps the first almost-invariant stage. Stages 1 and 2
/// together try at most `budget` starting vectors.
pub fn witness_search(rep: &Representation, epsilon: Rational, k: usize, budget: usize, seed: u64) -> Result<SearchOutcome> {
    if epsilon <= Rational::from_integer(0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let n = rep.dim();
    let field = rep.field().clone();
    let mut acc = Accumulator {
        rep,
        epsilon,
        k,
        tiles: Vec::new(),
        grown_sum: Subspace::zero(&field, n),
        coverage: 0,
    };
    let mut tried = 0usize;

    for block in support_blocks(rep) {
        if acc.done() {
            break;
        }
        if block.len() <= k {
            acc.offer(&Subspace::coordinate(&field, n, block))?;
        }
    }

    let mut rng = rng::stream(seed, 0);
    let mut unit_j = 0;
    while !acc.done() && tried < budget {
        tried += 1;
        let start = if unit_j < n {
            let mut v = vec![Scalar::ZERO; n];
            v[unit_j] = Scalar::ONE;
            unit_j += 1;
            if acc.grown_sum.contains(&v)? {
                continue;
            }
            v
        } else {
            acc.grown_sum.complement().random_vector(&mut rng)
        };
        if start.iter().all(|s| s.is_zero()) {
            continue;
        }
        if let Some(w) = orbit_closure(rep, start.clone(), k)? {
            if acc.offer(&w)? {
                continue;
            }
        }
        // stage 2: grow from the same start, accepting the first good step
        let mut w = Subspace::span(&field, n, [start])?;
        while w.dim() <= k {
            if acc.offer(&w)? {
                break;
            }
            let g = grown(rep, &w)?;
            if g.dim() == w.dim() {
                break;
            }
            w = g;
        }
    }

    if acc.done() {
        let witness = HyperfiniteWitness {
            epsilon,
            k,
            tiles: acc.tiles,
        };
        if witness_check(rep, &witness)? {
            return Ok(SearchOutcome::Found(witness));
        }
        return Ok(SearchOutcome::NotFound {
            coverage: witness.coverage(),
            tried,
        });
    }
    Ok(SearchOutcome::NotFound {
        coverage: acc.coverage,
        tried,
    })
}
