use rayon::prelude::*;
use serde::Serialize;

use super::expr::RatExpr;
use crate::error::{Error, Result};
use crate::gf::{DenseMatrix, Field, FieldSpec, Scalar};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalResult {
    Value(DenseMatrix),
    /// Child indices from the root to the `Inv` node whose argument was
    /// singular.
    Singular { path: Vec<usize> },
}

impl EvalResult {
    pub fn value(&self) -> Option<&DenseMatrix> {
        match self {
            EvalResult::Value(m) => Some(m),
            EvalResult::Singular { .. } => None,
        }
    }
}

/// Embeds constants of the expression field into the evaluation field.
struct ConstMap {
    table: Option<Vec<Scalar>>,
}

impl ConstMap {
    fn new(expr_field: &Field, target: &Field) -> Result<Self> {
        if expr_field == target {
            return Ok(ConstMap { table: None });
        }
        Ok(ConstMap {
            table: Some(expr_field.embedding_into(target)?),
        })
    }

    fn get(&self, c: Scalar) -> Scalar {
        match &self.table {
            None => c,
            Some(t) => t[c.0 as usize],
        }
    }
}

fn check_tuple(expr: &RatExpr, tuple: &[DenseMatrix]) -> Result<(Field, usize)> {
    let needed = expr.num_vars();
    if tuple.len() < needed {
        return Err(Error::InvalidInput(format!(
            "expression uses z{needed} but only {} matrices were given",
            tuple.len()
        )));
    }
    let Some(first) = tuple.first() else {
        return Err(Error::InvalidInput("evaluation needs at least one matrix to fix the size".into()));
    };
    let n = first.rows();
    for m in tuple {
        if m.field() != first.field() {
            return Err(Error::FieldMismatch(m.field().to_string(), first.field().to_string()));
        }
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "tuple mixes {n}x{n} and {}x{} matrices",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok((first.field().clone(), n))
}

/// Bottom-up evaluation with constants read in `expr_field` and embedded
/// into the tuple's field.
pub fn evaluate(expr: &RatExpr, expr_field: &Field, tuple: &[DenseMatrix]) -> Result<EvalResult> {
    let (field, n) = check_tuple(expr, tuple)?;
    let consts = ConstMap::new(expr_field, &field)?;
    let mut path = Vec::new();
    Ok(match eval_node(expr, &field, n, tuple, &consts, &mut path)? {
        Some(m) => EvalResult::Value(m),
        None => EvalResult::Singular { path },
    })
}

fn eval_node(
    e: &RatExpr,
    field: &Field,
    n: usize,
    tuple: &[DenseMatrix],
    consts: &ConstMap,
    path: &mut Vec<usize>,
) -> Result<Option<DenseMatrix>> {
    Ok(Some(match e {
        RatExpr::Const(c) => DenseMatrix::scalar(field, n, consts.get(*c)),
        RatExpr::Var(i) => tuple[i - 1].clone(),
        RatExpr::Sum(cs) | RatExpr::Prod(cs) => {
            let mut acc: Option<DenseMatrix> = None;
            for (k, c) in cs.iter().enumerate() {
                path.push(k);
                let Some(v) = eval_node(c, field, n, tuple, consts, path)? else {
                    return Ok(None);
                };
                path.pop();
                acc = Some(match acc {
                    None => v,
                    Some(a) if matches!(e, RatExpr::Sum(_)) => a.add(&v)?,
                    Some(a) => a.mul(&v)?,
                });
            }
            acc.ok_or_else(|| Error::InvalidInput("empty sum or product".into()))?
        }
        RatExpr::Inv(inner) => {
            path.push(0);
            let Some(v) = eval_node(inner, field, n, tuple, consts, path)? else {
                return Ok(None);
            };
            path.pop();
            match v.inverse() {
                Ok(inv) => inv,
                Err(Error::Singular) => return Ok(None),
                Err(other) => return Err(other),
            }
        }
    }))
}

pub fn in_domain(expr: &RatExpr, expr_field: &Field, tuple: &[DenseMatrix]) -> Result<bool> {
    Ok(matches!(evaluate(expr, expr_field, tuple)?, EvalResult::Value(_)))
}

/// A point where both sides are defined and differ, re-checked before it
/// is reported. Matrices are integer codes over `field`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub field: FieldSpec,
    pub trial: u64,
    pub size: usize,
    pub point: Vec<Vec<Vec<u32>>>,
    pub left: Vec<Vec<u32>>,
    pub right: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Counterexample(Counterexample),
    /// Every sample in the common domain agreed. Evidence, not proof.
    Consistent { common: u64, total: u64 },
    /// No sample landed in both domains; nothing can be concluded.
    NoCommonDomain { total: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivOptions {
    pub sizes: Vec<usize>,
    pub trials: u64,
    pub ext_deg: u32,
    pub seed: u64,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions {
            sizes: vec![1, 2, 3, 4],
            trials: 200,
            ext_deg: 8,
            seed: 0,
        }
    }
}

/// The field `GF(p^(deg * ext))` that random points are drawn from.
pub fn sampling_field(base: &Field, ext_deg: u32) -> Result<Field> {
    if ext_deg == 0 {
        return Err(Error::InvalidInput("ext_deg must be at least 1".into()));
    }
    let spec = base.spec();
    if ext_deg == 1 {
        return Ok(base.clone());
    }
    Field::gf_pow(spec.p, spec.deg * ext_deg)
}

enum Sample {
    Outside,
    Agree,
    Differ(Counterexample),
}

/// Samples random tuples over `GF(q^ext_deg)`; trial `t` uses size
/// `sizes[t % len]` and stream `(seed, t)`. The first disagreement in trial
/// order wins.
pub fn equiv_probabilistic(r: &RatExpr, s: &RatExpr, field: &Field, opts: &EquivOptions) -> Result<Verdict> {
    if opts.sizes.is_empty() || opts.sizes.contains(&0) {
        return Err(Error::InvalidInput("sizes must be positive".into()));
    }
    let big = sampling_field(field, opts.ext_deg)?;
    let vars = r.num_vars().max(s.num_vars()).max(1);
    let samples = (0..opts.trials)
        .into_par_iter()
        .map(|t| {
            let size = opts.sizes[(t % opts.sizes.len() as u64) as usize];
            let mut rng = rng::stream(opts.seed, t);
            let point: Vec<DenseMatrix> = (0..vars).map(|_| DenseMatrix::random(&big, size, size, &mut rng)).collect();
            let (EvalResult::Value(a), EvalResult::Value(b)) =
                (evaluate(r, field, &point)?, evaluate(s, field, &point)?)
            else {
                return Ok(Sample::Outside);
            };
            if a == b {
                return Ok(Sample::Agree);
            }
            // re-verify from scratch before reporting
            let a2 = evaluate(r, field, &point)?;
            let b2 = evaluate(s, field, &point)?;
            if a2.value() != Some(&a) || b2.value() != Some(&b) {
                return Err(Error::InvalidInput("evaluation is not reproducible".into()));
            }
            Ok(Sample::Differ(Counterexample {
                field: big.spec().clone(),
                trial: t,
                size,
                point: point.iter().map(DenseMatrix::to_int_rows).collect(),
                left: a.to_int_rows(),
                right: b.to_int_rows(),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut common = 0u64;
    for s in samples {
        match s {
            Sample::Outside => {}
            Sample::Agree => common += 1,
            Sample::Differ(c) => return Ok(Verdict::Counterexample(c)),
        }
    }
    Ok(if common == 0 {
        Verdict::NoCommonDomain { total: opts.trials }
    } else {
        Verdict::Consistent {
            common,
            total: opts.trials,
        }
    })
}
