use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;

use super::{ElementArgs, Failure, RepArgs, TilingArgs};
use crate::freealg::{parse_element, AlgebraMatrix};
use crate::gf::{DenseMatrix, Field, FieldSpec};
use crate::rational::{parse_rational, Rational};
use crate::repseq::{family_generate, FamilyDescriptor, Representation, RepresentationFile};
use crate::tiling::{TilingProblem, TilingProblemFile};

pub type Input<T> = Result<T, Failure>;

/// Reads a file, or stdin for `-`.
pub fn read_text(path: &Path) -> Input<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("reading {}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Input<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn field(text: &str) -> Input<Field> {
    Ok(Field::new(FieldSpec::parse(text)?))
}

pub fn rational(name: &str, text: &str) -> Input<Rational> {
    parse_rational(text).map_err(|e| Failure::input(format!("--{name}: {e}")))
}

/// A bare name like `cyclic`, inline JSON, or a path to a JSON file.
pub fn family(text: &str) -> Input<FamilyDescriptor> {
    let t = text.trim();
    let json = if t.starts_with('{') {
        t.to_string()
    } else if Path::new(t).is_file() {
        read_text(Path::new(t))?
    } else {
        serde_json::json!({ "family": t }).to_string()
    };
    serde_json::from_str(&json).map_err(|e| Failure::input(format!("family `{t}`: {e}")))
}

pub fn representation(args: &RepArgs) -> Input<Representation> {
    match (&args.rep, &args.family) {
        (Some(path), _) => {
            let file: RepresentationFile = read_json(path)?;
            Ok(Representation::from_file(&file)?)
        }
        (None, Some(fam)) => Ok(family_generate(&family(fam)?, &field(&args.field)?, args.k)?),
        (None, None) => Err(Failure::input("give --rep FILE or --family NAME")),
    }
}

pub fn algebra_matrix(args: &ElementArgs, field: &Field, r: u32) -> Input<AlgebraMatrix> {
    match (&args.element, &args.matrix) {
        (Some(text), _) => Ok(AlgebraMatrix::single(
            parse_element(text, field, r).map_err(|e| Failure::input(format!("--element: {e}")))?,
        )),
        (None, Some(path)) => {
            let rows: Vec<Vec<String>> = read_json(path)?;
            Ok(AlgebraMatrix::parse_rows(field, r, &rows)?)
        }
        (None, None) => Err(Failure::input("give --element TEXT or --matrix FILE")),
    }
}

/// `a..b` (inclusive) or `k1,k2,...`.
pub fn k_list(text: &str) -> Input<Vec<usize>> {
    let bad = || Failure::input(format!("cannot parse index list `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let ks: Vec<usize> = match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            (a..=b).collect()
        }
        None => text.split(',').map(num).collect::<Input<_>>()?,
    };
    if ks.is_empty() || ks.contains(&0) {
        return Err(Failure::input("member indices start at 1"));
    }
    Ok(ks)
}

pub fn tiling_problem(args: &TilingArgs) -> Input<TilingProblem> {
    let delta = args.delta.as_deref().map(|d| rational("delta", d)).transpose()?;
    match (&args.problem, args.laurent) {
        (Some(path), _) => {
            let file: TilingProblemFile = read_json(path)?;
            let mut p = TilingProblem::from_file(&file)?;
            if let Some(d) = delta {
                p.delta = d;
            }
            Ok(p)
        }
        (None, Some(m)) => Ok(TilingProblem::laurent_fixture(
            m,
            delta.unwrap_or(Rational::new(1, 4)),
        )?),
        (None, None) => Err(Failure::input("give --problem FILE or --laurent M")),
    }
}

/// A square matrix as rows of integer codes.
pub fn matrix(field: &Field, rows: &[Vec<u32>]) -> Input<DenseMatrix> {
    Ok(DenseMatrix::from_rows(field, rows)?)
}
