use std::io::Write;

use serde::Serialize;

use super::input::{self, Input};
use super::{exit, Command, Failure, Format};
use crate::gf::{DenseMatrix, Scalar};
use crate::hyperfin::{
    cheeger_exact, cheeger_random, expander_check, witness_failures, witness_search, HyperfiniteWitness,
    SearchOutcome, WitnessFile,
};
use crate::ncrat::{evaluate, equiv_probabilistic, parse_ratexpr, sampling_field, EquivOptions, EvalResult, Verdict};
use crate::rational::Rational;
use crate::repseq::{atiyah_check, family_generate, normalized_rank, repair_to_invertible, RankProfile};
use crate::rng;
use crate::soficam::{
    folner_pair, parse_poly, sofic_check, truncation_sofic_data, PolyInstance, SoficData, SoficDataFile,
};
use crate::tiling::{certificate_failures, greedy_tiling, GreedyOptions, TilingCertificate};

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Input<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::input(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure::input(format!("writing output: {e}")))
}

fn emit_text(out: &mut dyn Write, text: &str) -> Input<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::input(format!("writing output: {e}")))
}

fn status(ok: bool) -> u8 {
    if ok {
        exit::OK
    } else {
        exit::CHECK_FAILED
    }
}

#[derive(Serialize)]
struct RankReport {
    n: usize,
    rank: usize,
    #[serde(with = "crate::rational::serde_repr")]
    normalized: Rational,
}

#[derive(Serialize)]
struct CheckReport {
    valid: bool,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct SearchMiss {
    found: bool,
    coverage: usize,
    tried: usize,
}

#[derive(Serialize)]
struct ExpanderReport {
    #[serde(with = "crate::rational::serde_repr")]
    alpha: Rational,
    expander: bool,
}

#[derive(Serialize)]
struct FolnerReport {
    m: usize,
    d: usize,
    dim_v1: usize,
    dim_v: usize,
}

#[derive(Serialize)]
struct EvalReport {
    in_domain: bool,
    value: Option<Vec<Vec<u32>>>,
    singular_path: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct RepairReport {
    n: usize,
    rank: usize,
    defect: usize,
    repaired: Vec<Vec<u32>>,
    distance: usize,
}

pub fn execute(cmd: &Command, out: &mut dyn Write) -> Input<u8> {
    match cmd {
        Command::Rank { rep, element } => {
            let rep = input::representation(rep)?;
            let a = input::algebra_matrix(element, rep.field(), rep.r())?;
            let nr = normalized_rank(&rep, &a)?;
            emit(
                out,
                &RankReport {
                    n: nr.n_k,
                    rank: nr.rank,
                    normalized: nr.value(),
                },
            )?;
            Ok(exit::OK)
        }
        Command::Profile {
            family,
            k,
            element,
            field,
            format,
        } => {
            let desc = input::family(family)?;
            let field = input::field(field)?;
            let ks = input::k_list(k)?;
            // the first member fixes the number of generators
            let r = family_generate(&desc, &field, ks[0])?.r();
            let a = input::algebra_matrix(element, &field, r)?;
            let profile = RankProfile::compute(&desc, &field, &a, &ks)?;
            match format {
                Format::Csv => emit_text(out, &profile.to_csv())?,
                Format::Json => emit(out, &profile)?,
            }
            Ok(exit::OK)
        }
        Command::Atiyah { profile, window, tol } => {
            let profile = RankProfile::from_csv(&input::read_text(profile)?)?;
            let report = atiyah_check(&profile, *window, input::rational("tol", tol)?)?;
            emit(out, &report)?;
            Ok(status(report.integral))
        }
        Command::Tile {
            problem,
            pool_budget,
            seed,
        } => {
            let p = input::tiling_problem(problem)?;
            let opts = GreedyOptions {
                pool_budget: *pool_budget,
                seed: *seed,
            };
            let cert = greedy_tiling(&p.map, &p.f, &p.h, p.i, p.delta, opts)?;
            emit(out, &cert)?;
            Ok(exit::OK)
        }
        Command::TileVerify { problem, cert } => {
            let p = input::tiling_problem(problem)?;
            let cert: TilingCertificate = input::read_json(cert)?;
            let failures = certificate_failures(&cert, &p.map, &p.f, &p.h, p.i, p.delta)?;
            let valid = failures.is_empty();
            emit(out, &CheckReport { valid, failures })?;
            Ok(status(valid))
        }
        Command::HyperfiniteCheck { rep, witness } => {
            let rep = input::representation(rep)?;
            let file: WitnessFile = input::read_json(witness)?;
            let failures = match HyperfiniteWitness::from_file(&file, &rep) {
                Ok(w) => witness_failures(&rep, &w)?,
                Err(e) => vec![format!("tiles are not subspaces of the ambient space: {e}")],
            };
            let valid = failures.is_empty();
            emit(out, &CheckReport { valid, failures })?;
            Ok(status(valid))
        }
        Command::HyperfiniteSearch {
            rep,
            epsilon,
            max_dim,
            budget,
            seed,
        } => {
            let rep = input::representation(rep)?;
            let eps = input::rational("epsilon", epsilon)?;
            match witness_search(&rep, eps, *max_dim, *budget, *seed)? {
                SearchOutcome::Found(w) => {
                    emit(out, &w.to_file())?;
                    Ok(exit::OK)
                }
                SearchOutcome::NotFound { coverage, tried } => {
                    emit(
                        out,
                        &SearchMiss {
                            found: false,
                            coverage,
                            tried,
                        },
                    )?;
                    Ok(exit::BUDGET_EXCEEDED)
                }
            }
        }
        Command::Cheeger { rep, trials, seed, cap } => {
            let rep = input::representation(rep)?;
            let report = match trials {
                Some(t) => cheeger_random(&rep, *t, *seed)?,
                None => cheeger_exact(&rep, *cap)?,
            };
            emit(out, &report)?;
            Ok(exit::OK)
        }
        Command::Expander { rep, alpha, cap } => {
            let rep = input::representation(rep)?;
            let alpha = input::rational("alpha", alpha)?;
            let expander = expander_check(&rep, alpha, *cap)?;
            emit(out, &ExpanderReport { alpha, expander })?;
            Ok(status(expander))
        }
        Command::SoficCheck {
            data,
            truncation,
            ms,
            field,
            index,
        } => {
            let data = match (data, truncation) {
                (Some(path), _) => {
                    let file: SoficDataFile = input::read_json(path)?;
                    SoficData::from_file(&file)?
                }
                (None, Some(d)) => truncation_sofic_data(&input::field(field)?, ms, *d, Vec::new())?,
                (None, None) => return Err(Failure::input("give --data FILE or --truncation D")),
            };
            let ks: Vec<usize> = match index {
                Some(k) => vec![*k],
                None => (1..=data.maps.len()).collect(),
            };
            let reports = ks.iter().map(|&k| sofic_check(&data, k)).collect::<Result<Vec<_>, _>>()?;
            emit(out, &reports)?;
            Ok(status(reports.iter().all(|r| r.all())))
        }
        Command::Folner {
            elements,
            delta,
            field,
            cap,
        } => {
            let field = input::field(field)?;
            let delta = input::rational("delta", delta)?;
            if delta <= Rational::from_integer(0) || delta > Rational::from_integer(1) {
                return Err(Failure::input(format!("--delta {delta} outside (0, 1]")));
            }
            let polys = elements
                .iter()
                .map(|e| parse_poly(e, &field).map_err(|err| Failure::input(format!("--element `{e}`: {err}"))))
                .collect::<Input<Vec<_>>>()?;
            let pair = folner_pair(&PolyInstance { field, cap: *cap }, &polys, delta)?;
            emit(
                out,
                &FolnerReport {
                    m: pair.m,
                    d: pair.d,
                    dim_v1: pair.v1.dim(),
                    dim_v: pair.v.dim(),
                },
            )?;
            Ok(exit::OK)
        }
        Command::NcratEval {
            expr,
            field,
            tuple,
            random,
            ext_deg,
            seed,
        } => {
            let base = input::field(field)?;
            let e = parse_ratexpr(expr, &base).map_err(|err| Failure::input(format!("--expr: {err}")))?;
            let big = sampling_field(&base, *ext_deg)?;
            let point: Vec<DenseMatrix> = match (tuple, random) {
                (Some(path), _) => {
                    let mats: Vec<Vec<Vec<u32>>> = input::read_json(path)?;
                    mats.iter().map(|m| input::matrix(&big, m)).collect::<Input<_>>()?
                }
                (None, Some(size)) => {
                    let mut rng = rng::stream(*seed, 0);
                    (0..e.num_vars().max(1))
                        .map(|_| DenseMatrix::random(&big, *size, *size, &mut rng))
                        .collect()
                }
                (None, None) => return Err(Failure::input("give --tuple FILE or --random SIZE")),
            };
            let report = match evaluate(&e, &base, &point)? {
                EvalResult::Value(m) => EvalReport {
                    in_domain: true,
                    value: Some(m.to_int_rows()),
                    singular_path: None,
                },
                EvalResult::Singular { path } => EvalReport {
                    in_domain: false,
                    value: None,
                    singular_path: Some(path),
                },
            };
            emit(out, &report)?;
            Ok(exit::OK)
        }
        Command::NcratEquiv {
            left,
            right,
            field,
            sizes,
            trials,
            ext_deg,
            seed,
        } => {
            let field = input::field(field)?;
            let l = parse_ratexpr(left, &field).map_err(|e| Failure::input(format!("--left: {e}")))?;
            let r = parse_ratexpr(right, &field).map_err(|e| Failure::input(format!("--right: {e}")))?;
            let opts = EquivOptions {
                sizes: sizes.clone(),
                trials: *trials,
                ext_deg: *ext_deg,
                seed: *seed,
            };
            let verdict = equiv_probabilistic(&l, &r, &field, &opts)?;
            emit(out, &verdict)?;
            Ok(match verdict {
                Verdict::Consistent { .. } => exit::OK,
                Verdict::Counterexample(_) => exit::CHECK_FAILED,
                Verdict::NoCommonDomain { .. } => exit::BUDGET_EXCEEDED,
            })
        }
        Command::Repair {
            matrix,
            random,
            rank,
            field,
            seed,
        } => {
            let field = input::field(field)?;
            let m = match (matrix, random) {
                (Some(path), _) => {
                    let rows: Vec<Vec<u32>> = input::read_json(path)?;
                    input::matrix(&field, &rows)?
                }
                (None, Some(n)) => {
                    let mut rng = rng::stream(*seed, 0);
                    match rank {
                        None => DenseMatrix::random(&field, *n, *n, &mut rng),
                        Some(r) if r <= n => {
                            // P * diag(1^r, 0) * Q has rank exactly r
                            let mut d = DenseMatrix::zeros(&field, *n, *n);
                            for i in 0..*r {
                                d.set(i, i, Scalar::ONE);
                            }
                            let p = DenseMatrix::random_invertible(&field, *n, &mut rng);
                            let q = DenseMatrix::random_invertible(&field, *n, &mut rng);
                            p.mul(&d)?.mul(&q)?
                        }
                        Some(r) => return Err(Failure::input(format!("--rank {r} exceeds --random {n}"))),
                    }
                }
                (None, None) => return Err(Failure::input("give --matrix FILE or --random N")),
            };
            let repaired = repair_to_invertible(&m)?;
            let rank = m.rank();
            emit(
                out,
                &RepairReport {
                    n: m.rows(),
                    rank,
                    defect: m.rows() - rank,
                    repaired: repaired.to_int_rows(),
                    distance: repaired.sub(&m)?.rank(),
                },
            )?;
            Ok(exit::OK)
        }
    }
}

