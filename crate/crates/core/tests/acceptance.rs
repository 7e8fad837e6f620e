//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use linrep::freealg::{parse_element, AlgebraElement, AlgebraMatrix};
use linrep::gf::{DenseMatrix, Field, Scalar};
use linrep::hyperfin::{cheeger_exact, cheeger_random, witness_check, witness_search, SearchOutcome};
use linrep::ncrat::{evaluate, equiv_probabilistic, hua_left, hua_right, parse_ratexpr, EquivOptions, Verdict};
use linrep::rational::{frac, Rational};
use linrep::repseq::{atiyah_check, repair_to_invertible, FamilyDescriptor, RankProfile, Representation};
use linrep::rng;
use linrep::soficam::{sofic_check, truncation_sofic_data, RankBound};
use linrep::tiling::{
    candidate_space, greedy_tiling, is_center, precondition_check, verify_certificate, GreedyOptions, TilingProblem,
};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let fields = [Field::gf(2).map_err(e)?, Field::gf(3).map_err(e)?, Field::gf_pow(2, 2).map_err(e)?];
    let mut violations = 0;
    for (fi, field) in fields.iter().enumerate() {
        let mut r = rng::stream(1, fi as u64);
        for _ in 0..1000 {
            let n = r.random_range(1..=12);
            let a = DenseMatrix::random(field, n, n, &mut r);
            let b = DenseMatrix::random(field, n, n, &mut r);
            let (ra, rb) = (a.rank(), b.rank());
            violations += (a.add(&b).map_err(e)?.rank() > ra + rb) as usize;
            violations += (a.mul(&b).map_err(e)?.rank() > ra.min(rb)) as usize;
            violations += (DenseMatrix::block_diag(&[&a, &b]).map_err(e)?.rank() != ra + rb) as usize;

            // orthogonal idempotents P D_1 P^-1 and P D_2 P^-1
            let split = r.random_range(0..=n);
            let p = DenseMatrix::random_invertible(field, n, &mut r);
            let pinv = p.inverse().map_err(e)?;
            let proj = |lo: usize, hi: usize| -> Result<DenseMatrix, String> {
                let mut d = DenseMatrix::zeros(field, n, n);
                for i in lo..hi {
                    d.set(i, i, Scalar::ONE);
                }
                p.mul(&d).map_err(e)?.mul(&pinv).map_err(e)
            };
            let (ef, ff) = (proj(0, split)?, proj(split, n)?);
            let orthogonal = ef.mul(&ff).map_err(e)?.is_zero() && ff.mul(&ef).map_err(e)?.is_zero();
            let idempotent = ef.mul(&ef).map_err(e)? == ef && ff.mul(&ff).map_err(e)? == ff;
            violations += !(orthogonal && idempotent) as usize;
            violations += (ef.add(&ff).map_err(e)?.rank() != ef.rank() + ff.rank()) as usize;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("3000 pairs, 0 violations, {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let f = Field::gf(2).map_err(e)?;
    let a = AlgebraMatrix::single(parse_element("g1 - 1", &f, 1).map_err(e)?);
    let ks: Vec<usize> = (2..=64).collect();
    let profile = RankProfile::compute(&FamilyDescriptor::CyclicRegular, &f, &a, &ks).map_err(e)?;
    for entry in &profile.entries {
        ensure(entry.value() == frac(entry.k - 1, entry.k), || {
            format!("k = {}: rank {}/{}", entry.k, entry.rank, entry.n_k)
        })?;
    }
    let report = atiyah_check(&profile, 8, Rational::new(1, 32)).map_err(e)?;
    ensure(report.integral && report.nearest_integer == 1, || format!("{report:?}"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("k = 2..64 exact, limit {} integral, {:?}", report.limit_estimate, start.elapsed()))
}

fn criterion_3() -> Outcome {
    let delta = Rational::new(1, 4);
    let mut applicable = Vec::new();
    for m in [16, 32, 64] {
        let p = TilingProblem::laurent_fixture(m, delta).map_err(e)?;
        let pre = precondition_check(&p.map, &p.f, &p.h, p.i, delta).map_err(e)?;
        if !pre.all() {
            continue;
        }
        applicable.push(m);
        let cert = greedy_tiling(&p.map, &p.f, &p.h, p.i, delta, GreedyOptions::default()).map_err(e)?;
        ensure(
            frac(cert.coverage, 1) >= (Rational::from_integer(1) - delta) * frac(m, 1),
            || format!("m = {m}: coverage {}", cert.coverage),
        )?;
        ensure(verify_certificate(&cert, &p.map, &p.f, &p.h, p.i, delta).map_err(e)?, || {
            format!("m = {m}: certificate rejected")
        })?;
    }
    ensure(!applicable.is_empty(), || "preconditions held for no fixture".into())?;

    // exhaustive re-check of the center conditions
    let mut scanned = 0usize;
    for m in 4..=12 {
        let p = TilingProblem::laurent_fixture(m, delta).map_err(e)?;
        let field = p.map.field().clone();
        let phi = p.map.phi_basis();
        let good = |y: &[Scalar]| -> Result<bool, String> {
            for s in 0..p.i {
                for t in 0..p.i {
                    let lhs = p.map.phi(p.map.product(s, t).ok_or("missing product")?).map_err(e)?;
                    let rhs = phi[t].apply(y).map_err(e)?;
                    if lhs.apply(y).map_err(e)? != phi[s].apply(&rhs).map_err(e)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        };
        let a = candidate_space(&p.map, &p.f, &p.h, p.i).map_err(e)?;
        for bits in 0u32..1 << m {
            let x: Vec<Scalar> = (0..m).map(|j| Scalar((bits >> j) & 1)).collect();
            let mut images = Vec::new();
            let mut inside = true;
            for c in p.f.basis() {
                let y = p.map.phi(c).map_err(e)?.apply(&x).map_err(e)?;
                inside &= good(&y)? && p.h.contains(&y).map_err(e)?;
                images.push(y);
            }
            let independent = DenseMatrix::from_columns(&field, m, &images).map_err(e)?.rank() == images.len();
            ensure(a.contains(&x).map_err(e)? == inside, || format!("m = {m}: candidate space differs at {bits:b}"))?;
            ensure(
                is_center(&p.map, &p.f, &p.h, p.i, &x).map_err(e)? == (inside && independent),
                || format!("m = {m}: center test differs at {bits:b}"),
            )?;
            scanned += 1;
        }
    }
    Ok(format!("preconditions hold at m = {applicable:?}, all tilings verified; {scanned} vectors scanned"))
}

fn criterion_4() -> Outcome {
    let field = Field::gf(2).map_err(e)?;
    let eps = Rational::new(1, 10);
    let mut rejected = 0;
    for fixture in 0..10u64 {
        let mut r = rng::stream(4, fixture);
        let rep = common::block_fixture(&field, 100, 5, 2, &mut r);
        let w = match witness_search(&rep, eps, 5, 2000, fixture).map_err(e)? {
            SearchOutcome::Found(w) => w,
            SearchOutcome::NotFound { coverage, .. } => {
                return Err(format!("fixture {fixture}: no witness, coverage {coverage}"))
            }
        };
        ensure(witness_check(&rep, &w).map_err(e)?, || format!("fixture {fixture}: witness rejected"))?;
        for t in 0..100 {
            let kind = r.random_range(0..common::MUTATION_KINDS);
            let bad = common::mutate(&w, rep.dim(), kind, &mut r);
            ensure(!witness_check(&rep, &bad).map_err(e)?, || {
                format!("fixture {fixture}: mutation {t} (kind {kind}) accepted")
            })?;
            rejected += 1;
        }
    }
    Ok(format!("10 witnesses accepted, {rejected}/{rejected} mutations rejected"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let field = Field::gf(2).map_err(e)?;
    let mut equal = 0;
    for inst in 0..20u64 {
        let mut r = rng::stream(5, inst);
        let gens = (0..2).map(|_| DenseMatrix::random_invertible(&field, 4, &mut r)).collect();
        let rep = Representation::new(&field, 4, gens).map_err(e)?;
        let exact = cheeger_exact(&rep, 1 << 20).map_err(e)?;
        let sampled = cheeger_random(&rep, 10_000, inst).map_err(e)?;
        ensure(sampled.min_ratio >= exact.min_ratio, || {
            format!("instance {inst}: sampled {} below exact {}", sampled.min_ratio, exact.min_ratio)
        })?;
        equal += (sampled.min_ratio == exact.min_ratio) as usize;
    }
    ensure(equal * 10 >= 20 * 9, || format!("equality in {equal}/20"))?;

    // generators fixing e_1 leave span{e_1} invariant
    for inst in 0..5u64 {
        let mut r = rng::stream(55, inst);
        let gens = (0..2)
            .map(|_| loop {
                let mut m = DenseMatrix::random(&field, 4, 4, &mut r);
                m.set(0, 0, Scalar::ONE);
                for i in 1..4 {
                    m.set(i, 0, Scalar::ZERO);
                }
                if m.is_invertible() {
                    break m;
                }
            })
            .collect();
        let rep = Representation::new(&field, 4, gens).map_err(e)?;
        let exact = cheeger_exact(&rep, 1 << 20).map_err(e)?;
        ensure(exact.min_ratio == Rational::from_integer(1), || {
            format!("planted line: min ratio {}", exact.min_ratio)
        })?;
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("sampled >= exact on 20/20, equal on {equal}/20, planted lines give 1, {:?}", start.elapsed()))
}

fn criterion_6() -> Outcome {
    let field = Field::gf(2).map_err(e)?;
    let ms = [8usize, 16, 32, 64];
    let mut checked = 0;
    for d in 1..=2usize {
        // every nonzero element of span{1, .., x^d}, padded to the basis 1..x^(2d)
        let elements: Vec<Vec<Scalar>> = (1u32..1 << (d + 1))
            .map(|bits| (0..=2 * d).map(|j| Scalar(if j <= d { (bits >> j) & 1 } else { 0 })).collect())
            .collect();
        let j = elements
            .iter()
            .map(|el| RankBound {
                element: el.clone(),
                bound: Rational::from_integer(1) - frac(2, ms[0]),
            })
            .collect();
        let data = truncation_sofic_data(&field, &ms, d, j).map_err(e)?;
        let mut prev: Option<Rational> = None;
        for (k, &m) in ms.iter().enumerate() {
            let rep = sofic_check(&data, k + 1).map_err(e)?;
            ensure(rep.all(), || format!("d = {d}, m = {m}: {rep:?}"))?;
            ensure(rep.s_k <= frac(2 * d, m), || format!("s_{m} = {} above 2d/m", rep.s_k))?;
            if let Some(p) = prev {
                ensure(rep.s_k < p, || format!("s_m not decreasing at m = {m}"))?;
            }
            prev = Some(rep.s_k);
            for el in &elements {
                let rank = data.maps[k].phi(el).map_err(e)?.rank();
                ensure(frac(rank, m) >= Rational::from_integer(1) - frac(2, m), || {
                    format!("d = {d}, m = {m}: rank {rank} below 1 - 2/m")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("m = 8..64 pass for d = 1, 2; {checked} rank bounds hold"))
}

fn criterion_7() -> Outcome {
    let field = Field::gf(2).map_err(e)?;
    let mut r = rng::stream(7, 0);
    for t in 0..500 {
        let n = r.random_range(2..=50);
        let rank = r.random_range(0..n);
        let a = DenseMatrix::random(&field, n, rank, &mut r);
        let b = DenseMatrix::random(&field, rank, n, &mut r);
        let m = a.mul(&b).map_err(e)?;
        let defect = n - m.rank();
        let fixed = repair_to_invertible(&m).map_err(e)?;
        ensure(fixed.is_invertible(), || format!("matrix {t}: output singular"))?;
        let dist = fixed.sub(&m).map_err(e)?.rank();
        ensure(dist == defect, || format!("matrix {t}: distance {dist}, defect {defect}"))?;
    }
    let mut exhaustive = 0;
    for n in 2..=3usize {
        let all: Vec<DenseMatrix> = (0u32..1 << (n * n))
            .map(|bits| {
                let rows: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| (bits >> (i * n + j)) & 1).collect()).collect();
                DenseMatrix::from_rows(&field, &rows)
            })
            .collect::<Result<_, _>>()
            .map_err(e)?;
        let invertible: Vec<&DenseMatrix> = all.iter().filter(|m| m.is_invertible()).collect();
        for m in &all {
            let fixed = repair_to_invertible(m).map_err(e)?;
            let dist = fixed.sub(m).map_err(e)?.rank();
            let best = invertible.iter().map(|x| x.sub(m).map(|d| d.rank())).collect::<Result<Vec<_>, _>>().map_err(e)?;
            let best = best.into_iter().min().unwrap_or(usize::MAX);
            ensure(fixed.is_invertible() && dist == best, || {
                format!("{:?}: distance {dist}, optimum {best}", m.to_int_rows())
            })?;
            exhaustive += 1;
        }
    }
    Ok(format!("500 random repairs exact, {exhaustive} small matrices minimal"))
}

fn criterion_8() -> Outcome {
    let base = Field::gf(2).map_err(e)?;
    let opts = EquivOptions {
        sizes: vec![1, 2, 3, 4],
        trials: 200,
        ext_deg: 8,
        seed: 8,
    };
    let common = match equiv_probabilistic(&hua_left(&base), &hua_right(), &base, &opts).map_err(e)? {
        Verdict::Consistent { common, .. } if common >= 50 => common,
        other => return Err(format!("Hua: {other:?}")),
    };

    let ab = parse_ratexpr("z1*z2", &base).map_err(e)?;
    let ba = parse_ratexpr("z2*z1", &base).map_err(e)?;
    let cx = match equiv_probabilistic(&ab, &ba, &base, &EquivOptions { trials: 100, ..opts.clone() }).map_err(e)? {
        Verdict::Counterexample(c) => c,
        other => return Err(format!("z1*z2 vs z2*z1: {other:?}")),
    };
    // re-verify the reported point independently
    let big = Field::from_spec(&cx.field);
    let point = cx
        .point
        .iter()
        .map(|m| DenseMatrix::from_rows(&big, m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    let direct = point[0].mul(&point[1]).map_err(e)?;
    let swapped = point[1].mul(&point[0]).map_err(e)?;
    ensure(direct != swapped && direct.to_int_rows() == cx.left, || "counterexample does not reproduce".into())?;
    let via_eval = evaluate(&ab, &base, &point).map_err(e)?;
    ensure(via_eval.value() == Some(&direct), || "evaluation disagrees with direct product".into())?;

    let mut pairs = 0;
    for (fi, field) in [Field::gf(2).map_err(e)?, Field::gf_pow(2, 8).map_err(e)?].iter().enumerate() {
        let mut r = rng::stream(88, fi as u64);
        for _ in 0..500 {
            let n = r.random_range(1..=8);
            let a = DenseMatrix::random_invertible(field, n, &mut r);
            let b = DenseMatrix::random_invertible(field, n, &mut r);
            let lhs = a.inverse().map_err(e)?.sub(&b.inverse().map_err(e)?).map_err(e)?.rank();
            ensure(lhs == a.sub(&b).map_err(e)?.rank(), || "inverse perturbation rank differs".into())?;
            pairs += 1;
        }
    }
    Ok(format!(
        "Hua consistent on {common} samples, commutator counterexample at trial {}, {pairs} inverse pairs",
        cx.trial
    ))
}

fn criterion_9() -> Outcome {
    let fields = [Field::gf(2).map_err(e)?, Field::gf(3).map_err(e)?, Field::gf_pow(2, 3).map_err(e)?];
    let mut r = rng::stream(9, 0);
    for t in 0..1000 {
        let field = &fields[t % 3];
        let rr = r.random_range(1..=3);
        let el = AlgebraElement::random(field, rr, 6, 5, &mut r);
        let back = parse_element(&el.to_string(), field, rr).map_err(e)?;
        ensure(back == el, || format!("element `{el}` changed"))?;
        let ex = common::random_ratexpr(field, 3, 4, &mut r);
        let back = parse_ratexpr(&ex.to_string(), field).map_err(e)?;
        ensure(back == ex, || format!("expression `{ex}` changed"))?;
    }

    // malformed corpus: fixed cases plus random single-byte edits of valid text
    let f = &fields[1];
    let mut corpus: Vec<String> = ["", "+", "g", "g0", "g1^", "g1 g2", "3*g1", "z0", "inv(", "inv(z1", "(z1", "z1 +", ")"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let alphabet = b"gz01239inv()+-*^ e";
    for _ in 0..2000 {
        let mut s = if r.random_bool(0.5) {
            AlgebraElement::random(f, 2, 4, 3, &mut r).to_string().into_bytes()
        } else {
            common::random_ratexpr(f, 2, 3, &mut r).to_string().into_bytes()
        };
        let pos = r.random_range(0..=s.len());
        match r.random_range(0..3) {
            0 if pos < s.len() => {
                s.remove(pos);
            }
            1 if pos < s.len() => s[pos] = alphabet[r.random_range(0..alphabet.len())],
            _ => s.insert(pos, alphabet[r.random_range(0..alphabet.len())]),
        }
        corpus.push(String::from_utf8(s).map_err(e)?);
    }
    let mut errors = 0;
    for text in &corpus {
        let results = catch_unwind(AssertUnwindSafe(|| {
            [parse_element(text, f, 2).err(), parse_ratexpr(text, f).err()]
        }))
        .map_err(|_| format!("parser panicked on `{text}`"))?;
        for err in results.into_iter().flatten() {
            ensure(err.position <= text.len(), || format!("`{text}`: position {} past end", err.position))?;
            errors += 1;
        }
    }
    Ok(format!("2000 round trips exact; {} malformed inputs, {errors} positioned errors, no panics", corpus.len()))
}

fn criterion_10() -> Outcome {
    let family = r#"{"family":"random_invertible","seed":10,"n":5,"r":2}"#;
    let blocks = r#"{"family":"block_diagonal","blocks":[{"family":"cyclic_regular"},{"family":"abelian_quotient","moduli":[2]}]}"#;
    let runs: Vec<Vec<&str>> = vec![
        vec!["profile", "--family", family, "--k", "1..6", "--element", "g1 + g2^-1"],
        vec!["tile", "--laurent", "40", "--pool-budget", "64", "--seed", "3"],
        vec!["hyperfinite-search", "--family", blocks, "--k", "3", "--epsilon", "1/4", "--max-dim", "6", "--seed", "4"],
        vec!["cheeger", "--family", family, "--trials", "2000", "--seed", "5"],
        vec!["ncrat-eval", "--expr", "inv(z1 + z2)*z1", "--random", "4", "--ext-deg", "3", "--seed", "6"],
        vec!["ncrat-equiv", "--left", "z1*z2", "--right", "z2*z1", "--seed", "7"],
        vec!["ncrat-equiv", "--left", "z1 - inv(inv(z1) + inv(inv(z2) - z1))", "--right", "z1*z2*z1", "--seed", "7"],
        vec!["repair", "--random", "30", "--rank", "20", "--seed", "8"],
    ];
    let bin = env!("CARGO_BIN_EXE_linrep");
    let run = |args: &[&str], threads: &str| -> Result<(Option<i32>, Vec<u8>), String> {
        let out = Command::new(bin)
            .args(args)
            .env("LINREP_THREADS", threads)
            .output()
            .map_err(e)?;
        Ok((out.status.code(), out.stdout))
    };
    for args in &runs {
        let first = run(args, "1")?;
        ensure(first.0 != Some(1) && !first.1.is_empty(), || format!("{args:?} failed: {:?}", first.0))?;
        for threads in ["1", "4"] {
            let again = run(args, threads)?;
            ensure(again == first, || format!("{args:?} differs with {threads} threads"))?;
        }
    }
    Ok(format!("{} randomized commands byte-identical across reruns and 1/4 threads", runs.len()))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        let outcome = catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {n:>2}: PASS  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
