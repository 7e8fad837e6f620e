//! C ABI over `linrep`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`-style
//! functions and released by the matching `*_free`. Every fallible call
//! returns a [`LinrepStatus`]; on failure the message is available from
//! [`linrep_last_error`] on the same thread. Outputs are written only on
//! success. Panics are caught and reported as `LINREP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use linrep::freealg::{parse_element, AlgebraMatrix};
use linrep::gf::{DenseMatrix, Field, FieldSpec};
use linrep::hyperfin::{witness_failures, HyperfiniteWitness, WitnessFile};
use linrep::ncrat::{equiv_probabilistic, parse_ratexpr, EquivOptions, RatExpr, Verdict};
use linrep::repseq::{family_generate, normalized_rank, repair_to_invertible, FamilyDescriptor, Representation, RepresentationFile};
use linrep::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinrepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Singular = 4,
    BudgetExceeded = 5,
    Panic = 6,
}

/// Outcome of a randomized equivalence test.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinrepVerdict {
    Consistent = 0,
    Counterexample = 1,
    NoCommonDomain = 2,
}

pub struct LinrepField(Field);
pub struct LinrepMatrix(DenseMatrix);
pub struct LinrepRepresentation(Representation);
pub struct LinrepExpr(RatExpr);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(LinrepStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => LinrepStatus::Parse,
            Error::Singular => LinrepStatus::Singular,
            Error::BudgetExceeded { .. } | Error::Infeasible(_) => LinrepStatus::BudgetExceeded,
            _ => LinrepStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn set_last_error(msg: String) {
    // interior NULs cannot cross as a C string
    let msg = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

/// Runs `f`, records any failure, and converts panics to a status.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> LinrepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LinrepStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            LinrepStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(LinrepStatus::NullPointer, "null pointer argument".into())
}

/// # Safety
/// `p` is null or points to a live value of type `T`.
unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

/// # Safety
/// `p` is null or a NUL-terminated string.
unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(LinrepStatus::InvalidArgument, "string is not UTF-8".into()))
}

/// # Safety
/// `out` is null or writable.
unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// # Safety
/// `p` is null or was returned by `Box::into_raw` and not yet freed.
unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn linrep_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn linrep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `GF(p^deg)` with the default modulus.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_field_new(p: u32, deg: u32, out: *mut *mut LinrepField) -> LinrepStatus {
    guard(|| {
        let field = Field::new(FieldSpec::with_default_modulus(p, deg)?);
        put(out, boxed(LinrepField(field)))
    })
}

/// # Safety
/// `field` is a live field handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_field_order(field: *const LinrepField, out: *mut u32) -> LinrepStatus {
    guard(|| put(out, deref(field)?.0.order()))
}

/// # Safety
/// `field` is NULL or a handle from `linrep_field_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn linrep_field_free(field: *mut LinrepField) {
    free(field)
}

/// Copies `rows * cols` row-major element codes from `data`.
///
/// # Safety
/// `field` is live, `data` holds `rows * cols` readable values and `out`
/// is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_matrix_new(
    field: *const LinrepField,
    rows: usize,
    cols: usize,
    data: *const u32,
    out: *mut *mut LinrepMatrix,
) -> LinrepStatus {
    guard(|| {
        let field = &deref(field)?.0;
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Fail(LinrepStatus::InvalidArgument, "matrix size overflows".into()))?;
        if data.is_null() && len > 0 {
            return Err(null());
        }
        let codes: &[u32] = if len == 0 { &[] } else { std::slice::from_raw_parts(data, len) };
        let scalars = codes.iter().map(|&c| field.scalar(c)).collect::<Result<Vec<_>, _>>()?;
        let m = DenseMatrix::new(field, rows, cols, scalars)?;
        put(out, boxed(LinrepMatrix(m)))
    })
}

/// # Safety
/// `m` is live; `rows` and `cols` are writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_matrix_dims(m: *const LinrepMatrix, rows: *mut usize, cols: *mut usize) -> LinrepStatus {
    guard(|| {
        let m = &deref(m)?.0;
        if rows.is_null() || cols.is_null() {
            return Err(null());
        }
        put(rows, m.rows())?;
        put(cols, m.cols())
    })
}

/// Writes the row-major element codes into `buf`, which holds `len` values.
///
/// # Safety
/// `m` is live and `buf` has room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn linrep_matrix_data(m: *const LinrepMatrix, buf: *mut u32, len: usize) -> LinrepStatus {
    guard(|| {
        let m = &deref(m)?.0;
        let need = m.rows() * m.cols();
        if len < need {
            return Err(Fail(
                LinrepStatus::InvalidArgument,
                format!("buffer holds {len} values, matrix has {need}"),
            ));
        }
        if buf.is_null() && need > 0 {
            return Err(null());
        }
        for (k, s) in m.data().iter().enumerate() {
            buf.add(k).write(s.code());
        }
        Ok(())
    })
}

/// # Safety
/// `m` is live and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_matrix_rank(m: *const LinrepMatrix, out: *mut usize) -> LinrepStatus {
    guard(|| put(out, deref(m)?.0.rank()))
}

/// `LINREP_STATUS_SINGULAR` when `m` has no inverse.
///
/// # Safety
/// `m` is live and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_matrix_inverse(m: *const LinrepMatrix, out: *mut *mut LinrepMatrix) -> LinrepStatus {
    guard(|| {
        let inv = deref(m)?.0.inverse()?;
        put(out, boxed(LinrepMatrix(inv)))
    })
}

/// Invertible matrix at rank distance `n - rank(m)` from square `m`.
///
/// # Safety
/// `m` is live and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_matrix_repair(m: *const LinrepMatrix, out: *mut *mut LinrepMatrix) -> LinrepStatus {
    guard(|| {
        let fixed = repair_to_invertible(&deref(m)?.0)?;
        put(out, boxed(LinrepMatrix(fixed)))
    })
}

/// # Safety
/// `m` is NULL or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn linrep_matrix_free(m: *mut LinrepMatrix) {
    free(m)
}

/// Representation from its JSON file form.
///
/// # Safety
/// `json` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_rep_from_json(json: *const c_char, out: *mut *mut LinrepRepresentation) -> LinrepStatus {
    guard(|| {
        let file: RepresentationFile = serde_json::from_str(text(json)?)
            .map_err(|e| Fail(LinrepStatus::Parse, e.to_string()))?;
        put(out, boxed(LinrepRepresentation(Representation::from_file(&file)?)))
    })
}

/// Member `k` of the family described by a JSON descriptor.
///
/// # Safety
/// `descriptor` is a NUL-terminated string, `field` is live and `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_rep_family(
    descriptor: *const c_char,
    field: *const LinrepField,
    k: usize,
    out: *mut *mut LinrepRepresentation,
) -> LinrepStatus {
    guard(|| {
        let desc: FamilyDescriptor = serde_json::from_str(text(descriptor)?)
            .map_err(|e| Fail(LinrepStatus::Parse, e.to_string()))?;
        let rep = family_generate(&desc, &deref(field)?.0, k)?;
        put(out, boxed(LinrepRepresentation(rep)))
    })
}

/// # Safety
/// `rep` is live and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_rep_dim(rep: *const LinrepRepresentation, out: *mut usize) -> LinrepStatus {
    guard(|| put(out, deref(rep)?.0.dim()))
}

/// Rank of the image of a group-algebra element and the dimension it is
/// normalized by.
///
/// # Safety
/// `rep` is live, `element` is a NUL-terminated string, and `rank` and `n`
/// are writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_rep_normalized_rank(
    rep: *const LinrepRepresentation,
    element: *const c_char,
    rank: *mut usize,
    n: *mut usize,
) -> LinrepStatus {
    guard(|| {
        let rep = &deref(rep)?.0;
        let a = AlgebraMatrix::single(parse_element(text(element)?, rep.field(), rep.r()).map_err(Error::from)?);
        let nr = normalized_rank(rep, &a)?;
        if rank.is_null() || n.is_null() {
            return Err(null());
        }
        put(rank, nr.rank)?;
        put(n, nr.n_k)
    })
}

/// # Safety
/// `rep` is NULL or a live representation handle.
#[no_mangle]
pub unsafe extern "C" fn linrep_rep_free(rep: *mut LinrepRepresentation) {
    free(rep)
}

/// Sets `valid` to whether the JSON witness passes every condition;
/// [`linrep_last_error`] is not touched when it merely fails a check.
///
/// # Safety
/// `rep` is live, `witness_json` is a NUL-terminated string and `valid` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_witness_check(
    rep: *const LinrepRepresentation,
    witness_json: *const c_char,
    valid: *mut bool,
) -> LinrepStatus {
    guard(|| {
        let rep = &deref(rep)?.0;
        let file: WitnessFile = serde_json::from_str(text(witness_json)?)
            .map_err(|e| Fail(LinrepStatus::Parse, e.to_string()))?;
        let w = HyperfiniteWitness::from_file(&file, rep)?;
        put(valid, witness_failures(rep, &w)?.is_empty())
    })
}

/// Parses a rational expression. On a parse failure the byte offset is
/// stored in `error_pos` when it is not NULL.
///
/// # Safety
/// `field` is live, `expr` is a NUL-terminated string, `out` is writable
/// and `error_pos` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_expr_parse(
    field: *const LinrepField,
    expr: *const c_char,
    out: *mut *mut LinrepExpr,
    error_pos: *mut usize,
) -> LinrepStatus {
    guard(|| {
        match parse_ratexpr(text(expr)?, &deref(field)?.0) {
            Ok(e) => put(out, boxed(LinrepExpr(e))),
            Err(err) => {
                if !error_pos.is_null() {
                    error_pos.write(err.position);
                }
                Err(Error::Parse(err).into())
            }
        }
    })
}

/// Canonical text of `expr`; release with [`linrep_string_free`].
///
/// # Safety
/// `expr` is live and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_expr_print(expr: *const LinrepExpr, out: *mut *mut c_char) -> LinrepStatus {
    guard(|| {
        let s = CString::new(deref(expr)?.0.to_string()).expect("printer emits no NUL");
        put(out, s.into_raw())
    })
}

/// # Safety
/// `expr` is NULL or a live expression handle.
#[no_mangle]
pub unsafe extern "C" fn linrep_expr_free(expr: *mut LinrepExpr) {
    free(expr)
}

/// Randomized equivalence test over sizes 1..=4 in the degree-`ext_deg`
/// extension of `field`.
///
/// # Safety
/// All handles are live and `verdict` is writable.
#[no_mangle]
pub unsafe extern "C" fn linrep_ncrat_equiv(
    left: *const LinrepExpr,
    right: *const LinrepExpr,
    field: *const LinrepField,
    trials: u64,
    ext_deg: u32,
    seed: u64,
    verdict: *mut LinrepVerdict,
) -> LinrepStatus {
    guard(|| {
        let opts = EquivOptions {
            sizes: vec![1, 2, 3, 4],
            trials,
            ext_deg,
            seed,
        };
        let v = equiv_probabilistic(&deref(left)?.0, &deref(right)?.0, &deref(field)?.0, &opts)?;
        put(
            verdict,
            match v {
                Verdict::Consistent { .. } => LinrepVerdict::Consistent,
                Verdict::Counterexample(_) => LinrepVerdict::Counterexample,
                Verdict::NoCommonDomain { .. } => LinrepVerdict::NoCommonDomain,
            },
        )
    })
}
