//! C ABI for `padic-vertex`.
//!
//! Every entry point returns a [`PvStatus`]. Results come back through out
//! pointers; strings and handles allocated here must be released with
//! [`pv_string_free`], [`pv_ts_free`] and [`pv_vertex_free`]. After a
//! non-`OK` status, [`pv_last_error`] describes the failure on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use padic_vertex::congruence::{dwork_check, Convention};
use padic_vertex::engine::{compute_ts, ts_sequence, TsPolynomial};
use padic_vertex::padic::{teichmuller_lift, OmegaParam, PrimeData};
use padic_vertex::points::count_curve;
use padic_vertex::vertex::{vertex_closed_form_k1, vertex_localization, VertexSeries};
use padic_vertex::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    VerificationFailed = 3,
    Arithmetic = 4,
    Panic = 5,
}

/// A computed `T_s(z)`.
pub struct PvTs(TsPolynomial);

/// Exact vertex function coefficients `c_0, …, c_D`.
pub struct PvVertex(VertexSeries);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior NUL"));
}

fn status_of(e: &Error) -> PvStatus {
    match e {
        Error::InvalidParameter(_) | Error::DomainViolation(_) => PvStatus::InvalidArgument,
        _ => PvStatus::Arithmetic,
    }
}

fn guard(f: impl FnOnce() -> Result<PvStatus, (PvStatus, String)>) -> PvStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            PvStatus::Panic
        }
    }
}

fn lift<T>(r: padic_vertex::Result<T>) -> Result<T, (PvStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (PvStatus, String) {
    (PvStatus::NullPointer, "null pointer argument".into())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("decimal strings have no NUL").into_raw()
}

fn family(k: u32, n: u32, r: u64, q: u64) -> Result<OmegaParam, (PvStatus, String)> {
    lift(padic_vertex::quiver::QuiverModel::new(k as usize, n as usize))?;
    lift(OmegaParam::new(r, q))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread (empty after success).
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn pv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Compute `T_s(z)` for `T*Gr(k, n)` with `ω = r/q`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn pv_ts_compute(
    k: u32,
    n: u32,
    r: u64,
    q: u64,
    p: u64,
    s: u32,
    out: *mut *mut PvTs,
) -> PvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let omega = family(k, n, r, q)?;
        let prime = lift(PrimeData::new(p, s, &omega))?;
        let t = lift(compute_ts(k as usize, n as usize, &omega, &prime))?;
        *out = Box::into_raw(Box::new(PvTs(t)));
        Ok(PvStatus::Ok)
    })
}

/// # Safety
/// `ts` must come from [`pv_ts_compute`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pv_ts_free(ts: *mut PvTs) {
    if !ts.is_null() {
        drop(Box::from_raw(ts));
    }
}

/// Degree of `T_s` (`-1` for the zero polynomial).
///
/// # Safety
/// `ts` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pv_ts_degree(ts: *const PvTs, out: *mut i64) -> PvStatus {
    guard(|| {
        let (Some(t), false) = (ts.as_ref(), out.is_null()) else {
            return Err(null());
        };
        *out = t.0.degree().map_or(-1, |d| d as i64);
        Ok(PvStatus::Ok)
    })
}

/// Normalizing sign `σ_s` with `signed = σ_s · unsigned`.
///
/// # Safety
/// `ts` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pv_ts_sign(ts: *const PvTs, out: *mut i32) -> PvStatus {
    guard(|| {
        let (Some(t), false) = (ts.as_ref(), out.is_null()) else {
            return Err(null());
        };
        *out = t.0.sign as i32;
        Ok(PvStatus::Ok)
    })
}

/// Coefficient of `z^index` as a decimal string; `is_signed` selects the
/// normalized (`T_s(0) = 1`) convention. Free with [`pv_string_free`].
///
/// # Safety
/// `ts` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pv_ts_coeff_str(
    ts: *const PvTs,
    index: usize,
    is_signed: bool,
    out: *mut *mut c_char,
) -> PvStatus {
    guard(|| {
        let (Some(t), false) = (ts.as_ref(), out.is_null()) else {
            return Err(null());
        };
        let poly = if is_signed { &t.0.signed } else { &t.0.unsigned };
        *out = to_c_string(poly.coeff(index).to_string());
        Ok(PvStatus::Ok)
    })
}

/// Teichmüller lift of `u` modulo `p^s` as a decimal string.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_teichmuller_lift(u: u64, p: u64, s: u32, out: *mut *mut c_char) -> PvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        if p < 3 || !padic_vertex::padic::is_prime(p) || s == 0 {
            return Err((PvStatus::InvalidArgument, "p must be an odd prime and s ≥ 1".into()));
        }
        let t = lift(teichmuller_lift(u % p, p, s))?;
        *out = to_c_string(t.value().to_string());
        Ok(PvStatus::Ok)
    })
}

/// Dwork congruence at level `s` in the signed convention. Returns `OK`
/// when it holds and `VERIFICATION_FAILED` otherwise. When `report_json`
/// is non-null it receives the JSON report.
///
/// # Safety
/// `report_json` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn pv_dwork_check(
    k: u32,
    n: u32,
    r: u64,
    q: u64,
    p: u64,
    s: u32,
    report_json: *mut *mut c_char,
) -> PvStatus {
    guard(|| {
        let omega = family(k, n, r, q)?;
        lift(PrimeData::new(p, s + 1, &omega))?;
        let ts = lift(ts_sequence(k as usize, n as usize, &omega, p, s + 1))?;
        let report = lift(dwork_check(&ts, s, Convention::Signed))?;
        if !report_json.is_null() {
            *report_json = to_c_string(serde_json::to_string(&report).expect("report serializes"));
        }
        if report.passed() {
            Ok(PvStatus::Ok)
        } else {
            Err((PvStatus::VerificationFailed, report.summary()))
        }
    })
}

/// Vertex function coefficients through `z^d_max` (closed form for
/// `k = 1`, fixed-point localization otherwise).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_vertex_compute(
    k: u32,
    n: u32,
    r: u64,
    q: u64,
    d_max: usize,
    out: *mut *mut PvVertex,
) -> PvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let omega = family(k, n, r, q)?;
        let v = if k == 1 {
            lift(vertex_closed_form_k1(n as usize, &omega, d_max))?
        } else {
            lift(vertex_localization(k as usize, n as usize, &omega, d_max))?
        };
        *out = Box::into_raw(Box::new(PvVertex(v)));
        Ok(PvStatus::Ok)
    })
}

/// Number of coefficients held.
///
/// # Safety
/// `v` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pv_vertex_len(v: *const PvVertex, out: *mut usize) -> PvStatus {
    guard(|| {
        let (Some(v), false) = (v.as_ref(), out.is_null()) else {
            return Err(null());
        };
        *out = v.0.coeffs.len();
        Ok(PvStatus::Ok)
    })
}

/// Coefficient `c_index` as `"num/den"` (or an integer string).
///
/// # Safety
/// `v` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pv_vertex_coeff_str(v: *const PvVertex, index: usize, out: *mut *mut c_char) -> PvStatus {
    guard(|| {
        let (Some(v), false) = (v.as_ref(), out.is_null()) else {
            return Err(null());
        };
        let c = v.0.coeffs.get(index).ok_or((
            PvStatus::InvalidArgument,
            format!("index {index} out of range (len {})", v.0.coeffs.len()),
        ))?;
        *out = to_c_string(c.to_string());
        Ok(PvStatus::Ok)
    })
}

/// # Safety
/// `v` must come from [`pv_vertex_compute`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pv_vertex_free(v: *mut PvVertex) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Point count `N` and `M` on `y^q = x^{q-r}(1-x)^r(z0-x)^r` over `F_p`.
/// Returns `VERIFICATION_FAILED` if any of the count identities fails.
///
/// # Safety
/// `points` and `m` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_count_curve(r: u64, q: u64, p: u64, z0: u64, points: *mut u64, m: *mut u64) -> PvStatus {
    guard(|| {
        if points.is_null() || m.is_null() {
            return Err(null());
        }
        let rep = lift(count_curve(r, q, p, z0))?;
        *points = rep.points;
        *m = rep.m.unwrap_or(0);
        if rep.passed() {
            Ok(PvStatus::Ok)
        } else {
            Err((PvStatus::VerificationFailed, format!("count identities fail at z0 = {z0}")))
        }
    })
}

/// Borrow the last error as a Rust string (for tests and Rust callers).
pub fn last_error_message() -> String {
    // SAFETY: pv_last_error returns a pointer into thread-local storage
    // that stays valid until the next call on this thread.
    unsafe { CStr::from_ptr(pv_last_error()) }.to_string_lossy().into_owned()
}
