//! C ABI over `anomalia`.
//!
//! Every fallible function returns an [`AnomaliaStatus`] and writes its result
//! through an out-pointer. On failure [`anomalia_last_error_message`] describes
//! the error for the calling thread. Handles are opaque and must be released
//! with the matching `*_free`; strings returned by the library are released
//! with [`anomalia_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use anomalia::error::Error;
use anomalia::json::{parse, render, ExtensionInput, ExtensionJson, ReportJson};
use anomalia::lagrangian::{
    boxplus, find_extension_isomorphism, standard_extension, trivialize, twisted_double_cyclic,
    LagrangianExtension,
};
use anomalia::orbifold::{is_non_anomalous, orbifold_report, CentralCharge, OrbifoldReport};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnomaliaStatus {
    Ok = 0,
    InvalidInput = 1,
    ResourceLimit = 2,
    Degenerate = 3,
    ModularityFailure = 4,
    InternalError = 5,
    NullPointer = 6,
    Panic = 7,
}

/// A Lagrangian extension of the dual of `Z_n`.
pub struct AnomaliaExtension(LagrangianExtension);

/// The anomaly report of a cyclic permutation orbifold.
pub struct AnomaliaReport(OrbifoldReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AnomaliaStatus {
    match e {
        Error::InvalidInput(_) => AnomaliaStatus::InvalidInput,
        Error::ResourceLimit { .. } => AnomaliaStatus::ResourceLimit,
        Error::Degenerate(_) | Error::DegenerateSum => AnomaliaStatus::Degenerate,
        Error::ModularityFailure(_) => AnomaliaStatus::ModularityFailure,
        Error::InternalConsistency(_) => AnomaliaStatus::InternalError,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, writes its value to `out`, and turns errors and panics into statuses.
fn guard<T>(out: *mut T, f: impl FnOnce() -> Result<T, Failure>) -> AnomaliaStatus {
    if out.is_null() {
        set_error("output pointer is null".into());
        return AnomaliaStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: checked non-null; the caller provides writable storage.
            unsafe { out.write(v) };
            AnomaliaStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is null"));
            AnomaliaStatus::NullPointer
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            AnomaliaStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or point to a live `T`.
unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

fn boxed_ext(e: LagrangianExtension) -> *mut AnomaliaExtension {
    Box::into_raw(Box::new(AnomaliaExtension(e)))
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::Lib(Error::InternalConsistency("string contains nul".into())))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn anomalia_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn anomalia_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Whether the `Z_n` orbifold of a holomorphic theory of central charge `c`
/// is non-anomalous. `c` must be a positive multiple of 8.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_is_non_anomalous(
    c: u64,
    n: u64,
    out: *mut bool,
) -> AnomaliaStatus {
    guard(out, || {
        let c = CentralCharge::new(c)?;
        if n == 0 {
            return Err(Error::InvalidInput("cycle length must be positive".into()).into());
        }
        Ok(is_non_anomalous(c, n))
    })
}

/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_orbifold_report(
    c: u64,
    n: u64,
    out: *mut *mut AnomaliaReport,
) -> AnomaliaStatus {
    guard(out, || {
        let r = orbifold_report(CentralCharge::new(c)?, n)?;
        Ok(Box::into_raw(Box::new(AnomaliaReport(r))))
    })
}

/// # Safety
/// `r` must be null or a live report; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_report_anomaly_index(
    r: *const AnomaliaReport,
    out: *mut u64,
) -> AnomaliaStatus {
    guard(out, || Ok(unsafe { deref(r, "report") }?.0.anomaly_index))
}

/// # Safety
/// `r` must be null or a live report; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_report_is_anomalous(
    r: *const AnomaliaReport,
    out: *mut bool,
) -> AnomaliaStatus {
    guard(out, || Ok(unsafe { deref(r, "report") }?.0.anomalous))
}

/// Copy of the report's representation category as an extension handle.
///
/// # Safety
/// `r` must be null or a live report; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_report_extension(
    r: *const AnomaliaReport,
    out: *mut *mut AnomaliaExtension,
) -> AnomaliaStatus {
    guard(out, || {
        Ok(boxed_ext(
            unsafe { deref(r, "report") }?.0.rep_category.clone(),
        ))
    })
}

/// The report as JSON; free with [`anomalia_string_free`].
///
/// # Safety
/// `r` must be null or a live report; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_report_to_json(
    r: *const AnomaliaReport,
    out: *mut *mut c_char,
) -> AnomaliaStatus {
    guard(out, || {
        c_string(render(&ReportJson::from_report(
            &unsafe { deref(r, "report") }?.0,
        )))
    })
}

/// # Safety
/// `r` must be null or a report from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn anomalia_report_free(r: *mut AnomaliaReport) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}

/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_standard(
    n: u64,
    out: *mut *mut AnomaliaExtension,
) -> AnomaliaStatus {
    guard(out, || Ok(boxed_ext(standard_extension(n)?)))
}

/// Twisted double of `Z_n` with class `j` (taken mod `n`).
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_twisted_double(
    n: u64,
    j: i64,
    out: *mut *mut AnomaliaExtension,
) -> AnomaliaStatus {
    guard(out, || {
        if n == 0 {
            return Err(Error::InvalidInput("cycle length must be positive".into()).into());
        }
        anomalia::group::FinAbGroup::cyclic(n.saturating_mul(n)).ensure_enumerable()?;
        Ok(boxed_ext(twisted_double_cyclic(n, j)?))
    })
}

/// Parses extension JSON, or an orbifold report JSON (its extension is used).
///
/// # Safety
/// `json` must be null or a nul-terminated string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_from_json(
    json: *const c_char,
    out: *mut *mut AnomaliaExtension,
) -> AnomaliaStatus {
    guard(out, || {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|_| Error::InvalidInput("JSON is not UTF-8".into()))?;
        Ok(boxed_ext(parse::<ExtensionInput>(text)?.to_extension()?))
    })
}

/// # Safety
/// `e` must be null or a live extension; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_to_json(
    e: *const AnomaliaExtension,
    out: *mut *mut c_char,
) -> AnomaliaStatus {
    guard(out, || {
        c_string(render(&ExtensionJson::from_extension(
            &unsafe { deref(e, "extension") }?.0,
        )))
    })
}

/// The cycle length `n`.
///
/// # Safety
/// `e` must be null or a live extension; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_cycle(
    e: *const AnomaliaExtension,
    out: *mut u64,
) -> AnomaliaStatus {
    guard(out, || Ok(unsafe { deref(e, "extension") }?.0.n()))
}

/// # Safety
/// `e` must be null or a live extension; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_anomaly_index(
    e: *const AnomaliaExtension,
    out: *mut u64,
) -> AnomaliaStatus {
    guard(out, || {
        Ok(unsafe { deref(e, "extension") }?.0.anomaly_index())
    })
}

/// # Safety
/// `a`, `b` must be null or live extensions; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_boxplus(
    a: *const AnomaliaExtension,
    b: *const AnomaliaExtension,
    out: *mut *mut AnomaliaExtension,
) -> AnomaliaStatus {
    guard(out, || {
        let (a, b) = unsafe { (deref(a, "lhs")?, deref(b, "rhs")?) };
        Ok(boxed_ext(boxplus(&a.0, &b.0)?))
    })
}

/// Whether an isometry carrying `iota` to `iota` exists.
///
/// # Safety
/// `a`, `b` must be null or live extensions; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_isomorphic(
    a: *const AnomaliaExtension,
    b: *const AnomaliaExtension,
    out: *mut bool,
) -> AnomaliaStatus {
    guard(out, || {
        let (a, b) = unsafe { (deref(a, "lhs")?, deref(b, "rhs")?) };
        Ok(find_extension_isomorphism(&a.0, &b.0)?.is_some())
    })
}

/// Whether the extension is isomorphic to the standard one.
///
/// # Safety
/// `e` must be null or a live extension; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_trivializable(
    e: *const AnomaliaExtension,
    out: *mut bool,
) -> AnomaliaStatus {
    guard(out, || {
        Ok(trivialize(&unsafe { deref(e, "extension") }?.0)?.is_some())
    })
}

/// # Safety
/// `e` must be null or an extension from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn anomalia_extension_free(e: *mut AnomaliaExtension) {
    if !e.is_null() {
        drop(unsafe { Box::from_raw(e) });
    }
}
