//! C ABI over `otkit`.
//!
//! Terms cross the boundary as opaque `OtkTerm` handles owned by the
//! caller and released with `otk_term_free`.  Every fallible call returns
//! an `OtkStatus`; on failure `otk_last_error` describes the most recent
//! error on the calling thread.  Strings handed out by the library are
//! released with `otk_string_free`.

use otkit::suites::{run_suite, SuiteSpec};
use otkit::towers::build_tower;
use otkit::validity::{in_slice, is_valid};
use otkit::{compare, parse_term, Config, Term};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OtkStatus {
    OtkOk = 0,
    OtkErrNull = 1,
    OtkErrUtf8 = 2,
    OtkErrParse = 3,
    OtkErrLevels = 4,
    OtkErrInvalid = 5,
    OtkErrTower = 6,
    OtkErrSuite = 7,
    OtkErrMismatch = 8,
    OtkErrPanic = 9,
}

/// A parsed term together with its number of levels.
pub struct OtkTerm {
    term: Term,
    cfg: Config,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: OtkStatus, msg: impl Into<String>) -> OtkStatus {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    status
}

fn guard(f: impl FnOnce() -> OtkStatus) -> OtkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(OtkStatus::OtkErrPanic, "internal panic"),
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, OtkStatus> {
    if s.is_null() {
        return Err(fail(OtkStatus::OtkErrNull, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(OtkStatus::OtkErrUtf8, "string is not UTF-8"))
}

unsafe fn term<'a>(t: *const OtkTerm) -> Result<&'a OtkTerm, OtkStatus> {
    t.as_ref().ok_or_else(|| fail(OtkStatus::OtkErrNull, "null term handle"))
}

fn config(n: u32) -> Result<Config, OtkStatus> {
    if n < 3 {
        return Err(fail(OtkStatus::OtkErrLevels, format!("levels must be at least 3, got {n}")));
    }
    Ok(Config::new(n as usize))
}

unsafe fn put_string(s: String, out: *mut *mut c_char) -> OtkStatus {
    if out.is_null() {
        return fail(OtkStatus::OtkErrNull, "null output pointer");
    }
    *out = CString::new(s).unwrap_or_default().into_raw();
    OtkStatus::OtkOk
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message of the last failed call on this thread; empty if none.  The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn otk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `src` as a term over `levels` reflection levels (at least 3).
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn otk_term_parse(src: *const c_char, levels: u32, out: *mut *mut OtkTerm) -> OtkStatus {
    guard(|| {
        if out.is_null() {
            return fail(OtkStatus::OtkErrNull, "null output pointer");
        }
        let cfg = tri!(config(levels));
        let s = tri!(text(src));
        match parse_term(s, cfg) {
            Ok(term) => {
                *out = Box::into_raw(Box::new(OtkTerm { term, cfg }));
                OtkStatus::OtkOk
            }
            Err(e) => fail(OtkStatus::OtkErrParse, e.to_string()),
        }
    })
}

/// Releases a handle from `otk_term_parse`; null is ignored.
///
/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn otk_term_free(t: *mut OtkTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Canonical printed form; release with `otk_string_free`.
///
/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn otk_term_to_string(t: *const OtkTerm, out: *mut *mut c_char) -> OtkStatus {
    guard(|| {
        let t = tri!(term(t));
        put_string(t.term.to_string(), out)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn otk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Term length.
///
/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn otk_term_length(t: *const OtkTerm, out: *mut usize) -> OtkStatus {
    guard(|| {
        let t = tri!(term(t));
        if out.is_null() {
            return fail(OtkStatus::OtkErrNull, "null output pointer");
        }
        *out = t.term.len();
        OtkStatus::OtkOk
    })
}

/// Writes -1, 0 or 1 as `a` is below, equal to or above `b`.  Both
/// handles must have the same number of levels.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn otk_term_compare(a: *const OtkTerm, b: *const OtkTerm, out: *mut i32) -> OtkStatus {
    guard(|| {
        let (a, b) = (tri!(term(a)), tri!(term(b)));
        if out.is_null() {
            return fail(OtkStatus::OtkErrNull, "null output pointer");
        }
        if a.cfg != b.cfg {
            return fail(OtkStatus::OtkErrMismatch, "terms have different numbers of levels");
        }
        *out = compare(&a.term, &b.term) as i32;
        OtkStatus::OtkOk
    })
}

/// Writes whether the term is valid.
///
/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn otk_term_is_valid(t: *const OtkTerm, out: *mut bool) -> OtkStatus {
    guard(|| {
        let t = tri!(term(t));
        if out.is_null() {
            return fail(OtkStatus::OtkErrNull, "null output pointer");
        }
        *out = is_valid(&t.term, t.cfg);
        OtkStatus::OtkOk
    })
}

/// Writes whether the term lies in slice `n`.
///
/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn otk_term_in_slice(t: *const OtkTerm, n: u32, out: *mut bool) -> OtkStatus {
    guard(|| {
        let t = tri!(term(t));
        if out.is_null() {
            return fail(OtkStatus::OtkErrNull, "null output pointer");
        }
        *out = in_slice(&t.term, n as usize);
        OtkStatus::OtkOk
    })
}

/// The tower of a collapsing term as an s-expression; release with
/// `otk_string_free`.
///
/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn otk_term_tower(t: *const OtkTerm, out: *mut *mut c_char) -> OtkStatus {
    guard(|| {
        let t = tri!(term(t));
        if !is_valid(&t.term, t.cfg) {
            return fail(OtkStatus::OtkErrInvalid, format!("{} is not a valid term", t.term));
        }
        match build_tower(&t.term, t.cfg) {
            Ok(tower) => put_string(tower.to_string(), out),
            Err(e) => fail(OtkStatus::OtkErrTower, e.to_string()),
        }
    })
}

/// Runs a named property suite.  `count` and `max_len` of 0 pick the
/// suite's defaults.  Writes the number of cases run and failures found.
///
/// # Safety
/// `name` must be a NUL-terminated string; the outputs writable pointers.
#[no_mangle]
pub unsafe extern "C" fn otk_suite_run(
    name: *const c_char,
    seed: u64,
    count: usize,
    max_len: usize,
    levels: u32,
    cases: *mut usize,
    failures: *mut usize,
) -> OtkStatus {
    guard(|| {
        let name = tri!(text(name));
        let cfg = tri!(config(levels));
        if cases.is_null() || failures.is_null() {
            return fail(OtkStatus::OtkErrNull, "null output pointer");
        }
        let nonzero = |x: usize| (x > 0).then_some(x);
        let spec =
            SuiteSpec { seed, count: nonzero(count), max_len: nonzero(max_len), levels: cfg.levels, slice: None };
        match run_suite(name, &spec) {
            Ok(r) => {
                *cases = r.cases;
                *failures = r.failures.len();
                OtkStatus::OtkOk
            }
            Err(e) => fail(OtkStatus::OtkErrSuite, e.to_string()),
        }
    })
}
