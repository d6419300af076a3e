//! C interface to torix.
//!
//! Fans are opaque handles created by [`torix_fan_from_json`] and released
//! with [`torix_fan_free`]. Functions report failure through a
//! [`TorixStatus`]; the message for the most recent failure on the calling
//! thread is available from [`torix_last_error`]. Strings returned through
//! out-pointers are owned by the caller and must be released with
//! [`torix_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use torix::divisor::class_group;
use torix::fan::{validate_fan, Fan, RawFan, ValidationOptions};
use torix::frobenius::{frobenius_decompose, EnumerationOptions};
use torix::{report, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorixStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidFan = 4,
    DomainError = 5,
    CapExceeded = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// A validated fan.
pub struct TorixFan {
    fan: Fan,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: TorixStatus, msg: impl Into<String>) -> TorixStatus {
    set_error(msg);
    status
}

fn domain(e: Error) -> TorixStatus {
    let status = match e {
        Error::CapExceeded { .. } => TorixStatus::CapExceeded,
        Error::InvalidFan(_) => TorixStatus::InvalidFan,
        _ => TorixStatus::DomainError,
    };
    fail(status, e.to_string())
}

fn guarded(body: impl FnOnce() -> TorixStatus) -> TorixStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(TorixStatus::Panic, "internal panic"),
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TorixStatus> {
    if s.is_null() {
        return Err(fail(TorixStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(TorixStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> TorixStatus {
    if out.is_null() {
        return fail(TorixStatus::NullPointer, "null output pointer");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TorixStatus::Ok
        }
        Err(_) => fail(TorixStatus::DomainError, "output contains a NUL byte"),
    }
}

/// Parses and validates a fan given as JSON text.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` valid for a
/// pointer write. On success `*out` receives a handle for [`torix_fan_free`].
#[no_mangle]
pub unsafe extern "C" fn torix_fan_from_json(
    json: *const c_char,
    strict: bool,
    out: *mut *mut TorixFan,
) -> TorixStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TorixStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let raw: RawFan = match serde_json::from_str(text) {
            Ok(r) => r,
            Err(e) => return fail(TorixStatus::ParseError, format!("malformed fan: {e}")),
        };
        let options = ValidationOptions { strict, check_intersections: false };
        match validate_fan(&raw, options) {
            Ok(fan) => {
                *out = Box::into_raw(Box::new(TorixFan { fan }));
                TorixStatus::Ok
            }
            Err(e) => domain(e),
        }
    })
}

/// # Safety
/// `fan` must be null or a handle from [`torix_fan_from_json`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn torix_fan_free(fan: *mut TorixFan) {
    if !fan.is_null() {
        drop(Box::from_raw(fan));
    }
}

/// Rank of the lattice, or 0 for a null handle.
///
/// # Safety
/// `fan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn torix_fan_rank(fan: *const TorixFan) -> usize {
    fan.as_ref().map_or(0, |f| f.fan.rank())
}

/// Number of rays, or 0 for a null handle.
///
/// # Safety
/// `fan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn torix_fan_ray_count(fan: *const TorixFan) -> usize {
    fan.as_ref().map_or(0, |f| f.fan.ray_count())
}

/// Free rank of the class group.
///
/// # Safety
/// `fan` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn torix_class_group_rank(fan: *const TorixFan, out: *mut usize) -> TorixStatus {
    guarded(|| {
        let (Some(f), false) = (fan.as_ref(), out.is_null()) else {
            return fail(TorixStatus::NullPointer, "null argument");
        };
        *out = class_group(&f.fan).group.rank();
        TorixStatus::Ok
    })
}

/// Number of invariant factors of the torsion part of the class group.
///
/// # Safety
/// `fan` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn torix_class_group_torsion_len(
    fan: *const TorixFan,
    out: *mut usize,
) -> TorixStatus {
    guarded(|| {
        let (Some(f), false) = (fan.as_ref(), out.is_null()) else {
            return fail(TorixStatus::NullPointer, "null argument");
        };
        *out = class_group(&f.fan).group.torsion().len();
        TorixStatus::Ok
    })
}

/// The `index`-th invariant factor. Factors too large for 64 bits are
/// reported as `TORIX_STATUS_OUT_OF_RANGE`; the JSON report has them exactly.
///
/// # Safety
/// `fan` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn torix_class_group_torsion(
    fan: *const TorixFan,
    index: usize,
    out: *mut u64,
) -> TorixStatus {
    guarded(|| {
        let (Some(f), false) = (fan.as_ref(), out.is_null()) else {
            return fail(TorixStatus::NullPointer, "null argument");
        };
        let torsion = class_group(&f.fan).group.torsion();
        let Some(t) = torsion.get(index) else {
            return fail(
                TorixStatus::OutOfRange,
                format!("index {index} with {} invariant factors", torsion.len()),
            );
        };
        match t.to_u64() {
            Some(v) => {
                *out = v;
                TorixStatus::Ok
            }
            None => fail(TorixStatus::OutOfRange, format!("invariant factor {t} exceeds 64 bits")),
        }
    })
}

/// Class group report as JSON.
///
/// # Safety
/// `fan` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn torix_class_group_json(
    fan: *const TorixFan,
    out: *mut *mut c_char,
) -> TorixStatus {
    guarded(|| {
        let Some(f) = fan.as_ref() else {
            return fail(TorixStatus::NullPointer, "null fan");
        };
        let v = report::class_group(&f.fan, class_group(&f.fan));
        write_string(out, v.to_string())
    })
}

/// Decomposition of `F^e_* O` as JSON. A `cap` of 0 selects the default.
///
/// # Safety
/// `fan` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn torix_frobenius_json(
    fan: *const TorixFan,
    p: u64,
    e: u32,
    cap: u64,
    out: *mut *mut c_char,
) -> TorixStatus {
    guarded(|| {
        let Some(f) = fan.as_ref() else {
            return fail(TorixStatus::NullPointer, "null fan");
        };
        let mut options = EnumerationOptions::default();
        if cap > 0 {
            options.cap = cap;
        }
        let zero = torix::divisor::DivisorClass(class_group(&f.fan).group.zero());
        match frobenius_decompose(&f.fan, p, e, &zero, options) {
            Ok(d) => write_string(out, report::frobenius(&d).to_string()),
            Err(err) => domain(err),
        }
    })
}

/// Runs the command line with `argv[0..argc]` as arguments (without the
/// program name) and returns its exit code. Standard output is stored in
/// `*out_stdout`; standard error becomes the last error message.
///
/// # Safety
/// `argv` must point to `argc` valid NUL-terminated strings and
/// `out_stdout` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn torix_run(
    argc: c_int,
    argv: *const *const c_char,
    out_stdout: *mut *mut c_char,
) -> c_int {
    clear_error();
    let result = catch_unwind(AssertUnwindSafe(|| {
        if out_stdout.is_null() || (argc > 0 && argv.is_null()) || argc < 0 {
            set_error("null or invalid argument");
            return 2;
        }
        *out_stdout = ptr::null_mut();
        let mut args = vec!["torix".to_owned()];
        for i in 0..argc as usize {
            match read_str(*argv.add(i)) {
                Ok(s) => args.push(s.to_owned()),
                Err(_) => return 2,
            }
        }
        let outcome = torix::cli::run(args);
        if !outcome.stderr.is_empty() {
            set_error(outcome.stderr.trim_end());
        }
        if write_string(out_stdout, outcome.stdout) != TorixStatus::Ok {
            return 2;
        }
        outcome.code
    }));
    result.unwrap_or_else(|_| {
        set_error("internal panic");
        2
    })
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next torix call on the same thread.
#[no_mangle]
pub extern "C" fn torix_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn torix_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
