//! C ABI for the kdiff engine. Specs are opaque handles; every function
//! returns a status code and writes results through out-pointers.

use kdiff::bq::{certify, DmTuple};
use kdiff::taut::{euler_characteristic, Evaluator};
use kdiff::{Error, StratumSpec};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KdStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Engine = 3,
    BufferTooSmall = 4,
}

/// Opaque parsed stratum.
pub struct KdSpec {
    spec: StratumSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(e: Error) -> KdStatus {
    let status = if matches!(e, Error::Parse { .. }) { KdStatus::Parse } else { KdStatus::Engine };
    set_error(e.to_string());
    status
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, KdStatus> {
    if s.is_null() {
        set_error("null pointer");
        return Err(KdStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("input is not UTF-8");
        KdStatus::Parse
    })
}

fn write_buf(text: &str, buf: *mut c_char, len: usize) -> KdStatus {
    if buf.is_null() {
        set_error("null pointer");
        return KdStatus::NullPointer;
    }
    let bytes = text.as_bytes();
    if bytes.len() + 1 > len {
        set_error(format!("buffer of {len} bytes is too small for {} bytes", bytes.len() + 1));
        return KdStatus::BufferTooSmall;
    }
    unsafe {
        ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
        *buf.add(bytes.len()) = 0;
    }
    KdStatus::Ok
}

/// Parses a stratum such as "3;(-1,-1,-1,-1,-2)" into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kd_spec_parse(text: *const c_char, out: *mut *mut KdSpec) -> KdStatus {
    if out.is_null() {
        set_error("null pointer");
        return KdStatus::NullPointer;
    }
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match text.parse::<StratumSpec>() {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(KdSpec { spec }));
            KdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Releases a handle from `kd_spec_parse`. Null is ignored.
///
/// # Safety
/// `spec` must come from `kd_spec_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kd_spec_free(spec: *mut KdSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Dimension of the projectivized stratum.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kd_spec_dimension(spec: *const KdSpec, out: *mut i64) -> KdStatus {
    if spec.is_null() || out.is_null() {
        set_error("null pointer");
        return KdStatus::NullPointer;
    }
    match (*spec).spec.dimension() {
        Ok(d) => {
            *out = d;
            KdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Writes the Euler characteristic as "p/q" into `buf`.
///
/// # Safety
/// `spec` must be a live handle and `buf` valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn kd_euler_characteristic(spec: *const KdSpec, buf: *mut c_char, len: usize) -> KdStatus {
    if spec.is_null() {
        set_error("null pointer");
        return KdStatus::NullPointer;
    }
    match euler_characteristic(&Evaluator::new(), &(*spec).spec) {
        Ok(v) => write_buf(&kdiff::rat::fmt(&v), buf, len),
        Err(e) => fail(e),
    }
}

/// Certifies a tuple "k:a1,...,a5" and returns the report as a JSON string
/// to be released with `kd_string_free`.
///
/// # Safety
/// `tuple` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kd_bq_certify(tuple: *const c_char, cross_validate: bool, out: *mut *mut c_char) -> KdStatus {
    if out.is_null() {
        set_error("null pointer");
        return KdStatus::NullPointer;
    }
    let text = match read_str(tuple) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let t: DmTuple = match text.parse() {
        Ok(t) => t,
        Err(e @ Error::Invalid(_)) => {
            set_error(e.to_string());
            return KdStatus::Parse;
        }
        Err(e) => return fail(e),
    };
    let ev = cross_validate.then(Evaluator::new);
    match certify(&t, ev.as_ref()) {
        Ok(report) => {
            let json = serde_json::to_string(&report).expect("serializable report");
            *out = CString::new(json).expect("no NUL in JSON").into_raw();
            KdStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, valid until the next call
/// into the library.
#[no_mangle]
pub extern "C" fn kd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
