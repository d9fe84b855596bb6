//! C ABI for the sinetype toolkit.
//!
//! Conventions:
//! * opaque handles (`StSineType`) own Rust objects; free them with the
//!   matching `st_*_free`;
//! * every fallible call returns an [`StStatus`]; the last error message is
//!   kept per thread and read with [`st_last_error_message`];
//! * bulk data crosses the boundary as JSON strings in the documented
//!   schemas; strings returned by the library are freed with
//!   [`st_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use sinetype::{
    count_zeros_disk, forward_map, inverse_map, localize_all, CoeffSeq, Error, SineType,
    SolverConfig,
};

/// Status codes mirroring the CLI exit classes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8 or malformed JSON.
    InvalidArgument = 1,
    /// Input parsed but violated a precondition.
    Precondition = 2,
    /// A numerical stage failed (contraction, contour, patch system...).
    Numerical = 3,
    /// A verification step rejected the result.
    Verification = 4,
    /// Library panicked; state is still consistent.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> StStatus {
    match err.exit_class() {
        2 => StStatus::Precondition,
        4 => StStatus::Verification,
        _ => StStatus::Numerical,
    }
}

/// Opaque handle to a normalized sine-type function.
pub struct StSineType(SineType);

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn json_out(value: &impl serde::Serialize, out: *mut *mut c_char) -> StStatus {
    let text = match serde_json::to_string(value) {
        Ok(t) => t,
        Err(e) => {
            set_error(&e.to_string());
            return StStatus::Internal;
        }
    };
    match CString::new(text) {
        Ok(cs) => {
            unsafe { *out = cs.into_raw() };
            StStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            StStatus::Internal
        }
    }
}

fn parse_config(json: *const c_char) -> Result<SolverConfig, StStatus> {
    if json.is_null() {
        return Ok(SolverConfig::default());
    }
    let text = unsafe { read_str(json) }.ok_or_else(|| {
        set_error("config is not valid UTF-8");
        StStatus::InvalidArgument
    })?;
    if text.trim().is_empty() {
        return Ok(SolverConfig::default());
    }
    serde_json::from_str(text).map_err(|e| {
        set_error(&format!("config JSON: {e}"));
        StStatus::InvalidArgument
    })
}

fn guarded<F: FnOnce() -> StStatus>(f: F) -> StStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            StStatus::Internal
        }
    }
}

/// Copies the last error message for this thread into `buf` (NUL-terminated,
/// truncated to `cap`); returns the full message length in bytes.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes, or be null (query the
/// length without copying).
#[no_mangle]
pub unsafe extern "C" fn st_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            // Ensure termination even when truncated.
            *buf.add(n - 1) = 0;
        }
        bytes.len() - 1
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must originate from a `st_*` call and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a sine-type function from coefficient JSON `{"N":…,"re":[…],"im":[…]}`.
///
/// # Safety
/// `f_json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_sinetype_from_coeff_json(
    f_json: *const c_char,
    out: *mut *mut StSineType,
) -> StStatus {
    guarded(|| {
        let Some(text) = read_str(f_json) else {
            set_error("f_json is null or not UTF-8");
            return StStatus::InvalidArgument;
        };
        if out.is_null() {
            set_error("out handle is null");
            return StStatus::InvalidArgument;
        }
        match serde_json::from_str::<CoeffSeq>(text) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(StSineType(SineType::from_coeffs(f))));
                StStatus::Ok
            }
            Err(e) => {
                set_error(&format!("coefficient JSON: {e}"));
                StStatus::InvalidArgument
            }
        }
    })
}

/// Serializes the handle to the SineType JSON schema.
///
/// # Safety
/// `h` must be a live handle; `out` receives a string owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn st_sinetype_to_json(
    h: *const StSineType,
    out: *mut *mut c_char,
) -> StStatus {
    guarded(|| {
        let Some(handle) = h.as_ref() else {
            set_error("null handle");
            return StStatus::InvalidArgument;
        };
        json_out(&handle.0, out)
    })
}

/// # Safety
/// `h` must come from `st_sinetype_from_coeff_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn st_sinetype_free(h: *mut StSineType) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Evaluates `F(z)`.
///
/// # Safety
/// `h` must be a live handle; `out_re`/`out_im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn st_sinetype_evaluate(
    h: *const StSineType,
    z_re: f64,
    z_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> StStatus {
    guarded(|| {
        let Some(handle) = h.as_ref() else {
            set_error("null handle");
            return StStatus::InvalidArgument;
        };
        if out_re.is_null() || out_im.is_null() {
            set_error("null output pointer");
            return StStatus::InvalidArgument;
        }
        let v = handle.0.evaluate(Complex64::new(z_re, z_im));
        *out_re = v.re;
        *out_im = v.im;
        StStatus::Ok
    })
}

/// Evaluates `F^{(order)}(z)` for `order ≤ 8`.
///
/// # Safety
/// Same contract as [`st_sinetype_evaluate`].
#[no_mangle]
pub unsafe extern "C" fn st_sinetype_evaluate_derivative(
    h: *const StSineType,
    z_re: f64,
    z_im: f64,
    order: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> StStatus {
    guarded(|| {
        let Some(handle) = h.as_ref() else {
            set_error("null handle");
            return StStatus::InvalidArgument;
        };
        if out_re.is_null() || out_im.is_null() {
            set_error("null output pointer");
            return StStatus::InvalidArgument;
        }
        match handle.0.evaluate_derivative(Complex64::new(z_re, z_im), order) {
            Ok(v) => {
                *out_re = v.re;
                *out_im = v.im;
                StStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Argument-principle zero count in the disk |z - center| ≤ radius.
///
/// # Safety
/// `h` must be a live handle; `out_count` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_count_zeros_disk(
    h: *const StSineType,
    center_re: f64,
    center_im: f64,
    radius: f64,
    out_count: *mut i64,
) -> StStatus {
    guarded(|| {
        let Some(handle) = h.as_ref() else {
            set_error("null handle");
            return StStatus::InvalidArgument;
        };
        if out_count.is_null() {
            set_error("null output pointer");
            return StStatus::InvalidArgument;
        }
        match count_zeros_disk(&handle.0, Complex64::new(center_re, center_im), radius) {
            Ok(n) => {
                *out_count = n;
                StStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Certified zero enumeration; returns the ZeroSet JSON.
///
/// # Safety
/// `h` must be a live handle; `out_json` receives a caller-owned string.
#[no_mangle]
pub unsafe extern "C" fn st_localize_all(
    h: *const StSineType,
    n_max: usize,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> StStatus {
    guarded(|| {
        let Some(handle) = h.as_ref() else {
            set_error("null handle");
            return StStatus::InvalidArgument;
        };
        let cfg = match parse_config(config_json) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match localize_all(&handle.0, n_max, &cfg) {
            Ok(zs) => json_out(&zs, out_json),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Forward map f ↦ (g, zeros); takes coefficient JSON, returns the
/// ForwardResult JSON `{"g":…,"zeros":…,"n1":…,"certified":…,"contraction_ratios":…}`.
///
/// # Safety
/// `f_json` must be NUL-terminated; `out_json` receives a caller-owned string.
#[no_mangle]
pub unsafe extern "C" fn st_forward_map(
    f_json: *const c_char,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> StStatus {
    guarded(|| {
        let Some(text) = read_str(f_json) else {
            set_error("f_json is null or not UTF-8");
            return StStatus::InvalidArgument;
        };
        let f: CoeffSeq = match serde_json::from_str(text) {
            Ok(f) => f,
            Err(e) => {
                set_error(&format!("coefficient JSON: {e}"));
                return StStatus::InvalidArgument;
            }
        };
        let cfg = match parse_config(config_json) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match forward_map(&f, &cfg) {
            Ok(r) => json_out(&r, out_json),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Inverse map g ↦ f; takes coefficient JSON, returns the InverseResult JSON
/// `{"f":…,"m":…,"eps":…,"alphas":…,"residuals":…,"condition_number":…}`.
///
/// # Safety
/// `g_json` must be NUL-terminated; `out_json` receives a caller-owned string.
#[no_mangle]
pub unsafe extern "C" fn st_inverse_map(
    g_json: *const c_char,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> StStatus {
    guarded(|| {
        let Some(text) = read_str(g_json) else {
            set_error("g_json is null or not UTF-8");
            return StStatus::InvalidArgument;
        };
        let g: CoeffSeq = match serde_json::from_str(text) {
            Ok(g) => g,
            Err(e) => {
                set_error(&format!("coefficient JSON: {e}"));
                return StStatus::InvalidArgument;
            }
        };
        let cfg = match parse_config(config_json) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match inverse_map(&g, &cfg) {
            Ok(r) => json_out(&r, out_json),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}
