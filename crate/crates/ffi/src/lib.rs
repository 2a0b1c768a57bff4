//! C ABI over `expode`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`ExpodeStatus`]; on failure the message is available from
//! [`expode_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use expode::hfun::{eval_H, HEvalConfig};
use expode::parse::{parse_expoly, parse_poly, parse_rational};
use expode::{tc, Error, ExpPoly};
use num_complex::Complex64;

/// Result codes. Values 10 and up mirror the library's error codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpodeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    DivisionByZero = 10,
    NotAPower = 11,
    PoleProximity = 12,
    NonzeroConstantExponent = 13,
    NonPolynomialExponent = 14,
    Overflow = 15,
    ConstantPolynomial = 16,
    DegreeMismatch = 17,
    EqualLeadingCoefficients = 18,
    ToleranceNotMet = 19,
    InvalidInput = 20,
    NonRealAlpha = 21,
    P2NotProportional = 22,
    VerificationFailed = 23,
    KappaNotSquarefree = 24,
    NonPolynomialRelation = 25,
    ZeroParameter = 26,
    InsufficientData = 27,
    PoleOnCircle = 28,
    NotEntire = 29,
    PoleOnRay = 30,
    StepCollapse = 31,
    SyntaxError = 32,
    Unknown = 99,
}

impl ExpodeStatus {
    fn from_code(code: i32) -> Self {
        use ExpodeStatus::*;
        const TABLE: [ExpodeStatus; 23] = [
            DivisionByZero,
            NotAPower,
            PoleProximity,
            NonzeroConstantExponent,
            NonPolynomialExponent,
            Overflow,
            ConstantPolynomial,
            DegreeMismatch,
            EqualLeadingCoefficients,
            ToleranceNotMet,
            InvalidInput,
            NonRealAlpha,
            P2NotProportional,
            VerificationFailed,
            KappaNotSquarefree,
            NonPolynomialRelation,
            ZeroParameter,
            InsufficientData,
            PoleOnCircle,
            NotEntire,
            PoleOnRay,
            StepCollapse,
            SyntaxError,
        ];
        usize::try_from(code - 10).ok().and_then(|i| TABLE.get(i).copied()).unwrap_or(Unknown)
    }
}

/// Opaque exponential polynomial.
pub struct ExpodeExpPoly(ExpPoly);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ExpodeStatus, msg: impl Into<String>) -> ExpodeStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> ExpodeStatus {
    fail(ExpodeStatus::from_code(e.code()), e.to_string())
}

// runs `f`, turning errors and panics into status codes
fn guard(f: impl FnOnce() -> Result<(), ExpodeStatus>) -> ExpodeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ExpodeStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(ExpodeStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ExpodeStatus> {
    if s.is_null() {
        return Err(fail(ExpodeStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(ExpodeStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn handle<'a>(h: *const ExpodeExpPoly) -> Result<&'a ExpPoly, ExpodeStatus> {
    h.as_ref().map(|h| &h.0).ok_or_else(|| fail(ExpodeStatus::NullPointer, "null handle"))
}

fn check_out<T>(out: *mut T) -> Result<(), ExpodeStatus> {
    if out.is_null() {
        return Err(fail(ExpodeStatus::NullPointer, "null output pointer"));
    }
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn expode_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse `text` into a new handle stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn expode_expoly_parse(text: *const c_char, out: *mut *mut ExpodeExpPoly) -> ExpodeStatus {
    guard(|| {
        check_out(out)?;
        let v = parse_expoly(read_str(text)?).map_err(from_error)?;
        *out = Box::into_raw(Box::new(ExpodeExpPoly(v)));
        Ok(())
    })
}

/// # Safety
/// `h` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn expode_expoly_free(h: *mut ExpodeExpPoly) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Evaluate at `re + i im`.
///
/// # Safety
/// `h` must be a live handle; `out_re` and `out_im` writable.
#[no_mangle]
pub unsafe extern "C" fn expode_expoly_eval(
    h: *const ExpodeExpPoly,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ExpodeStatus {
    guard(|| {
        check_out(out_re)?;
        check_out(out_im)?;
        let v = handle(h)?.eval(Complex64::new(re, im)).map_err(from_error)?;
        *out_re = v.re;
        *out_im = v.im;
        Ok(())
    })
}

/// Exact derivative as a new handle.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn expode_expoly_derivative(
    h: *const ExpodeExpPoly,
    out: *mut *mut ExpodeExpPoly,
) -> ExpodeStatus {
    guard(|| {
        check_out(out)?;
        let d = handle(h)?.derivative();
        *out = Box::into_raw(Box::new(ExpodeExpPoly(d)));
        Ok(())
    })
}

/// Printed form, which parses back to an equal value. Free with
/// [`expode_string_free`]. NULL for a NULL handle.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn expode_expoly_to_string(h: *const ExpodeExpPoly) -> *mut c_char {
    match h.as_ref() {
        Some(h) => into_c_string(h.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn expode_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `H(z) = int_0^z beta(t) e^{p(z) - p(t)} dt` along the segment, with
/// relative tolerance `rel_tol` (0 selects the default).
///
/// # Safety
/// `p` must be a NUL-terminated string, `beta` a live handle and the outputs
/// writable.
#[no_mangle]
pub unsafe extern "C" fn expode_eval_h(
    p: *const c_char,
    beta: *const ExpodeExpPoly,
    re: f64,
    im: f64,
    rel_tol: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ExpodeStatus {
    guard(|| {
        check_out(out_re)?;
        check_out(out_im)?;
        let p = parse_poly(read_str(p)?).map_err(from_error)?;
        let mut cfg = HEvalConfig::default();
        if rel_tol != 0.0 {
            cfg.rel_tol = rel_tol;
        }
        let v = eval_H(&p, handle(beta)?, Complex64::new(re, im), &cfg).map_err(from_error)?;
        *out_re = v.re;
        *out_im = v.im;
        Ok(())
    })
}

/// Solve `f^n + P(f) = b1 e^{p1} + b2 e^{alpha p1}` and write the witness as
/// a JSON string to `*out_json` (free with [`expode_string_free`]).
///
/// # Safety
/// All string arguments must be NUL-terminated and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn expode_tc_construct_json(
    n: u32,
    alpha: *const c_char,
    b1: *const c_char,
    b2: *const c_char,
    p1: *const c_char,
    out_json: *mut *mut c_char,
) -> ExpodeStatus {
    guard(|| {
        check_out(out_json)?;
        let alpha = parse_rational(read_str(alpha)?).map_err(from_error)?;
        let p1 = parse_poly(read_str(p1)?).map_err(from_error)?;
        let p2 = p1.scale_rat(&alpha);
        let b1 = parse_poly(read_str(b1)?).map_err(from_error)?;
        let b2 = parse_poly(read_str(b2)?).map_err(from_error)?;
        let prob = tc::TCProblem::new(n, b1, b2, p1, p2).map_err(from_error)?;
        let w = tc::construct(&prob).map_err(from_error)?;
        let doc = serde_json::json!({"schema": "expode/1", "problem": prob, "witness": w});
        *out_json = into_c_string(doc.to_string());
        Ok(())
    })
}
