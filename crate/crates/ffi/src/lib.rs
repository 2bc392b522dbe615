//! C ABI over `padic-triple`.
//!
//! Every entry point returns a [`PtStatus`]. On failure the message is kept in
//! a thread-local slot readable with [`pt_last_error`]. Objects cross the
//! boundary as opaque handles released by their `*_free` function; strings
//! returned through out-parameters are released with [`pt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use padic_triple::cli::{self, Config};
use padic_triple::serre_tate::QExpansion;
use padic_triple::suites::{failures, run_all, run_suite};
use padic_triple::Error;

/// Result codes shared by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Precision = 4,
    Overflow = 5,
    Identity = 6,
    Degenerate = 7,
    NoConvergence = 8,
    Unsupported = 9,
    Config = 10,
    Panic = 11,
}

/// Operators accepted by [`pt_qexp_apply`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtQexpOp {
    U = 0,
    V = 1,
    Theta = 2,
    Deplete = 3,
}

/// A parsed configuration.
pub struct PtConfig(Config);

/// A q-expansion with rational coefficients.
pub struct PtQexp(QExpansion<BigRational>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PtStatus {
    match e {
        Error::Domain(_) => PtStatus::Domain,
        Error::Precision(_) => PtStatus::Precision,
        Error::Overflow(_) => PtStatus::Overflow,
        Error::Identity(_) => PtStatus::Identity,
        Error::Degenerate(_) => PtStatus::Degenerate,
        Error::NoConvergence(_) => PtStatus::NoConvergence,
        Error::Unsupported(_) => PtStatus::Unsupported,
        Error::Config(_) => PtStatus::Config,
    }
}

fn fail(status: PtStatus, msg: impl Into<String>) -> PtStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), PtStatus>) -> PtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PtStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(PtStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: padic_triple::Result<T>) -> Result<T, PtStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, PtStatus> {
    if s.is_null() {
        return Err(fail(PtStatus::NullPointer, "null string argument"));
    }
    // SAFETY: caller passes a nul-terminated string.
    CStr::from_ptr(s).to_str().map_err(|_| fail(PtStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, PtStatus> {
    // SAFETY: non-null handles were produced by this library.
    h.as_ref().ok_or_else(|| fail(PtStatus::NullPointer, "null handle"))
}

unsafe fn out<T>(o: *mut T, v: T) -> Result<(), PtStatus> {
    if o.is_null() {
        return Err(fail(PtStatus::NullPointer, "null output pointer"));
    }
    // SAFETY: checked non-null; caller guarantees it is writable.
    o.write(v);
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, PtStatus> {
    CString::new(s).map(CString::into_raw).map_err(|_| fail(PtStatus::Panic, "output contains a nul byte"))
}

fn capture(f: impl FnOnce(&mut Vec<u8>) -> padic_triple::Result<i32>) -> Result<String, PtStatus> {
    let mut buf = Vec::new();
    lib(f(&mut buf))?;
    String::from_utf8(buf).map_err(|_| fail(PtStatus::InvalidUtf8, "output is not UTF-8"))
}

/// Copies the last error message of this thread into `buf` (nul-terminated,
/// truncated to `len`). Returns the full message length, 0 when there is none.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pt_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: n < len bytes fit in the caller's buffer.
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pt_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw.
        drop(CString::from_raw(s));
    }
}

/// Parses configuration text into a new handle.
///
/// # Safety
/// `text` must be a nul-terminated string; `out_config` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_config_parse(text: *const c_char, out_config: *mut *mut PtConfig) -> PtStatus {
    guard(|| {
        let cfg = lib(cli::parse_config(str_arg(text)?))?;
        out(out_config, Box::into_raw(Box::new(PtConfig(cfg))))
    })
}

/// # Safety
/// `config` must be null or a handle from [`pt_config_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pt_config_free(config: *mut PtConfig) {
    if !config.is_null() {
        // SAFETY: allocated by Box::into_raw.
        drop(Box::from_raw(config));
    }
}

/// Euler factor report as `key: value` lines.
///
/// # Safety
/// `config` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_euler_report(config: *const PtConfig, out_text: *mut *mut c_char) -> PtStatus {
    guard(|| {
        let cfg = &handle(config)?.0;
        let s = capture(|buf| cli::cmd_euler(cfg, true, buf))?;
        out(out_text, to_c_string(s)?)
    })
}

/// Slope table over the configured weight grid as `key: value` lines.
///
/// # Safety
/// `config` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_slopes_report(config: *const PtConfig, out_text: *mut *mut c_char) -> PtStatus {
    guard(|| {
        let cfg = &handle(config)?.0;
        let s = capture(|buf| cli::cmd_slopes(cfg, true, buf))?;
        out(out_text, to_c_string(s)?)
    })
}

/// Runs a verification suite (or `"all"`) and reports the number of failed checks.
///
/// # Safety
/// `suite` must be a nul-terminated string; `out_failed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_verify(suite: *const c_char, out_failed: *mut usize) -> PtStatus {
    guard(|| {
        let name = str_arg(suite)?;
        let checks = if name == "all" { run_all() } else { lib(run_suite(name))? };
        out(out_failed, failures(&checks))
    })
}

/// Creates an empty q-expansion for prime `p` with exponent cap `cap`.
///
/// # Safety
/// `out_qexp` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_qexp_new(p: u64, cap: u64, out_qexp: *mut *mut PtQexp) -> PtStatus {
    guard(|| {
        lib(padic_triple::padic::PadicContext::new(p, 1))?;
        out(out_qexp, Box::into_raw(Box::new(PtQexp(QExpansion::zero(p, cap)))))
    })
}

/// # Safety
/// `qexp` must be null or a live q-expansion handle.
#[no_mangle]
pub unsafe extern "C" fn pt_qexp_free(qexp: *mut PtQexp) {
    if !qexp.is_null() {
        // SAFETY: allocated by Box::into_raw.
        drop(Box::from_raw(qexp));
    }
}

/// Adds `num/den · f_alpha`.
///
/// # Safety
/// `qexp` must be a live handle not aliased elsewhere.
#[no_mangle]
pub unsafe extern "C" fn pt_qexp_add_term(qexp: *mut PtQexp, alpha: u64, num: i64, den: i64) -> PtStatus {
    guard(|| {
        if qexp.is_null() {
            return Err(fail(PtStatus::NullPointer, "null handle"));
        }
        if den == 0 {
            return Err(fail(PtStatus::Domain, "zero denominator"));
        }
        // SAFETY: checked non-null.
        let f = &mut (*qexp).0;
        let c = BigRational::new(BigInt::from(num), BigInt::from(den));
        let terms = f.terms().clone().into_iter().chain([(alpha, c)]);
        *f = lib(QExpansion::from_terms(f.prime(), f.cap(), terms))?;
        Ok(())
    })
}

/// Number of nonzero terms.
///
/// # Safety
/// `qexp` must be a live handle; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_qexp_len(qexp: *const PtQexp, out_len: *mut usize) -> PtStatus {
    guard(|| out(out_len, handle(qexp)?.0.terms().len()))
}

/// Coefficient of `f_alpha` as a reduced fraction; fails with `Overflow` when
/// it does not fit in 64 bits.
///
/// # Safety
/// `qexp` must be a live handle; `out_num` and `out_den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_qexp_coeff(qexp: *const PtQexp, alpha: u64, out_num: *mut i64, out_den: *mut i64) -> PtStatus {
    guard(|| {
        let c = handle(qexp)?.0.coeff(alpha).cloned().unwrap_or_else(BigRational::zero);
        let fits = |x: &BigInt| x.to_i64().ok_or_else(|| fail(PtStatus::Overflow, "coefficient exceeds 64 bits"));
        let (n, d) = (fits(c.numer())?, fits(c.denom())?);
        out(out_num, n)?;
        out(out_den, d)
    })
}

/// Applies an operator, returning a new handle.
///
/// # Safety
/// `qexp` must be a live handle; `out_qexp` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_qexp_apply(qexp: *const PtQexp, op: PtQexpOp, out_qexp: *mut *mut PtQexp) -> PtStatus {
    guard(|| {
        let f = &handle(qexp)?.0;
        let g = match op {
            PtQexpOp::U => f.u_p0(),
            PtQexpOp::V => lib(f.v_p0())?,
            PtQexpOp::Theta => f.theta(),
            PtQexpOp::Deplete => lib(f.depletion())?,
        };
        out(out_qexp, Box::into_raw(Box::new(PtQexp(g))))
    })
}

/// Renders as `alpha:coeff` lines.
///
/// # Safety
/// `qexp` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_qexp_to_string(qexp: *const PtQexp, out_text: *mut *mut c_char) -> PtStatus {
    guard(|| {
        let s = handle(qexp)?.0.to_string();
        out(out_text, to_c_string(s)?)
    })
}
