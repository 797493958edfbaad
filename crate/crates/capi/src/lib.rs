//! C ABI for the gdconj library.
//!
//! Pairs are opaque handles created from TOML text or a built-in example
//! name and released with [`gdc_pair_free`]. Every fallible call returns a
//! [`GdcStatus`]; on any status other than `GDC_STATUS_OK` a thread-local
//! message is available through [`gdc_last_error`]. Strings returned as
//! `char*` are owned by the caller and must be released with
//! [`gdc_string_free`].
//!
//! The generated header lands in `include/gdconj.h` at build time.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gdconj::rational::{Rational, Scalar};
use gdconj::{
    classify_pair, fixture, pair_from_toml, report, residual_max, sample_curve, solve_phi, Error,
    SystemPair, VerdictKind,
};

/// Result of every fallible API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GdcStatus {
    /// The call succeeded.
    Ok = 0,
    /// A pointer was null, a string was not UTF-8, or a buffer too small.
    InvalidArgument = 1,
    /// The input did not describe a valid pair (syntax, schema, or
    /// construction invariants).
    InvalidInput = 2,
    /// A numeric argument was outside its mathematical domain or a depth
    /// cap was exceeded.
    Domain = 3,
    /// No implemented classification criterion covers the pair.
    NoTheorem = 4,
    /// An internal invariant failed.
    Internal = 5,
}

/// Classification outcome for a conjugate pair.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GdcVerdict {
    /// The conjugate functions have derivative zero almost everywhere.
    Singular = 0,
    /// The conjugate functions are continuously differentiable.
    Smooth = 1,
    /// Both conjugate functions are the identity.
    Identity = 2,
    /// The implemented criteria are inconclusive.
    Unknown = 3,
}

/// Opaque handle to a validated system pair.
pub struct GdcPair {
    inner: SystemPair,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    // NUL bytes cannot appear in our own messages, but sanitize anyway.
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: GdcStatus, msg: &str) -> GdcStatus {
    set_last_error(msg);
    status
}

fn fail_with(err: &Error) -> GdcStatus {
    let status = match err {
        Error::Domain(_) | Error::DepthExceeded { .. } => GdcStatus::Domain,
        Error::NoTheorem(_) => GdcStatus::NoTheorem,
        _ => GdcStatus::InvalidInput,
    };
    fail(status, &err.to_string())
}

/// Run `f` behind a panic guard so unwinding never crosses the ABI.
fn guarded(f: impl FnOnce() -> GdcStatus) -> GdcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(GdcStatus::Internal, "internal panic"),
    }
}

/// # Safety
/// `p` must be null or point to a NUL-terminated string.
unsafe fn required_str<'a>(p: *const c_char) -> Result<&'a str, GdcStatus> {
    if p.is_null() {
        return Err(fail(GdcStatus::InvalidArgument, "null string argument"));
    }
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| fail(GdcStatus::InvalidArgument, "string argument is not UTF-8"))
}

fn deliver_pair(out: *mut *mut GdcPair, pair: SystemPair) -> GdcStatus {
    if out.is_null() {
        return fail(GdcStatus::InvalidArgument, "null output pointer");
    }
    let handle = Box::into_raw(Box::new(GdcPair { inner: pair }));
    unsafe { *out = handle };
    GdcStatus::Ok
}

fn deliver_string(out: *mut *mut c_char, text: String) -> GdcStatus {
    if out.is_null() {
        return fail(GdcStatus::InvalidArgument, "null output pointer");
    }
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            GdcStatus::Ok
        }
        Err(_) => fail(GdcStatus::Internal, "report contained a NUL byte"),
    }
}

unsafe fn pair_ref<'a>(pair: *const GdcPair) -> Result<&'a SystemPair, GdcStatus> {
    if pair.is_null() {
        return Err(fail(GdcStatus::InvalidArgument, "null pair handle"));
    }
    Ok(unsafe { &(*pair).inner })
}

/// Build a pair from TOML text describing the `f` and `g` systems.
///
/// On success writes a handle to `*out`; release it with `gdc_pair_free`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gdc_pair_from_toml(
    text: *const c_char,
    out: *mut *mut GdcPair,
) -> GdcStatus {
    guarded(|| {
        let text = match unsafe { required_str(text) } {
            Ok(t) => t,
            Err(status) => return status,
        };
        match pair_from_toml(text) {
            Ok(pair) => deliver_pair(out, pair),
            Err(e) => fail_with(&e),
        }
    })
}

/// Build one of the built-in example pairs by name
/// (`ex-affine`, `ex-lf-singular`, `ex-lf-smooth`, `ex-nonlinear`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gdc_pair_example(
    name: *const c_char,
    out: *mut *mut GdcPair,
) -> GdcStatus {
    guarded(|| {
        let name = match unsafe { required_str(name) } {
            Ok(t) => t,
            Err(status) => return status,
        };
        match fixture(name) {
            Ok(pair) => deliver_pair(out, pair),
            Err(e) => fail_with(&e),
        }
    })
}

/// Release a pair handle. Passing null is a no-op.
///
/// # Safety
/// `pair` must be null or a handle obtained from this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn gdc_pair_free(pair: *mut GdcPair) {
    if !pair.is_null() {
        drop(unsafe { Box::from_raw(pair) });
    }
}

/// Evaluate the conjugate function at `vertex` (0 or 1) at `x` in [0,1],
/// resolving it to an enclosure of width at most `tol`, and write the
/// estimate to `*out`.
///
/// # Safety
/// `pair` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gdc_eval(
    pair: *const GdcPair,
    vertex: u32,
    x: f64,
    tol: f64,
    out: *mut f64,
) -> GdcStatus {
    guarded(|| {
        let pair = match unsafe { pair_ref(pair) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(GdcStatus::InvalidArgument, "null output pointer");
        }
        let Some(x) = Rational::from_f64_exact(x) else {
            return fail(GdcStatus::Domain, "x is not a finite number");
        };
        match solve_phi(pair, vertex as usize, &Scalar::Exact(x), tol) {
            Ok(v) => {
                unsafe { *out = v.estimate.to_f64() };
                GdcStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Classify the pair and write the verdict kind to `*out`.
///
/// # Safety
/// `pair` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gdc_classify(pair: *const GdcPair, out: *mut GdcVerdict) -> GdcStatus {
    guarded(|| {
        let pair = match unsafe { pair_ref(pair) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(GdcStatus::InvalidArgument, "null output pointer");
        }
        match classify_pair(pair) {
            Ok(verdict) => {
                let kind = match verdict.kind {
                    VerdictKind::Singular => GdcVerdict::Singular,
                    VerdictKind::Smooth => GdcVerdict::Smooth,
                    VerdictKind::Identity => GdcVerdict::Identity,
                    VerdictKind::Unknown => GdcVerdict::Unknown,
                };
                unsafe { *out = kind };
                GdcStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Classify the pair and return the full verdict report as a JSON string
/// in `*out`. Release the string with `gdc_string_free`.
///
/// # Safety
/// `pair` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gdc_classify_json(
    pair: *const GdcPair,
    out: *mut *mut c_char,
) -> GdcStatus {
    guarded(|| {
        let pair = match unsafe { pair_ref(pair) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        match classify_pair(pair) {
            Ok(verdict) => {
                let json = report::verdict_report(&verdict).to_string();
                deliver_string(out, json)
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Return the validated-structure report for the pair as a JSON string in
/// `*out`. Release the string with `gdc_string_free`.
///
/// # Safety
/// `pair` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gdc_pair_json(pair: *const GdcPair, out: *mut *mut c_char) -> GdcStatus {
    guarded(|| {
        let pair = match unsafe { pair_ref(pair) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        deliver_string(out, report::validate_report(pair).to_string())
    })
}

/// Compute the largest conjugacy defect over a `grid`-point lattice per
/// corner map, with per-point enclosure width `tol`, and write it to
/// `*out`.
///
/// # Safety
/// `pair` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gdc_residual_max(
    pair: *const GdcPair,
    grid: u32,
    tol: f64,
    out: *mut f64,
) -> GdcStatus {
    guarded(|| {
        let pair = match unsafe { pair_ref(pair) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(GdcStatus::InvalidArgument, "null output pointer");
        }
        match residual_max(pair, grid as usize, tol) {
            Ok(r) => {
                unsafe { *out = r.max_abs.to_f64() };
                GdcStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Sample the conjugate function at `vertex` at every depth-`depth`
/// interval endpoint. Writes up to `cap` abscissas into `xs` and values
/// into `phis` and stores the point count (2^depth + 1) in `*written`.
/// Fails with `GDC_STATUS_INVALID_ARGUMENT` when `cap` is too small;
/// `*written` then holds the required capacity.
///
/// # Safety
/// `pair` must be a live handle; `xs` and `phis` must point to `cap`
/// writable doubles; `written` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gdc_curve(
    pair: *const GdcPair,
    vertex: u32,
    depth: u32,
    xs: *mut f64,
    phis: *mut f64,
    cap: usize,
    written: *mut usize,
) -> GdcStatus {
    guarded(|| {
        let pair = match unsafe { pair_ref(pair) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        if xs.is_null() || phis.is_null() || written.is_null() {
            return fail(GdcStatus::InvalidArgument, "null output pointer");
        }
        match sample_curve(pair, vertex as usize, depth as usize) {
            Ok(sample) => {
                let n = sample.points.len();
                unsafe { *written = n };
                if cap < n {
                    return fail(GdcStatus::InvalidArgument, "capacity too small for curve");
                }
                for (i, (x, phi)) in sample.points.iter().enumerate() {
                    unsafe {
                        *xs.add(i) = x.to_f64();
                        *phis.add(i) = phi.to_f64();
                    }
                }
                GdcStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Copy the current thread's last error message (NUL-terminated, possibly
/// truncated) into `buf` and return the full message length in bytes,
/// excluding the terminator. With a null `buf` or zero `cap`, only the
/// length is returned.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn gdc_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Release a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a string obtained from this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn gdc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn gdc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example(name: &str) -> *mut GdcPair {
        let cname = CString::new(name).unwrap();
        let mut handle: *mut GdcPair = ptr::null_mut();
        let status = unsafe { gdc_pair_example(cname.as_ptr(), &mut handle) };
        assert_eq!(status, GdcStatus::Ok, "example {name} should build");
        assert!(!handle.is_null(), "handle should be set");
        handle
    }

    fn last_error_string() -> String {
        let needed = unsafe { gdc_last_error(ptr::null_mut(), 0) };
        let mut buf = vec![0u8; needed + 1];
        unsafe { gdc_last_error(buf.as_mut_ptr().cast(), buf.len()) };
        String::from_utf8(buf[..needed].to_vec()).unwrap()
    }

    #[test]
    fn eval_matches_known_value() {
        let pair = example("ex-affine");
        let mut y = f64::NAN;
        let status = unsafe { gdc_eval(pair, 0, 0.5, 1e-10, &mut y) };
        assert_eq!(status, GdcStatus::Ok, "eval should succeed");
        // The break point of the source maps to the break of the target.
        assert_eq!(y, 0.25, "phi0(1/2) is the target break");
        unsafe { gdc_pair_free(pair) };
    }

    #[test]
    fn classify_covers_all_fixture_kinds() {
        let expect = [
            ("ex-affine", GdcVerdict::Singular),
            ("ex-lf-singular", GdcVerdict::Singular),
            ("ex-lf-smooth", GdcVerdict::Smooth),
            ("ex-nonlinear", GdcVerdict::Singular),
        ];
        for (name, want) in expect {
            let pair = example(name);
            let mut verdict = GdcVerdict::Unknown;
            let status = unsafe { gdc_classify(pair, &mut verdict) };
            assert_eq!(status, GdcStatus::Ok, "classify {name} should succeed");
            assert_eq!(verdict, want, "verdict for {name}");
            unsafe { gdc_pair_free(pair) };
        }
    }

    #[test]
    fn toml_round_trip_and_json_reports() {
        let text = CString::new(
            r#"
            label = "halving"

            [f.0.0]
            kind = "affine"
            slope = "1/2"
            intercept = "0"

            [f.0.1]
            kind = "affine"
            slope = "1/2"
            intercept = "1/2"

            [f.1.0]
            kind = "affine"
            slope = "1/2"
            intercept = "0"

            [f.1.1]
            kind = "affine"
            slope = "1/2"
            intercept = "1/2"

            [g.0.0]
            kind = "affine"
            slope = "1/2"
            intercept = "0"

            [g.0.1]
            kind = "affine"
            slope = "1/2"
            intercept = "1/2"

            [g.1.0]
            kind = "affine"
            slope = "1/2"
            intercept = "0"

            [g.1.1]
            kind = "affine"
            slope = "1/2"
            intercept = "1/2"
            "#,
        )
        .unwrap();
        let mut handle: *mut GdcPair = ptr::null_mut();
        let status = unsafe { gdc_pair_from_toml(text.as_ptr(), &mut handle) };
        assert_eq!(status, GdcStatus::Ok, "identical halving systems parse");

        let mut verdict = GdcVerdict::Unknown;
        assert_eq!(
            unsafe { gdc_classify(handle, &mut verdict) },
            GdcStatus::Ok
        );
        assert_eq!(verdict, GdcVerdict::Identity, "identical systems");

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { gdc_classify_json(handle, &mut json) },
            GdcStatus::Ok
        );
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
        assert!(
            text.contains("\"kind\":\"identity\""),
            "verdict JSON should name the kind, got {text}"
        );
        unsafe { gdc_string_free(json) };

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { gdc_pair_json(handle, &mut json) }, GdcStatus::Ok);
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
        assert!(
            text.contains("\"identity_pair\":true"),
            "structure JSON should flag the identity pair, got {text}"
        );
        unsafe { gdc_string_free(json) };
        unsafe { gdc_pair_free(handle) };
    }

    #[test]
    fn invalid_input_sets_the_error_message() {
        let text = CString::new("not toml at all [").unwrap();
        let mut handle: *mut GdcPair = ptr::null_mut();
        let status = unsafe { gdc_pair_from_toml(text.as_ptr(), &mut handle) };
        assert_eq!(status, GdcStatus::InvalidInput, "garbage TOML is rejected");
        assert!(handle.is_null(), "handle stays null on failure");
        let msg = last_error_string();
        assert!(!msg.is_empty(), "error message should be set");

        let status = unsafe { gdc_pair_from_toml(ptr::null(), &mut handle) };
        assert_eq!(status, GdcStatus::InvalidArgument, "null text pointer");
    }

    #[test]
    fn domain_errors_are_distinguished() {
        let pair = example("ex-lf-smooth");
        let mut y = 0.0;
        let status = unsafe { gdc_eval(pair, 0, 1.5, 1e-8, &mut y) };
        assert_eq!(status, GdcStatus::Domain, "x outside [0,1]");
        let status = unsafe { gdc_eval(pair, 0, f64::NAN, 1e-8, &mut y) };
        assert_eq!(status, GdcStatus::Domain, "NaN x");
        let status = unsafe { gdc_eval(pair, 7, 0.5, 1e-8, &mut y) };
        assert_eq!(status, GdcStatus::Domain, "vertex out of range");
        unsafe { gdc_pair_free(pair) };
    }

    #[test]
    fn no_theorem_status_is_reported() {
        let text = CString::new(
            r#"
            [f.0.0]
            kind = "affine"
            slope = "1/3"
            intercept = "0"

            [f.0.1]
            kind = "affine"
            slope = "2/3"
            intercept = "1/3"

            [f.1.0]
            kind = "affine"
            slope = "1/3"
            intercept = "0"

            [f.1.1]
            kind = "affine"
            slope = "2/3"
            intercept = "1/3"

            [g.0.0]
            kind = "expr"
            formula = "x^2/(x+1)"
            lip = "3/4"

            [g.0.1]
            kind = "affine"
            slope = "1/2"
            intercept = "1/2"

            [g.1.0]
            kind = "affine"
            slope = "1/2"
            intercept = "0"

            [g.1.1]
            kind = "affine"
            slope = "1/2"
            intercept = "1/2"
            "#,
        )
        .unwrap();
        let mut handle: *mut GdcPair = ptr::null_mut();
        assert_eq!(
            unsafe { gdc_pair_from_toml(text.as_ptr(), &mut handle) },
            GdcStatus::Ok,
            "the pair itself is well-formed"
        );
        let mut verdict = GdcVerdict::Unknown;
        let status = unsafe { gdc_classify(handle, &mut verdict) };
        assert_eq!(status, GdcStatus::NoTheorem, "no criterion covers it");
        unsafe { gdc_pair_free(handle) };
    }

    #[test]
    fn curve_reports_required_capacity() {
        let pair = example("ex-lf-smooth");
        let mut xs = [0.0; 5];
        let mut phis = [0.0; 5];
        let mut written = 0usize;

        let status = unsafe {
            gdc_curve(pair, 1, 2, xs.as_mut_ptr(), phis.as_mut_ptr(), 5, &mut written)
        };
        assert_eq!(status, GdcStatus::Ok, "depth 2 fits in 5 points");
        assert_eq!(written, 5, "2^2 + 1 points");
        assert_eq!(xs[0], 0.0, "curve starts at the left endpoint");
        assert_eq!(xs[4], 1.0, "curve ends at the right endpoint");
        assert_eq!(phis[2], 0.4, "phi1(1/2) = 2/5 for this pair");
        assert_eq!(phis[4], 1.0, "curve is anchored at 1");

        let status = unsafe {
            gdc_curve(pair, 1, 3, xs.as_mut_ptr(), phis.as_mut_ptr(), 5, &mut written)
        };
        assert_eq!(status, GdcStatus::InvalidArgument, "depth 3 needs 9 slots");
        assert_eq!(written, 9, "required capacity is reported");
        unsafe { gdc_pair_free(pair) };
    }

    #[test]
    fn residual_of_exact_solution_is_tiny() {
        let pair = example("ex-lf-smooth");
        let mut r = f64::NAN;
        let status = unsafe { gdc_residual_max(pair, 9, 1e-9, &mut r) };
        assert_eq!(status, GdcStatus::Ok, "residual should compute");
        assert!(r.is_finite() && r <= 4e-9, "residual {r} within 4*tol");
        unsafe { gdc_pair_free(pair) };
    }

    #[test]
    fn version_is_a_static_string() {
        let v = unsafe { CStr::from_ptr(gdc_version()) };
        assert_eq!(
            v.to_str().unwrap(),
            env!("CARGO_PKG_VERSION"),
            "version string matches the crate"
        );
    }
}
