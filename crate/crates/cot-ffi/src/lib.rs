//! C ABI over the circular transport library.
//!
//! Callers hold opaque handles to samples and distributions, every function
//! returns a status code, and the last failure message is kept per thread
//! for diagnostics. The generated header lands in `include/cot.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use cot_core::distributions::{CircularDistribution, Family};
use cot_core::inference::{cott_one_sample, cott_two_sample, BootstrapSpec, QuantileSource};
use cot_core::{
    cot_exact, cot_grid, discretize_distribution, discretize_measure, CirclePoint,
    DiscreteCircularMeasure,
};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CotStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    ComputeError = 4,
}

/// A sample of points on the circle, in turns. Opaque.
pub struct CotSample {
    points: Vec<CirclePoint>,
    measure: DiscreteCircularMeasure,
}

/// A parsed analytic distribution. Opaque.
pub struct CotDistribution {
    family: Family,
    dist: Box<dyn CircularDistribution>,
}

/// Test outcome with plain-old-data fields.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CotTestResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub p_value: f64,
    /// 1 when the null is rejected at `alpha`, 0 otherwise.
    pub reject: i32,
    pub n: usize,
    pub alpha: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: CotStatus, msg: &str) -> CotStatus {
    set_error(msg);
    status
}

/// Message describing the most recent failure on this thread.
///
/// # Safety
/// The pointer is valid until the next failing call on the same thread; do
/// not free it.
#[no_mangle]
pub unsafe extern "C" fn cot_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Builds a sample from `len` angles in turns. Values are wrapped into
/// `[0, 1)`. On success writes a handle to `*out`.
///
/// # Safety
/// `values` must point to `len` readable doubles and `out` to a writable
/// pointer slot. The handle must be released with [`cot_sample_free`].
#[no_mangle]
pub unsafe extern "C" fn cot_sample_new(
    values: *const f64,
    len: usize,
    out: *mut *mut CotSample,
) -> CotStatus {
    if values.is_null() || out.is_null() {
        return fail(CotStatus::NullPointer, "values and out must be non-null");
    }
    let slice = std::slice::from_raw_parts(values, len);
    if slice.iter().any(|v| !v.is_finite()) {
        return fail(CotStatus::InvalidArgument, "angles must be finite");
    }
    let points: Vec<CirclePoint> = slice.iter().map(|&v| CirclePoint::new(v)).collect();
    match DiscreteCircularMeasure::from_points(&points) {
        Ok(measure) => {
            *out = Box::into_raw(Box::new(CotSample { points, measure }));
            CotStatus::Ok
        }
        Err(err) => fail(CotStatus::InvalidArgument, &err.to_string()),
    }
}

/// Number of observations in the sample.
///
/// # Safety
/// `sample` must be a live handle from [`cot_sample_new`].
#[no_mangle]
pub unsafe extern "C" fn cot_sample_len(sample: *const CotSample) -> usize {
    if sample.is_null() {
        return 0;
    }
    (*sample).points.len()
}

/// Releases a sample handle. NULL is a no-op.
///
/// # Safety
/// `sample` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cot_sample_free(sample: *mut CotSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Parses a distribution description such as `"uniform"`,
/// `"vonmises:0.5,2"`, `"stephens:2,3"`, `"wrappedcauchy:0.5,0.3"`, or
/// `"cardioid:0.5,0.3"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a writable pointer
/// slot. The handle must be released with [`cot_distribution_free`].
#[no_mangle]
pub unsafe extern "C" fn cot_distribution_parse(
    spec: *const c_char,
    out: *mut *mut CotDistribution,
) -> CotStatus {
    if spec.is_null() || out.is_null() {
        return fail(CotStatus::NullPointer, "spec and out must be non-null");
    }
    let text = match CStr::from_ptr(spec).to_str() {
        Ok(t) => t,
        Err(_) => return fail(CotStatus::ParseError, "spec is not valid UTF-8"),
    };
    let family: Family = match text.parse() {
        Ok(f) => f,
        Err(err) => return fail(CotStatus::ParseError, &format!("{err}")),
    };
    match family.build() {
        Ok(dist) => {
            *out = Box::into_raw(Box::new(CotDistribution { family, dist }));
            CotStatus::Ok
        }
        Err(err) => fail(CotStatus::InvalidArgument, &err.to_string()),
    }
}

/// Releases a distribution handle. NULL is a no-op.
///
/// # Safety
/// `dist` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cot_distribution_free(dist: *mut CotDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Exact transport distance between two samples.
///
/// # Safety
/// `x`, `y` must be live sample handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cot_distance_exact(
    x: *const CotSample,
    y: *const CotSample,
    out: *mut f64,
) -> CotStatus {
    if x.is_null() || y.is_null() || out.is_null() {
        return fail(CotStatus::NullPointer, "arguments must be non-null");
    }
    *out = cot_exact(&(*x).measure, &(*y).measure);
    CotStatus::Ok
}

/// Grid transport distance between a sample and an analytic law at the
/// given resolution.
///
/// # Safety
/// `x`, `dist` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cot_distance_grid(
    x: *const CotSample,
    dist: *const CotDistribution,
    resolution: usize,
    out: *mut f64,
) -> CotStatus {
    if x.is_null() || dist.is_null() || out.is_null() {
        return fail(CotStatus::NullPointer, "arguments must be non-null");
    }
    let value = discretize_measure(&(*x).measure, resolution).and_then(|emp| {
        let null = discretize_distribution((*dist).dist.as_ref(), resolution)?;
        cot_grid(&emp, &null)
    });
    match value {
        Ok(v) => {
            *out = v;
            CotStatus::Ok
        }
        Err(err) => fail(CotStatus::ComputeError, &err.to_string()),
    }
}

fn convert_result(r: &cot_core::TestResult) -> CotTestResult {
    CotTestResult {
        statistic: r.statistic,
        critical_value: r.critical_value,
        p_value: r.p_value,
        reject: i32::from(r.reject),
        n: r.n,
        alpha: r.alpha,
    }
}

/// One-sample goodness-of-fit test of `sample` against `null`, calibrated
/// by `replicates` Monte Carlo draws of the limit law at `resolution`.
///
/// # Safety
/// `sample`, `null` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cot_test_goodness_of_fit(
    sample: *const CotSample,
    null: *const CotDistribution,
    alpha: f64,
    resolution: usize,
    replicates: usize,
    seed: u64,
    out: *mut CotTestResult,
) -> CotStatus {
    if sample.is_null() || null.is_null() || out.is_null() {
        return fail(CotStatus::NullPointer, "arguments must be non-null");
    }
    let source = QuantileSource::Generate {
        resolution,
        replicates,
        seed,
    };
    match cott_one_sample(&(*sample).points, (*null).dist.as_ref(), alpha, &source) {
        Ok(result) => {
            *out = convert_result(&result);
            CotStatus::Ok
        }
        Err(err) => fail(CotStatus::ComputeError, &err.to_string()),
    }
}

/// Two-sample test of equal law via the pooled reduced-size bootstrap with
/// `replicates` resampling rounds.
///
/// # Safety
/// `x`, `y` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cot_test_two_sample(
    x: *const CotSample,
    y: *const CotSample,
    alpha: f64,
    replicates: usize,
    seed: u64,
    out: *mut CotTestResult,
) -> CotStatus {
    if x.is_null() || y.is_null() || out.is_null() {
        return fail(CotStatus::NullPointer, "arguments must be non-null");
    }
    let spec = BootstrapSpec::m_of_n(replicates, seed);
    match cott_two_sample(&(*x).points, &(*y).points, alpha, &spec) {
        Ok(result) => {
            *out = convert_result(&result);
            CotStatus::Ok
        }
        Err(err) => fail(CotStatus::ComputeError, &err.to_string()),
    }
}

/// Human-readable label of a parsed distribution, e.g. `"vonmises:0.5,2"`,
/// written into `buf` (at most `cap - 1` bytes plus a NUL, truncated if
/// needed). Returns the full length of the label in bytes.
///
/// # Safety
/// `dist` must be a live handle; `buf` must have `cap` writable bytes or be
/// NULL (to query the length only).
#[no_mangle]
pub unsafe extern "C" fn cot_distribution_label(
    dist: *const CotDistribution,
    buf: *mut c_char,
    cap: usize,
) -> usize {
    if dist.is_null() {
        return 0;
    }
    let label = (*dist).family.label();
    let bytes = label.as_bytes();
    if !buf.is_null() && cap > 0 {
        let n = bytes.len().min(cap - 1);
        std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
    }
    bytes.len()
}
