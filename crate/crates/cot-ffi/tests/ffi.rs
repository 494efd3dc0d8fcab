//! Exercises the C ABI from Rust: handle lifecycles, status codes, error
//! messages, and numeric agreement with the core library.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use cot_ffi::*;

fn sample_from(values: &[f64]) -> *mut CotSample {
    let mut handle: *mut CotSample = ptr::null_mut();
    let status = unsafe { cot_sample_new(values.as_ptr(), values.len(), &mut handle) };
    assert_eq!(status, CotStatus::Ok);
    assert!(!handle.is_null());
    handle
}

fn distribution_from(spec: &str) -> *mut CotDistribution {
    let c = CString::new(spec).unwrap();
    let mut handle: *mut CotDistribution = ptr::null_mut();
    let status = unsafe { cot_distribution_parse(c.as_ptr(), &mut handle) };
    assert_eq!(status, CotStatus::Ok);
    handle
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(cot_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

#[test]
fn exact_distance_between_antipodal_singletons() {
    let x = sample_from(&[0.0]);
    let y = sample_from(&[0.5]);
    let mut out = 0.0;
    let status = unsafe { cot_distance_exact(x, y, &mut out) };
    assert_eq!(status, CotStatus::Ok);
    assert!((out - 0.5).abs() < 1e-15);

    let mut same = f64::NAN;
    assert_eq!(
        unsafe { cot_distance_exact(x, x, &mut same) },
        CotStatus::Ok
    );
    assert_eq!(same, 0.0);
    unsafe {
        cot_sample_free(x);
        cot_sample_free(y);
    }
}

#[test]
fn grid_distance_of_a_point_mass_from_uniform() {
    let x = sample_from(&[0.37; 25]);
    let uniform = distribution_from("uniform");
    let mut out = 0.0;
    let status = unsafe { cot_distance_grid(x, uniform, 1000, &mut out) };
    assert_eq!(status, CotStatus::Ok);
    assert!((out - 0.25).abs() < 2.0 / 1000.0);
    unsafe {
        cot_sample_free(x);
        cot_distribution_free(uniform);
    }
}

#[test]
fn zero_resolution_is_a_compute_error() {
    let x = sample_from(&[0.1, 0.4]);
    let uniform = distribution_from("uniform");
    let mut out = 0.0;
    let status = unsafe { cot_distance_grid(x, uniform, 0, &mut out) };
    assert_eq!(status, CotStatus::ComputeError);
    assert!(!last_error().is_empty());
    unsafe {
        cot_sample_free(x);
        cot_distribution_free(uniform);
    }
}

#[test]
fn null_pointers_are_reported() {
    let mut out = 0.0;
    let status = unsafe { cot_distance_exact(ptr::null(), ptr::null(), &mut out) };
    assert_eq!(status, CotStatus::NullPointer);

    let mut handle: *mut CotSample = ptr::null_mut();
    assert_eq!(
        unsafe { cot_sample_new(ptr::null(), 3, &mut handle) },
        CotStatus::NullPointer
    );
    unsafe {
        cot_sample_free(ptr::null_mut());
        cot_distribution_free(ptr::null_mut());
    }
}

#[test]
fn non_finite_angles_are_rejected() {
    let mut handle: *mut CotSample = ptr::null_mut();
    let values = [0.25, f64::INFINITY];
    let status = unsafe { cot_sample_new(values.as_ptr(), values.len(), &mut handle) };
    assert_eq!(status, CotStatus::InvalidArgument);
    assert!(last_error().contains("finite"));
}

#[test]
fn empty_sample_is_rejected() {
    let mut handle: *mut CotSample = ptr::null_mut();
    let values: [f64; 0] = [];
    let status = unsafe { cot_sample_new(values.as_ptr(), 0, &mut handle) };
    assert_eq!(status, CotStatus::InvalidArgument);
}

#[test]
fn bad_specs_set_parse_errors() {
    let mut handle: *mut CotDistribution = ptr::null_mut();
    for spec in ["gaussian:0,1", "vonmises:a,b", "uniform:1"] {
        let c = CString::new(spec).unwrap();
        let status = unsafe { cot_distribution_parse(c.as_ptr(), &mut handle) };
        assert_eq!(status, CotStatus::ParseError, "{spec}");
        assert!(!last_error().is_empty());
    }
    // Invalid parameter values parse but fail to build.
    let c = CString::new("vonmises:0.5,-1").unwrap();
    assert_eq!(
        unsafe { cot_distribution_parse(c.as_ptr(), &mut handle) },
        CotStatus::InvalidArgument
    );
}

#[test]
fn labels_round_trip_with_truncation() {
    let dist = distribution_from("vonmises:0.5,2");
    let needed = unsafe { cot_distribution_label(dist, ptr::null_mut(), 0) };
    assert_eq!(needed, "vonmises:0.5,2".len());

    let mut buf = vec![0 as c_char; needed + 1];
    unsafe { cot_distribution_label(dist, buf.as_mut_ptr(), buf.len()) };
    let text = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert_eq!(text, "vonmises:0.5,2");

    let mut tiny = vec![0 as c_char; 4];
    let full = unsafe { cot_distribution_label(dist, tiny.as_mut_ptr(), tiny.len()) };
    assert_eq!(full, needed);
    let text = unsafe { CStr::from_ptr(tiny.as_ptr()) }.to_str().unwrap();
    assert_eq!(text, "von");
    unsafe { cot_distribution_free(dist) };
}

#[test]
fn goodness_of_fit_test_matches_expectations() {
    let concentrated = sample_from(&[0.37; 30]);
    let uniform = distribution_from("uniform");
    let mut result = CotTestResult {
        statistic: 0.0,
        critical_value: 0.0,
        p_value: 0.0,
        reject: 0,
        n: 0,
        alpha: 0.0,
    };
    let status =
        unsafe { cot_test_goodness_of_fit(concentrated, uniform, 0.05, 500, 4000, 7, &mut result) };
    assert_eq!(status, CotStatus::Ok);
    assert_eq!(result.reject, 1);
    assert_eq!(result.n, 30);
    assert!(result.p_value < 0.01);
    assert!(result.statistic > result.critical_value);
    unsafe {
        cot_sample_free(concentrated);
        cot_distribution_free(uniform);
    }
}

#[test]
fn two_sample_test_separates_shifted_samples() {
    let n = 40;
    let xs: Vec<f64> = (0..n).map(|i| 0.1 + 0.05 * (i as f64 / n as f64)).collect();
    let ys: Vec<f64> = xs.iter().map(|v| v + 0.5).collect();
    let x = sample_from(&xs);
    let y = sample_from(&ys);
    let mut result = CotTestResult {
        statistic: 0.0,
        critical_value: 0.0,
        p_value: 0.0,
        reject: 0,
        n: 0,
        alpha: 0.0,
    };
    let status = unsafe { cot_test_two_sample(x, y, 0.05, 400, 11, &mut result) };
    assert_eq!(status, CotStatus::Ok);
    assert_eq!(result.reject, 1);

    let status = unsafe { cot_test_two_sample(x, x, 0.05, 400, 11, &mut result) };
    assert_eq!(status, CotStatus::Ok);
    assert_eq!(result.reject, 0);
    unsafe {
        cot_sample_free(x);
        cot_sample_free(y);
    }
}

#[test]
fn header_is_generated() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("cot.h");
    let text = std::fs::read_to_string(header).expect("header exists");
    assert!(text.contains("COT_H"));
    assert!(text.contains("cot_distance_exact"));
    assert!(text.contains("CotTestResult"));
}
