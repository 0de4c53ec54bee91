//! Exercises the C entry points from Rust: handle lifecycle, report
//! strings, status codes, and the last-error message.

use std::ffi::{CStr, CString};
use std::ptr;

use latlab_ffi::{
    latlab_glue_report_json, latlab_k3_counterexample_json, latlab_k3_moduli_json,
    latlab_last_error_message, latlab_lattice_det, latlab_lattice_div_json, latlab_lattice_free,
    latlab_lattice_from_json, latlab_lattice_rank, latlab_lattice_to_json, latlab_string_free,
    LatlabLattice, LatlabStatus,
};

fn c(text: &str) -> CString {
    CString::new(text).unwrap()
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    latlab_string_free(ptr);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(latlab_last_error_message())
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn lattice_lifecycle_and_round_trip() {
    unsafe {
        let json = c(r#"{"label":"U","gram":[[0,1],[1,0]]}"#);
        let mut handle: *mut LatlabLattice = ptr::null_mut();
        let status = latlab_lattice_from_json(json.as_ptr(), &mut handle);
        assert_eq!(status, LatlabStatus::LATLAB_STATUS_OK);
        assert_eq!(latlab_lattice_rank(handle), 2);

        let mut out = ptr::null_mut();
        assert_eq!(
            latlab_lattice_to_json(handle, &mut out),
            LatlabStatus::LATLAB_STATUS_OK
        );
        assert_eq!(take_string(out), r#"{"label":"U","gram":[[0,1],[1,0]]}"#);

        let mut det = ptr::null_mut();
        assert_eq!(
            latlab_lattice_det(handle, &mut det),
            LatlabStatus::LATLAB_STATUS_OK
        );
        assert_eq!(take_string(det), "-1");

        let vector = c("1,0");
        let mut div = ptr::null_mut();
        assert_eq!(
            latlab_lattice_div_json(handle, vector.as_ptr(), &mut div),
            LatlabStatus::LATLAB_STATUS_OK
        );
        assert_eq!(take_string(div), r#"{"div":1}"#);

        latlab_lattice_free(handle);
    }
}

#[test]
fn invalid_input_sets_error_message() {
    unsafe {
        let json = c(r#"{"gram":[[1,0],[0,2]]}"#);
        let mut handle: *mut LatlabLattice = ptr::null_mut();
        let status = latlab_lattice_from_json(json.as_ptr(), &mut handle);
        assert_eq!(status, LatlabStatus::LATLAB_STATUS_INVALID_INPUT);
        assert!(handle.is_null());
        assert!(last_error().contains("odd"), "{}", last_error());

        let truncated = c(r#"{"gram":[[0,1],"#);
        let status = latlab_lattice_from_json(truncated.as_ptr(), &mut handle);
        assert_eq!(status, LatlabStatus::LATLAB_STATUS_INVALID_INPUT);
        assert!(last_error().contains("column"), "{}", last_error());
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut handle: *mut LatlabLattice = ptr::null_mut();
        assert_eq!(
            latlab_lattice_from_json(ptr::null(), &mut handle),
            LatlabStatus::LATLAB_STATUS_NULL_ARGUMENT
        );
        assert_eq!(latlab_lattice_rank(ptr::null()), 0);
        latlab_lattice_free(ptr::null_mut());
        latlab_string_free(ptr::null_mut());
    }
}

#[test]
fn glue_report_through_the_abi() {
    unsafe {
        let sub = c(
            r#"{"ambient":{"gram":[[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]},"basis":[[1,-1,0,0]]}"#,
        );
        let mut out = ptr::null_mut();
        assert_eq!(
            latlab_glue_report_json(sub.as_ptr(), &mut out),
            LatlabStatus::LATLAB_STATUS_OK
        );
        let report = take_string(out);
        assert_eq!(
            report,
            r#"{"order":2,"invariant_factors":[2],"disc_N":2,"disc_T":2,"disc_H":1,"identity_holds":true,"anti_isometry_holds":true}"#
        );
    }
}

#[test]
fn moduli_and_counterexample_reports() {
    unsafe {
        let mukai = c("0,1,-2");
        let mut out = ptr::null_mut();
        assert_eq!(
            latlab_k3_moduli_json(3, mukai.as_ptr(), false, &mut out),
            LatlabStatus::LATLAB_STATUS_OK
        );
        assert_eq!(
            take_string(out),
            r#"{"n":3,"div":2,"crs":2,"disc_T":4,"gluing_order":2,"disc_ns":4,"fine":false}"#
        );

        let ineffective = c("-1,0,1");
        let status = latlab_k3_moduli_json(2, ineffective.as_ptr(), false, &mut out);
        assert_eq!(status, LatlabStatus::LATLAB_STATUS_INVALID_INPUT);
        let status = latlab_k3_moduli_json(2, ineffective.as_ptr(), true, &mut out);
        assert_eq!(status, LatlabStatus::LATLAB_STATUS_OK);
        latlab_string_free(out);

        let mut table = ptr::null_mut();
        assert_eq!(
            latlab_k3_counterexample_json(2, 4, &mut table),
            LatlabStatus::LATLAB_STATUS_OK
        );
        let text = take_string(table);
        let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(rows.as_array().unwrap().len(), 3);
        for row in rows.as_array().unwrap() {
            assert_eq!(row["verdict"], "NOT_L_EQUIVALENT");
        }
    }
}
