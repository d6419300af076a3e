use std::ffi::{c_char, CStr, CString};
use std::ptr;

use torix_ffi::*;

const P2: &str = r#"{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}"#;
const QUADRIC: &str = r#"{"rank":2,"rays":[[1,1],[1,-1]],"max_cones":[[0,1]]}"#;

fn fan(json: &str) -> *mut TorixFan {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { torix_fan_from_json(text.as_ptr(), false, &mut out) };
    assert_eq!(status, TorixStatus::Ok);
    assert!(!out.is_null());
    out
}

fn take(s: *mut c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { torix_string_free(s) };
    owned
}

fn last_error() -> Option<String> {
    let p = torix_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn handle_lifecycle_and_queries() {
    let f = fan(P2);
    unsafe {
        assert_eq!(torix_fan_rank(f), 2);
        assert_eq!(torix_fan_ray_count(f), 3);
        let mut rank = 0usize;
        assert_eq!(torix_class_group_rank(f, &mut rank), TorixStatus::Ok);
        assert_eq!(rank, 1);
        let mut len = 9usize;
        assert_eq!(torix_class_group_torsion_len(f, &mut len), TorixStatus::Ok);
        assert_eq!(len, 0);
        torix_fan_free(f);
        torix_fan_free(ptr::null_mut());
        assert_eq!(torix_fan_rank(ptr::null()), 0);
    }
}

#[test]
fn torsion_factors() {
    let f = fan(QUADRIC);
    unsafe {
        let mut len = 0usize;
        torix_class_group_torsion_len(f, &mut len);
        assert_eq!(len, 1);
        let mut t = 0u64;
        assert_eq!(torix_class_group_torsion(f, 0, &mut t), TorixStatus::Ok);
        assert_eq!(t, 2);
        assert_eq!(torix_class_group_torsion(f, 1, &mut t), TorixStatus::OutOfRange);
        assert!(last_error().is_some());
        let mut json = ptr::null_mut();
        assert_eq!(torix_class_group_json(f, &mut json), TorixStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["class_group"]["display"], "Z/2");
        torix_fan_free(f);
    }
}

#[test]
fn frobenius_report() {
    let f = fan(P2);
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(torix_frobenius_json(f, 3, 1, 0, &mut json), TorixStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["total_rank"], 9);
        assert_eq!(v["summands"][1]["multiplicity"], 7);

        assert_eq!(torix_frobenius_json(f, 4, 1, 0, &mut json), TorixStatus::DomainError);
        assert!(last_error().unwrap().contains("not a prime"));
        assert_eq!(torix_frobenius_json(f, 3, 3, 100, &mut json), TorixStatus::CapExceeded);
        torix_fan_free(f);
    }
}

#[test]
fn bad_input_statuses() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(torix_fan_from_json(ptr::null(), false, &mut out), TorixStatus::NullPointer);
        let junk = CString::new("{not json").unwrap();
        assert_eq!(torix_fan_from_json(junk.as_ptr(), false, &mut out), TorixStatus::ParseError);
        let dependent = CString::new(r#"{"rank":2,"rays":[[1,0],[-1,0]],"max_cones":[[0,1]]}"#).unwrap();
        assert_eq!(torix_fan_from_json(dependent.as_ptr(), false, &mut out), TorixStatus::InvalidFan);
        assert!(out.is_null());
        let mut rank = 0usize;
        assert_eq!(torix_class_group_rank(ptr::null(), &mut rank), TorixStatus::NullPointer);
    }
}

#[test]
fn run_matches_cli() {
    let args: Vec<CString> = ["action", "small", "--group", "2", "--weights", "1;1", "--json"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    let code = unsafe { torix_run(ptrs.len() as i32, ptrs.as_ptr(), &mut out) };
    assert_eq!(code, 0);
    let stdout = take(out);
    let direct = torix::cli::run(["torix", "action", "small", "--group", "2", "--weights", "1;1", "--json"]);
    assert_eq!(stdout, direct.stdout);

    let bogus = CString::new("bogus").unwrap();
    let ptrs = [bogus.as_ptr()];
    let code = unsafe { torix_run(1, ptrs.as_ptr(), &mut out) };
    assert_eq!(code, 2);
    assert_eq!(take(out), "");
    assert!(last_error().unwrap().contains("bogus"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/torix.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["torix_fan_from_json", "torix_run", "torix_last_error", "torix_string_free"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99", header])
        .status()
    else {
        eprintln!("no C compiler available, syntax check skipped");
        return;
    };
    assert!(status.success());
}
