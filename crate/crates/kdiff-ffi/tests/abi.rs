use kdiff_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn parse(text: &str) -> (KdStatus, *mut KdSpec) {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    let s = unsafe { kd_spec_parse(c.as_ptr(), &mut h) };
    (s, h)
}

#[test]
fn euler_characteristic_round_trip() {
    let (s, h) = parse("3;(-1,-1,-1,-1,-2)");
    assert_eq!(s, KdStatus::Ok);
    let mut dim = 0i64;
    assert_eq!(unsafe { kd_spec_dimension(h, &mut dim) }, KdStatus::Ok);
    assert_eq!(dim, 2);
    let mut buf = [0 as std::ffi::c_char; 32];
    assert_eq!(unsafe { kd_euler_characteristic(h, buf.as_mut_ptr(), buf.len()) }, KdStatus::Ok);
    let text = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert_eq!(text, "2/1");
    unsafe { kd_spec_free(h) };
}

#[test]
fn small_buffer_is_reported() {
    let (_, h) = parse("1;(2,-1,-1,-1,-1)");
    let mut buf = [0 as std::ffi::c_char; 2];
    assert_eq!(unsafe { kd_euler_characteristic(h, buf.as_mut_ptr(), buf.len()) }, KdStatus::BufferTooSmall);
    unsafe { kd_spec_free(h) };
}

#[test]
fn parse_error_sets_message() {
    let (s, h) = parse("3;(1,2");
    assert_eq!(s, KdStatus::Parse);
    assert!(h.is_null());
    let msg = unsafe { CStr::from_ptr(kd_last_error()) }.to_str().unwrap();
    assert!(msg.contains("parse error"), "{msg}");
}

#[test]
fn null_arguments() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { kd_spec_parse(ptr::null(), &mut h) }, KdStatus::NullPointer);
    let mut d = 0;
    assert_eq!(unsafe { kd_spec_dimension(ptr::null(), &mut d) }, KdStatus::NullPointer);
    unsafe { kd_spec_free(ptr::null_mut()) };
    unsafe { kd_string_free(ptr::null_mut()) };
}

#[test]
fn certificate_json() {
    let t = CString::new("3:1,1,1,1,2").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { kd_bq_certify(t.as_ptr(), true, &mut out) }, KdStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
    assert_eq!(json["bmy"], true);
    assert_eq!(json["c1_sq"], "1/1");
    assert_eq!(json["c2"], "1/3");
    assert_eq!(json["cross_validated"], true);
    unsafe { kd_string_free(out) };
    let bad = CString::new("5:1,1,1,3").unwrap();
    assert_eq!(unsafe { kd_bq_certify(bad.as_ptr(), false, &mut out) }, KdStatus::Parse);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kdiff.h")).unwrap();
    for name in [
        "kd_spec_parse",
        "kd_spec_free",
        "kd_spec_dimension",
        "kd_euler_characteristic",
        "kd_bq_certify",
        "kd_string_free",
        "kd_last_error",
        "KD_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::process::Command::new("cc").arg("--version").output() else { return };
    if !cc.status.success() {
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"kdiff.h\"\nint main(void) { KdSpec *h = 0; char buf[8]; return kd_spec_parse(\"1;(0,-1,-1)\", &h) + kd_euler_characteristic(h, buf, sizeof buf); }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("kdiff-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
