use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use drwlog_ffi::*;

fn last_error() -> String {
    let p = drwlog_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn model(p: u32, n: u32, e: usize, f: usize, g: usize, r: &[u32], prec: u32) -> *mut DrwlogModel {
    let mut m = ptr::null_mut();
    let st = unsafe { drwlog_model_new(p, n, e, f, g, r.as_ptr(), r.len(), prec, &mut m) };
    assert_eq!(st, DrwlogStatus::Ok, "{}", last_error());
    m
}

#[test]
fn verify_and_report() {
    let m = model(3, 1, 0, 1, 1, &[1], 5);
    let suite = CString::new("thm1").unwrap();
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { drwlog_verify(m, suite.as_ptr(), 1, 0, &mut rep) }, DrwlogStatus::Ok);
    assert!(unsafe { drwlog_report_passed(rep) });
    let (mut l, mut r) = (0, 0);
    assert_eq!(unsafe { drwlog_report_dims(rep, &mut l, &mut r) }, DrwlogStatus::Ok);
    assert_eq!(l, r);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { drwlog_report_json(rep, &mut s) }, DrwlogStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"suite\": \"thm1\""));
    unsafe {
        drwlog_string_free(s);
        drwlog_report_free(rep);
        drwlog_model_free(m);
    }
}

#[test]
fn thm2_through_the_abi() {
    let m = model(2, 2, 0, 1, 1, &[1], 4);
    for name in ["thm2", "cor1"] {
        let suite = CString::new(name).unwrap();
        let mut rep = ptr::null_mut();
        assert_eq!(unsafe { drwlog_verify(m, suite.as_ptr(), 1, 0, &mut rep) }, DrwlogStatus::Ok, "{}", last_error());
        assert!(unsafe { drwlog_report_passed(rep) });
        unsafe { drwlog_report_free(rep) };
    }
    unsafe { drwlog_model_free(m) };
}

#[test]
fn error_paths() {
    let mut m = ptr::null_mut();
    let r = [3u32];
    assert_eq!(unsafe { drwlog_model_new(3, 1, 0, 1, 1, r.as_ptr(), 1, 5, &mut m) }, DrwlogStatus::InvalidModel);
    assert!(last_error().contains("prime to p"));
    assert_eq!(unsafe { drwlog_model_new(3, 1, 0, 1, 1, ptr::null(), 1, 5, &mut m) }, DrwlogStatus::NullPointer);

    let m = model(3, 1, 0, 1, 1, &[1], 5);
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { drwlog_verify(m, ptr::null(), 1, 0, &mut rep) }, DrwlogStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { drwlog_verify(m, bad.as_ptr() as *const _, 1, 0, &mut rep) }, DrwlogStatus::InvalidUtf8);
    let suite = CString::new("thm1").unwrap();
    assert_eq!(unsafe { drwlog_verify(m, suite.as_ptr(), 2, 0, &mut rep) }, DrwlogStatus::Internal);
    let suite = CString::new("thm2").unwrap();
    assert_eq!(unsafe { drwlog_verify(m, suite.as_ptr(), 1, 0, &mut rep) }, DrwlogStatus::SizeClamp);

    let mut s = ptr::null_mut();
    let form = CString::new("dlog(1+T1").unwrap();
    assert_eq!(unsafe { drwlog_decompose(m, form.as_ptr(), &mut s) }, DrwlogStatus::Parse);
    let form = CString::new("dlog(T1)").unwrap();
    assert_eq!(unsafe { drwlog_decompose(m, form.as_ptr(), &mut s) }, DrwlogStatus::NotInLogPart);
    let form = CString::new("dlog(1+T1^2)").unwrap();
    assert_eq!(unsafe { drwlog_decompose(m, form.as_ptr(), &mut s) }, DrwlogStatus::Ok);
    unsafe {
        drwlog_string_free(s);
        drwlog_model_free(m);
        drwlog_model_free(ptr::null_mut());
        drwlog_report_free(ptr::null_mut());
        drwlog_string_free(ptr::null_mut());
    }
}

#[test]
fn run_config() {
    let cfg = CString::new(std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/negative_control.toml")).unwrap()).unwrap();
    let (mut s, mut code) = (ptr::null_mut(), -1);
    assert_eq!(unsafe { drwlog_run_config(cfg.as_ptr(), &mut s, &mut code) }, DrwlogStatus::Ok);
    assert_eq!(code, 1);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"elapsed_ms\": 0"));
    unsafe { drwlog_string_free(s) };
    let cfg = CString::new("[[scenario]]\nbogus = 1\n").unwrap();
    assert_eq!(unsafe { drwlog_run_config(cfg.as_ptr(), &mut s, &mut code) }, DrwlogStatus::Config);
}

#[test]
fn header_is_current() {
    let h = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/drwlog.h")).unwrap();
    for f in [
        "drwlog_model_new",
        "drwlog_model_free",
        "drwlog_verify",
        "drwlog_report_passed",
        "drwlog_report_dims",
        "drwlog_report_json",
        "drwlog_report_free",
        "drwlog_decompose",
        "drwlog_run_config",
        "drwlog_string_free",
        "drwlog_last_error",
        "drwlog_version",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f} missing from the header");
    }
    assert!(h.contains("typedef struct DrwlogModel DrwlogModel;"));
}

/// Compiles `tests/c/smoke.c` against the header and the static library, when a C compiler and
/// the archive are available.
#[test]
fn c_program() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let Some(profile) = exe.parent().and_then(|p| p.parent()) else { return };
    let lib = profile.join("libdrwlog_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let out: PathBuf = std::env::temp_dir().join(format!("drwlog-smoke-{}", std::process::id()));
    let st = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success(), "compile failed");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
