//! C ABI over `drwlog-core`.
//!
//! Models and reports are opaque handles. Every fallible call returns a [`DrwlogStatus`];
//! on failure [`drwlog_last_error`] describes the problem. Strings handed out by the library
//! must be released with [`drwlog_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use drwlog_core::cli::{self, RunOptions, Scenario, ScenarioConfig, Suite};
use drwlog_core::divmodel::LocalModel;
use drwlog_core::engine::VerificationReport;
use drwlog_core::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrwlogStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidModel = 4,
    Config = 5,
    SizeClamp = 6,
    NotInLogPart = 7,
    NoRefinement = 8,
    Internal = 9,
    Panic = 10,
}

/// Opaque local model.
pub struct DrwlogModel {
    inner: LocalModel,
}

/// Opaque verification report.
pub struct DrwlogReport {
    inner: VerificationReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DrwlogStatus {
    match e {
        Error::Parse { .. } | Error::Type(_) => DrwlogStatus::Parse,
        Error::InvalidModel(_) => DrwlogStatus::InvalidModel,
        Error::Config(_) | Error::Io(_) => DrwlogStatus::Config,
        Error::SizeClamp(_) => DrwlogStatus::SizeClamp,
        Error::NotInLogPart(_) => DrwlogStatus::NotInLogPart,
        Error::NoRefinement { .. } => DrwlogStatus::NoRefinement,
        _ => DrwlogStatus::Internal,
    }
}

fn fail(e: Error) -> DrwlogStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

/// Runs `f`, turning panics into [`DrwlogStatus::Panic`].
fn guard(f: impl FnOnce() -> DrwlogStatus) -> DrwlogStatus {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            DrwlogStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, DrwlogStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(DrwlogStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not UTF-8".into());
        DrwlogStatus::InvalidUtf8
    })
}

fn give_string(s: String, out: *mut *mut c_char) -> DrwlogStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: callers check `out` for null before reaching here.
            unsafe { *out = c.into_raw() };
            DrwlogStatus::Ok
        }
        Err(_) => {
            set_error("output contains a nul byte".into());
            DrwlogStatus::Internal
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(format!("null pointer: {}", stringify!($p)));
            return DrwlogStatus::NullPointer;
        })+
    };
}

/// Message of the last failed call on this thread, or null. Valid until the next failing call
/// on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn drwlog_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn drwlog_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a local model `A = Div(T_1…T_e)`, `B = Σ r_i Div(T_i)` in `r_len` variables.
///
/// # Safety
/// `r` must point to `r_len` readable `u32`s and `out` must be a valid pointer to write to.
#[no_mangle]
pub unsafe extern "C" fn drwlog_model_new(
    p: u32,
    n: u32,
    e: usize,
    f: usize,
    g: usize,
    r: *const u32,
    r_len: usize,
    precision: u32,
    out: *mut *mut DrwlogModel,
) -> DrwlogStatus {
    non_null!(r, out);
    guard(|| {
        let r = std::slice::from_raw_parts(r, r_len).to_vec();
        match LocalModel::new(p, 1, n, r_len, e, f, g, r, precision) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(DrwlogModel { inner: m }));
                DrwlogStatus::Ok
            }
            Err(err) => fail(err),
        }
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from [`drwlog_model_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn drwlog_model_free(model: *mut DrwlogModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Runs one suite (`"thm1"`, `"decompose"`, `"lemma3"`, `"appendixB"`, `"appendixC"`,
/// `"compare"`, `"bgk"`, `"thm2"`, `"cor1"`) on `model` for `q`-forms. For `lemma3` the report
/// of the first failing cell is returned, or of the last cell when all pass.
///
/// # Safety
/// `model` must be a live handle, `suite` a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn drwlog_verify(
    model: *const DrwlogModel,
    suite: *const c_char,
    q: usize,
    seed: u64,
    out: *mut *mut DrwlogReport,
) -> DrwlogStatus {
    non_null!(model, out);
    let suite = match str_arg(suite) {
        Ok(s) => s,
        Err(st) => return st,
    };
    guard(|| {
        let suite: Suite = match suite.parse() {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let m = &(*model).inner;
        if q == 0 || q > m.d {
            return fail(Error::InvalidArgument(format!("q = {q} outside 1..={}", m.d)));
        }
        let sc = Scenario::of_model(m, q, suite);
        match cli::run_suite(&sc, suite, seed) {
            Ok(reps) => {
                let rep = reps.iter().find(|r| !r.passed()).or(reps.last()).cloned().expect("at least one report");
                *out = Box::into_raw(Box::new(DrwlogReport { inner: rep }));
                DrwlogStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Whether every non-informational check of the report passed.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn drwlog_report_passed(report: *const DrwlogReport) -> bool {
    !report.is_null() && (*report).inner.passed()
}

/// Writes the compared dimensions.
///
/// # Safety
/// `report` must be a live handle; `lhs` and `rhs` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drwlog_report_dims(report: *const DrwlogReport, lhs: *mut usize, rhs: *mut usize) -> DrwlogStatus {
    non_null!(report, lhs, rhs);
    *lhs = (*report).inner.lhs_dim;
    *rhs = (*report).inner.rhs_dim;
    DrwlogStatus::Ok
}

/// The report as JSON (schema 1). Free the string with [`drwlog_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn drwlog_report_json(report: *const DrwlogReport, out: *mut *mut c_char) -> DrwlogStatus {
    non_null!(report, out);
    match cli::report_json(&(*report).inner) {
        Ok(s) => give_string(s, out),
        Err(e) => fail(e),
    }
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from [`drwlog_verify`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn drwlog_report_free(report: *mut DrwlogReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Factors a log form written in the expression language, e.g. `dlog(1+T1^2)`, into a sum of
/// `dlog` products. Free the result with [`drwlog_string_free`].
///
/// # Safety
/// `model` must be a live handle, `form` a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn drwlog_decompose(model: *const DrwlogModel, form: *const c_char, out: *mut *mut c_char) -> DrwlogStatus {
    non_null!(model, out);
    let form = match str_arg(form) {
        Ok(s) => s,
        Err(st) => return st,
    };
    guard(|| match cli::decompose_text(&(*model).inner, form) {
        Ok(s) => give_string(s, out),
        Err(e) => fail(e),
    })
}

/// Runs a TOML scenario config. Writes the JSON report array to `out` and the CLI exit code
/// (0 pass, 1 failure, 3 size clamp) to `exit_code`. Reports carry no timings.
///
/// # Safety
/// `config` must be a nul-terminated string; `out` and `exit_code` must be writable.
#[no_mangle]
pub unsafe extern "C" fn drwlog_run_config(config: *const c_char, out: *mut *mut c_char, exit_code: *mut i32) -> DrwlogStatus {
    non_null!(out, exit_code);
    let text = match str_arg(config) {
        Ok(s) => s,
        Err(st) => return st,
    };
    guard(|| {
        let cfg = match ScenarioConfig::parse(text) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        match cli::run(&cfg, &RunOptions { jobs: None, no_timing: true }).and_then(|o| Ok((cli::reports_json(&o.reports)?, o.exit_code))) {
            Ok((json, code)) => {
                *exit_code = code;
                give_string(json, out)
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn drwlog_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
