//! C ABI over the deltainf engine.
//!
//! Algebras cross the boundary as opaque handles parsed from the text
//! format. Every function returns a [`DeltainfStatus`]; on anything other
//! than `DELTAINF_STATUS_OK` a message for the calling thread is available
//! from [`deltainf_last_error`]. Strings handed out by the library must be
//! released with [`deltainf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use deltainf::ainf::{associative_order, Order};
use deltainf::cli::{emit_report, run_text, Command, RunConfig, RunError};
use deltainf::{parse_algebra_file, serialize_algebra, validate_algebra, Error, GradedAlgebra};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltainfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NoDelta = 4,
    UnknownCommand = 5,
    InvalidInput = 6,
    Computation = 7,
    Panic = 8,
}

/// A parsed algebra. Only ever seen through a pointer.
pub struct DeltainfAlgebra {
    inner: GradedAlgebra,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let mut bytes = message.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: DeltainfStatus, message: impl Into<String>) -> DeltainfStatus {
    set_error(message);
    status
}

fn from_engine(e: Error) -> DeltainfStatus {
    let status = match e {
        Error::Parse { .. } => DeltainfStatus::Parse,
        Error::NotSquareZero(_) | Error::DegreeMismatch(_) => DeltainfStatus::InvalidInput,
        _ => DeltainfStatus::Computation,
    };
    fail(status, e.to_string())
}

fn guarded(f: impl FnOnce() -> DeltainfStatus) -> DeltainfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(DeltainfStatus::Panic, "internal panic"),
    }
}

/// # Safety
/// `p` is null or a nul-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, DeltainfStatus> {
    if p.is_null() {
        return Err(fail(
            DeltainfStatus::NullArgument,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(DeltainfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `alg` is null or a handle from [`deltainf_algebra_parse`].
unsafe fn algebra<'a>(alg: *const DeltainfAlgebra) -> Result<&'a GradedAlgebra, DeltainfStatus> {
    alg.as_ref()
        .map(|a| &a.inner)
        .ok_or_else(|| fail(DeltainfStatus::NullArgument, "algebra handle is null"))
}

fn hand_out(s: String) -> *mut c_char {
    let mut bytes = s.into_bytes();
    bytes.retain(|&b| b != 0);
    CString::new(bytes).expect("no interior nul").into_raw()
}

/// Message of the last failure on this thread, or null. Owned by the
/// library and valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn deltainf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses an algebra definition.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn deltainf_algebra_parse(
    text: *const c_char,
    out: *mut *mut DeltainfAlgebra,
) -> DeltainfStatus {
    guarded(|| {
        if out.is_null() {
            return fail(DeltainfStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let text = match read_str(text, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_algebra_file(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(DeltainfAlgebra { inner }));
                DeltainfStatus::Ok
            }
            Err(e) => from_engine(e),
        }
    })
}

/// # Safety
/// `alg` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn deltainf_algebra_free(alg: *mut DeltainfAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// # Safety
/// `alg` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn deltainf_algebra_dim(
    alg: *const DeltainfAlgebra,
    out: *mut usize,
) -> DeltainfStatus {
    guarded(|| {
        let alg = match algebra(alg) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(DeltainfStatus::NullArgument, "out is null");
        }
        *out = alg.dim();
        DeltainfStatus::Ok
    })
}

/// Canonical text form of the algebra, to be released with [`deltainf_string_free`].
///
/// # Safety
/// `alg` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn deltainf_algebra_serialize(
    alg: *const DeltainfAlgebra,
    out: *mut *mut c_char,
) -> DeltainfStatus {
    guarded(|| {
        let alg = match algebra(alg) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(DeltainfStatus::NullArgument, "out is null");
        }
        *out = hand_out(serialize_algebra(alg));
        DeltainfStatus::Ok
    })
}

/// Number of violated structural identities; 0 means the algebra is valid.
/// The first violation, if any, becomes the thread's last error.
///
/// # Safety
/// `alg` is a live handle and `violations` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn deltainf_algebra_validate(
    alg: *const DeltainfAlgebra,
    violations: *mut usize,
) -> DeltainfStatus {
    guarded(|| {
        let alg = match algebra(alg) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if violations.is_null() {
            return fail(DeltainfStatus::NullArgument, "violations is null");
        }
        let report = validate_algebra(alg);
        *violations = report.violations.len();
        if let Some(v) = report.violations.first() {
            set_error(format!("{}: {}", v.kind, v.message));
        }
        DeltainfStatus::Ok
    })
}

/// Least `n ≤ cap` with `m_{n+1} = 0`, or −1 when every arity up to `cap + 1` is nonzero.
///
/// # Safety
/// `alg` is a live handle and `order` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn deltainf_associative_order(
    alg: *const DeltainfAlgebra,
    cap: usize,
    order: *mut i64,
) -> DeltainfStatus {
    guarded(|| {
        let alg = match algebra(alg) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if order.is_null() {
            return fail(DeltainfStatus::NullArgument, "order is null");
        }
        let Some(delta) = alg.delta() else {
            return fail(DeltainfStatus::NoDelta, "algebra has no delta");
        };
        match associative_order(alg, delta, cap) {
            Ok(r) => {
                *order = match r.order {
                    Order::Finite(n) => n as i64,
                    Order::ExceedsCap => -1,
                };
                DeltainfStatus::Ok
            }
            Err(e) => from_engine(e),
        }
    })
}

/// Runs a verification command (`validate`, `ainf`, `order`, `compat`,
/// `cohomology`, `bar`, `hochschild`, `all`) on algebra text with default
/// bounds. The report text goes to `report` and the process-style exit
/// code (0 all pass, 1 some check failed) to `exit_code`.
///
/// # Safety
/// `command` and `text` are nul-terminated strings; `report` and
/// `exit_code` are valid pointers.
#[no_mangle]
pub unsafe extern "C" fn deltainf_run(
    command: *const c_char,
    text: *const c_char,
    seed: u64,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> DeltainfStatus {
    guarded(|| {
        if report.is_null() || exit_code.is_null() {
            return fail(DeltainfStatus::NullArgument, "output pointer is null");
        }
        *report = ptr::null_mut();
        let (name, text) = match (read_str(command, "command"), read_str(text, "text")) {
            (Ok(c), Ok(t)) => (c, t),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let Some(cmd) = Command::parse(name) else {
            return fail(
                DeltainfStatus::UnknownCommand,
                format!("unknown command `{name}`"),
            );
        };
        let mut config = RunConfig::new(cmd, "");
        config.seed = seed;
        match run_text(&config, text) {
            Ok(r) => {
                *exit_code = r.exit_code();
                *report = hand_out(emit_report(&r));
                DeltainfStatus::Ok
            }
            Err(e @ RunError::Input(_)) | Err(e @ RunError::Io(_)) => {
                *exit_code = e.exit_code();
                fail(DeltainfStatus::InvalidInput, e.to_string())
            }
        }
    })
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn deltainf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
