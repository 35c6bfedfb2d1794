//! C interface to `enriques-core`.
//!
//! Results come back as JSON strings owned by the library; release them with
//! `enq_string_free`. A failing call returns a nonzero `EnqStatus` and leaves a
//! message for `enq_last_error` on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use enriques_core::census::hypersurface_census;
use enriques_core::enriques::{EnriquesModel, PicardSpec};
use enriques_core::intlinalg::IntegerMatrix;
use enriques_core::lattice::Lattice;
use enriques_core::report::run_lemma_checks;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    VerificationFailed = 5,
    Panic = 6,
}

/// Which Brauer decision procedure to run.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnqMethod {
    Both = 0,
    Picard = 1,
    Form = 2,
}

/// Opaque handle to the fixed double-cover model.
pub struct EnqModel {
    inner: EnriquesModel,
}

/// Signature of a symmetric form.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnqSignature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(EnqStatus, String);

impl From<enriques_core::Error> for Failure {
    fn from(e: enriques_core::Error) -> Self {
        Failure(EnqStatus::Invalid, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EnqStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EnqStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            EnqStatus::Panic
        }
    }
}

unsafe fn model_ref<'a>(model: *const EnqModel) -> Result<&'a EnriquesModel, Failure> {
    model
        .as_ref()
        .map(|m| &m.inner)
        .ok_or_else(|| Failure(EnqStatus::NullPointer, "model handle is null".into()))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(EnqStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(EnqStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_json(out: *mut *mut c_char, value: &impl serde::Serialize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(EnqStatus::NullPointer, "output pointer is null".into()));
    }
    let text = serde_json::to_string(value).map_err(|e| Failure(EnqStatus::Invalid, e.to_string()))?;
    *out = CString::new(text).expect("JSON has no NUL").into_raw();
    Ok(())
}

/// Builds the model. Never returns null.
#[no_mangle]
pub extern "C" fn enq_model_new() -> *mut EnqModel {
    Box::into_raw(Box::new(EnqModel { inner: EnriquesModel::build() }))
}

/// # Safety
/// `model` must come from `enq_model_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn enq_model_free(model: *mut EnqModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Message for the last failure on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn enq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn enq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Signature of the `n x n` row-major Gram matrix `gram`.
///
/// # Safety
/// `gram` must point to `n * n` values and `out` to writable memory.
#[no_mangle]
pub unsafe extern "C" fn enq_lattice_signature(gram: *const i64, n: usize, out: *mut EnqSignature) -> EnqStatus {
    guard(|| {
        if (gram.is_null() && n > 0) || out.is_null() {
            return Err(Failure(EnqStatus::NullPointer, "null argument".into()));
        }
        let entries = if n == 0 { &[][..] } else { std::slice::from_raw_parts(gram, n * n) };
        let rows: Vec<&[i64]> = entries.chunks(n.max(1)).collect();
        let m = if n == 0 { IntegerMatrix::zeros(0, 0) } else { IntegerMatrix::from_rows(&rows)? };
        let s = Lattice::new("ffi", m)?.signature();
        *out = EnqSignature { positive: s.positive, negative: s.negative, null: s.null };
        Ok(())
    })
}

/// Decides Brauer-class vanishing for a JSON `{"label", "generators"}` spec.
/// Writes a JSON array of decision reports to `out`.
///
/// # Safety
/// `model` from `enq_model_new`, `spec_json` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn enq_brauer_decide(
    model: *const EnqModel,
    spec_json: *const c_char,
    method: EnqMethod,
    out: *mut *mut c_char,
) -> EnqStatus {
    guard(|| {
        let m = model_ref(model)?;
        let text = read_str(spec_json, "spec")?;
        let spec: PicardSpec = serde_json::from_str(text).map_err(|e| Failure(EnqStatus::Parse, e.to_string()))?;
        let reports = match method {
            EnqMethod::Both => {
                let (p, f) = m.brauer_decide_both(&spec)?;
                vec![p, f]
            }
            EnqMethod::Picard => vec![m.brauer_vanishes_by_picard(&spec)?],
            EnqMethod::Form => vec![m.brauer_vanishes_by_form(&spec)?],
        };
        write_json(out, &reports)
    })
}

/// Hypersurface census for odd `k` in `3..=k_max`, as a JSON array.
///
/// # Safety
/// `model` from `enq_model_new`, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn enq_census(model: *const EnqModel, k_max: u64, out: *mut *mut c_char) -> EnqStatus {
    guard(|| {
        let m = model_ref(model)?;
        write_json(out, &hypersurface_census(m, k_max)?)
    })
}

/// Runs the model self-checks. Writes `{"checks", "summary"}` JSON to `out`
/// and returns `VerificationFailed` when any check fails.
///
/// # Safety
/// `model` from `enq_model_new`, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn enq_check_lemmas(
    model: *const EnqModel,
    seed: u64,
    samples: usize,
    out: *mut *mut c_char,
) -> EnqStatus {
    guard(|| {
        let m = model_ref(model)?;
        let (checks, summary) = run_lemma_checks(m, seed, samples, false)?;
        let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        write_json(out, &serde_json::json!({ "checks": checks, "summary": summary }))?;
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Failure(EnqStatus::VerificationFailed, format!("failed checks: {}", failed.join(", "))))
        }
    })
}
