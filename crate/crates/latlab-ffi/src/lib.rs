//! C ABI for the lattice toolkit.
//!
//! Lattices travel across the boundary as opaque handles created from the
//! same JSON documents the CLI accepts; reports come back as
//! heap-allocated JSON strings. Status codes mirror the CLI exit-code
//! contract: 0 success, 2 invalid input, 1 internal invariant failure,
//! plus 3 for null arguments. Every returned string must be released with
//! [`latlab_string_free`], every handle with [`latlab_lattice_free`].
//!
//! All entry points catch panics: a panic is reported as
//! `LATLAB_STATUS_INTERNAL_ERROR` instead of unwinding across the ABI.
//! The per-thread message from [`latlab_last_error_message`] describes the
//! most recent failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use latlab::glue::Gluing;
use latlab::jsonio::{
    counterexample_table_value, glue_report_value, int_to_value, lattice_from_json,
    lattice_to_value, moduli_report_value, sublattice_from_json, to_json_string,
};
use latlab::k3::{counterexample_report, moduli_invariants, K3Config, MukaiVector};
use latlab::lattice::{parse_vector, Lattice};
use latlab::{Error, Result};

/// Result of every fallible call in this interface.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
#[allow(non_camel_case_types)]
pub enum LatlabStatus {
    /// The call succeeded.
    LATLAB_STATUS_OK = 0,
    /// An internal invariant failed; always a bug, never an input problem.
    LATLAB_STATUS_INTERNAL_ERROR = 1,
    /// The input was rejected (malformed JSON, schema violation, bad
    /// parameter, precondition failure).
    LATLAB_STATUS_INVALID_INPUT = 2,
    /// A required pointer argument was null.
    LATLAB_STATUS_NULL_ARGUMENT = 3,
}

use LatlabStatus::*;

/// Opaque lattice handle. Create with [`latlab_lattice_from_json`],
/// release with [`latlab_lattice_free`].
pub struct LatlabLattice {
    _private: [u8; 0],
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = sanitized);
}

fn status_of(err: &Error) -> LatlabStatus {
    if err.is_internal() {
        LATLAB_STATUS_INTERNAL_ERROR
    } else {
        LATLAB_STATUS_INVALID_INPUT
    }
}

fn handle_from(lattice: Lattice) -> *mut LatlabLattice {
    Box::into_raw(Box::new(lattice)) as *mut LatlabLattice
}

/// # Safety
/// `ptr` must be a live handle from this library.
unsafe fn lattice_ref<'a>(ptr: *const LatlabLattice) -> &'a Lattice {
    &*(ptr as *const Lattice)
}

/// Runs a fallible body, converting errors and panics to status codes.
fn guarded(body: impl FnOnce() -> Result<LatlabStatus>) -> LatlabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".into());
            set_error(&format!("internal panic: {msg}"));
            LATLAB_STATUS_INTERNAL_ERROR
        }
    }
}

/// # Safety
/// `text` must be a valid NUL-terminated C string.
unsafe fn utf8_arg<'a>(text: *const c_char, what: &str) -> Result<&'a str> {
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| Error::Parameter(format!("{what} is not valid UTF-8")))
}

fn emit_string(out: *mut *mut c_char, text: String) -> Result<LatlabStatus> {
    let c = CString::new(text)
        .map_err(|_| Error::Internal("report contained an interior NUL byte".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(LATLAB_STATUS_OK)
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread; never free
/// it.
#[no_mangle]
pub extern "C" fn latlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a lattice from its JSON document (`{"label": ..., "gram": [[...]]}`).
/// On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated C string; `out` must be a valid
/// pointer to write one pointer through.
#[no_mangle]
pub unsafe extern "C" fn latlab_lattice_from_json(
    json: *const c_char,
    out: *mut *mut LatlabLattice,
) -> LatlabStatus {
    if json.is_null() || out.is_null() {
        set_error("null argument to latlab_lattice_from_json");
        return LATLAB_STATUS_NULL_ARGUMENT;
    }
    guarded(|| {
        let lattice = lattice_from_json(utf8_arg(json, "lattice JSON")?)?;
        *out = handle_from(lattice);
        Ok(LATLAB_STATUS_OK)
    })
}

/// Release a lattice handle. Null is a no-op.
///
/// # Safety
/// `lattice` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn latlab_lattice_free(lattice: *mut LatlabLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice as *mut Lattice));
    }
}

/// Rank of the lattice, or 0 on a null handle.
///
/// # Safety
/// `lattice` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn latlab_lattice_rank(lattice: *const LatlabLattice) -> usize {
    if lattice.is_null() {
        return 0;
    }
    lattice_ref(lattice).rank()
}

/// Serialize the lattice back to its canonical JSON document.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be valid to write one
/// pointer through. Free the result with [`latlab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn latlab_lattice_to_json(
    lattice: *const LatlabLattice,
    out: *mut *mut c_char,
) -> LatlabStatus {
    if lattice.is_null() || out.is_null() {
        set_error("null argument to latlab_lattice_to_json");
        return LATLAB_STATUS_NULL_ARGUMENT;
    }
    guarded(|| emit_string(out, to_json_string(&lattice_to_value(lattice_ref(lattice)))))
}

/// Signed determinant of the Gram matrix as a decimal string.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be valid to write one
/// pointer through. Free the result with [`latlab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn latlab_lattice_det(
    lattice: *const LatlabLattice,
    out: *mut *mut c_char,
) -> LatlabStatus {
    if lattice.is_null() || out.is_null() {
        set_error("null argument to latlab_lattice_det");
        return LATLAB_STATUS_NULL_ARGUMENT;
    }
    guarded(|| emit_string(out, lattice_ref(lattice).det().to_string()))
}

/// Divisibility of a vector (comma-separated integers) as a decimal
/// string wrapped in JSON: `{"div": ...}`.
///
/// # Safety
/// `lattice` must be a live handle; `vector` a valid C string; `out`
/// valid to write one pointer through. Free the result with
/// [`latlab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn latlab_lattice_div_json(
    lattice: *const LatlabLattice,
    vector: *const c_char,
    out: *mut *mut c_char,
) -> LatlabStatus {
    if lattice.is_null() || vector.is_null() || out.is_null() {
        set_error("null argument to latlab_lattice_div_json");
        return LATLAB_STATUS_NULL_ARGUMENT;
    }
    guarded(|| {
        let x = parse_vector(utf8_arg(vector, "vector")?)?;
        let div = lattice_ref(lattice).divisibility(&x)?;
        let mut map = serde_json::Map::new();
        map.insert("div".into(), int_to_value(&div));
        emit_string(out, to_json_string(&serde_json::Value::Object(map)))
    })
}

/// Gluing report for a sublattice JSON document (`{"ambient": ...,
/// "basis": ...}`): group order and invariant factors, the three
/// discriminants, and the structural checks.
///
/// # Safety
/// `sublattice_json` must be a valid C string; `out` valid to write one
/// pointer through. Free the result with [`latlab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn latlab_glue_report_json(
    sublattice_json: *const c_char,
    out: *mut *mut c_char,
) -> LatlabStatus {
    if sublattice_json.is_null() || out.is_null() {
        set_error("null argument to latlab_glue_report_json");
        return LATLAB_STATUS_NULL_ARGUMENT;
    }
    guarded(|| {
        let sub = sublattice_from_json(utf8_arg(sublattice_json, "sublattice JSON")?)?;
        let gluing = Gluing::new(&sub)?;
        emit_string(out, to_json_string(&glue_report_value(&gluing)?))
    })
}

/// Moduli invariants of a Mukai vector on a genus-`genus` surface of
/// Picard rank one. `mukai` is comma-separated `r,d,s`. Pass
/// `allow_ineffective = true` to skip the effectiveness gate.
///
/// # Safety
/// `mukai` must be a valid C string; `out` valid to write one pointer
/// through. Free the result with [`latlab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn latlab_k3_moduli_json(
    genus: u64,
    mukai: *const c_char,
    allow_ineffective: bool,
    out: *mut *mut c_char,
) -> LatlabStatus {
    if mukai.is_null() || out.is_null() {
        set_error("null argument to latlab_k3_moduli_json");
        return LATLAB_STATUS_NULL_ARGUMENT;
    }
    guarded(|| {
        let cfg = K3Config::picard_rank_one(genus)?;
        let v = MukaiVector::from_coords(&parse_vector(utf8_arg(mukai, "mukai vector")?)?)?;
        let inv = moduli_invariants(&cfg, &v, !allow_ineffective)?;
        emit_string(out, to_json_string(&moduli_report_value(&inv)))
    })
}

/// Obstruction table comparing the degree-0 and degree-(g-1) Picard
/// moduli vectors for every genus in `[g_min, g_max]`, as a JSON array.
///
/// # Safety
/// `out` must be valid to write one pointer through. Free the result
/// with [`latlab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn latlab_k3_counterexample_json(
    g_min: u64,
    g_max: u64,
    out: *mut *mut c_char,
) -> LatlabStatus {
    if out.is_null() {
        set_error("null argument to latlab_k3_counterexample_json");
        return LATLAB_STATUS_NULL_ARGUMENT;
    }
    guarded(|| {
        let rows = counterexample_report(g_min, g_max)?;
        emit_string(out, to_json_string(&counterexample_table_value(&rows)))
    })
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must have been returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn latlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
