//! C bindings for the simulator: parse a scenario from JSON, sweep it over
//! distance, and read the resulting curve back through flat accessors.
//!
//! The interface follows the usual conventions for C-facing Rust. Handles
//! (`ThzScenario`, `ThzSweep`) are opaque pointers owned by the library and
//! released with their `_free` function; every fallible call returns a
//! [`ThzStatus`] and leaves a human-readable message for the calling thread
//! behind [`thz_last_error`]; panics are caught at the boundary and surfaced
//! as [`ThzStatus::Panic`] rather than unwinding into foreign frames. The
//! C header mirroring this module is generated into `include/thzqkd.h` at
//! build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use thzqkd::scenarios::{parse_scenario, run_sweep, Scenario, SweepResult};
use thzqkd::Error;

/// Outcome of a fallible call. `Ok` is zero; everything else indicates the
/// call had no effect and [`thz_last_error`] describes why.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThzStatus {
    /// The call succeeded.
    Ok = 0,
    /// The input describes an impossible configuration (bad JSON, a
    /// parameter outside its domain, an inconsistent sweep).
    Validation = 1,
    /// The filesystem got in the way (unreadable spectrum table,
    /// unwritable cache directory).
    Io = 2,
    /// An intermediate state violated a physical bound; indicates a bug
    /// rather than bad input.
    Physicality = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// The library panicked internally; the handle state is unchanged.
    Panic = 6,
}

/// A parsed, validated scenario. Created by [`thz_scenario_from_json`],
/// released by [`thz_scenario_free`].
pub struct ThzScenario {
    inner: Scenario,
    name: CString,
}

/// A finished distance sweep. Created by [`thz_scenario_run`], released by
/// [`thz_sweep_free`].
pub struct ThzSweep {
    inner: SweepResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg)
        .unwrap_or_else(|_| CString::new("error message contained an interior NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_for(err: &Error) -> ThzStatus {
    match err {
        Error::Validation(_) => ThzStatus::Validation,
        Error::Io { .. } => ThzStatus::Io,
        Error::Physicality(_) => ThzStatus::Physicality,
    }
}

/// Runs a library call with a panic guard, routing failures of either kind
/// into the status code + message convention.
fn guarded<T>(f: impl FnOnce() -> thzqkd::Result<T>) -> Result<T, ThzStatus> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(value)) => Ok(value),
        Ok(Err(err)) => {
            set_error(err.to_string());
            Err(status_for(&err))
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_owned())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with a non-string payload".to_owned());
            set_error(format!("internal panic: {msg}"));
            Err(ThzStatus::Panic)
        }
    }
}

/// Parse and validate a scenario from a NUL-terminated JSON document,
/// storing a handle in `*out` on success.
///
/// # Safety
/// `json` must point to a NUL-terminated byte string and `out` to writable
/// memory for one pointer; both must be non-null.
#[no_mangle]
pub unsafe extern "C" fn thz_scenario_from_json(
    json: *const c_char,
    out: *mut *mut ThzScenario,
) -> ThzStatus {
    clear_error();
    if json.is_null() || out.is_null() {
        set_error("thz_scenario_from_json: null pointer argument".to_owned());
        return ThzStatus::NullPointer;
    }
    let bytes = CStr::from_ptr(json).to_bytes();
    match guarded(|| parse_scenario(bytes)) {
        Ok(scenario) => {
            let name = CString::new(scenario.name.clone())
                .unwrap_or_else(|_| CString::new("scenario").unwrap());
            *out = Box::into_raw(Box::new(ThzScenario { inner: scenario, name }));
            ThzStatus::Ok
        }
        Err(status) => status,
    }
}

/// Release a scenario handle. Null is a no-op.
///
/// # Safety
/// `scenario` must be null or a pointer obtained from
/// [`thz_scenario_from_json`] that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn thz_scenario_free(scenario: *mut ThzScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// The scenario's name, as given in the JSON document. The pointer stays
/// valid for the lifetime of the handle. Null in, null out.
///
/// # Safety
/// `scenario` must be null or a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn thz_scenario_name(scenario: *const ThzScenario) -> *const c_char {
    scenario.as_ref().map_or(ptr::null(), |s| s.name.as_ptr())
}

/// Sweep the scenario over its configured distance grid, storing a result
/// handle in `*out` on success.
///
/// `cache_dir` may be null; when non-null it names a directory where
/// generated absorption spectra are cached between runs, so repeated sweeps
/// of the same carrier plan skip the line-by-line evaluation.
///
/// # Safety
/// `scenario` must be a live scenario handle, `out` writable memory for one
/// pointer, and `cache_dir` null or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn thz_scenario_run(
    scenario: *const ThzScenario,
    cache_dir: *const c_char,
    out: *mut *mut ThzSweep,
) -> ThzStatus {
    clear_error();
    if scenario.is_null() || out.is_null() {
        set_error("thz_scenario_run: null pointer argument".to_owned());
        return ThzStatus::NullPointer;
    }
    let cache = if cache_dir.is_null() {
        None
    } else {
        match CStr::from_ptr(cache_dir).to_str() {
            Ok(s) => Some(PathBuf::from(s)),
            Err(_) => {
                set_error("thz_scenario_run: cache_dir is not valid UTF-8".to_owned());
                return ThzStatus::InvalidUtf8;
            }
        }
    };
    let inner = &(*scenario).inner;
    match guarded(|| run_sweep(inner, cache.as_deref())) {
        Ok(result) => {
            *out = Box::into_raw(Box::new(ThzSweep { inner: result }));
            ThzStatus::Ok
        }
        Err(status) => status,
    }
}

/// Release a sweep handle. Null is a no-op.
///
/// # Safety
/// `sweep` must be null or a pointer obtained from [`thz_scenario_run`]
/// that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn thz_sweep_free(sweep: *mut ThzSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// Number of distance points in the sweep. Null yields zero.
///
/// # Safety
/// `sweep` must be null or a live sweep handle.
#[no_mangle]
pub unsafe extern "C" fn thz_sweep_len(sweep: *const ThzSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.inner.rows.len())
}

/// Number of subcarriers carried by each row's per-subcarrier rates. Null
/// yields zero.
///
/// # Safety
/// `sweep` must be null or a live sweep handle.
#[no_mangle]
pub unsafe extern "C" fn thz_sweep_subcarrier_count(sweep: *const ThzSweep) -> usize {
    sweep
        .as_ref()
        .and_then(|s| s.inner.rows.first())
        .map_or(0, |row| row.r_k.len())
}

/// Link distance of `row` in metres, or NaN when `row` is out of range.
///
/// # Safety
/// `sweep` must be null or a live sweep handle.
#[no_mangle]
pub unsafe extern "C" fn thz_sweep_distance_m(sweep: *const ThzSweep, row: usize) -> f64 {
    sweep
        .as_ref()
        .and_then(|s| s.inner.rows.get(row))
        .map_or(f64::NAN, |r| r.distance_m)
}

/// Aggregate secret key rate of `row` in bits per multi-carrier symbol, or
/// NaN when `row` is out of range.
///
/// # Safety
/// `sweep` must be null or a live sweep handle.
#[no_mangle]
pub unsafe extern "C" fn thz_sweep_rate_bits(sweep: *const ThzSweep, row: usize) -> f64 {
    sweep
        .as_ref()
        .and_then(|s| s.inner.rows.get(row))
        .map_or(f64::NAN, |r| r.r_ofdm)
}

/// Secret key rate of one subcarrier in bits per symbol. `index` is
/// zero-based and counts subcarriers from the lowest frequency, so it runs
/// to one below [`thz_sweep_subcarrier_count`]. Out-of-range indices yield
/// NaN.
///
/// # Safety
/// `sweep` must be null or a live sweep handle.
#[no_mangle]
pub unsafe extern "C" fn thz_sweep_subcarrier_rate_bits(
    sweep: *const ThzSweep,
    row: usize,
    index: usize,
) -> f64 {
    sweep
        .as_ref()
        .and_then(|s| s.inner.rows.get(row))
        .and_then(|r| r.r_k.get(index))
        .copied()
        .unwrap_or(f64::NAN)
}

/// Longest swept distance at which the key rate clears the secure floor.
/// Returns true and writes `*out_distance_m` (when non-null) if any swept
/// point was secure; returns false when the whole sweep is below the floor.
///
/// # Safety
/// `sweep` must be null or a live sweep handle; `out_distance_m` must be
/// null or writable memory for one double.
#[no_mangle]
pub unsafe extern "C" fn thz_sweep_max_secure_distance_m(
    sweep: *const ThzSweep,
    out_distance_m: *mut f64,
) -> bool {
    let Some(sweep) = sweep.as_ref() else {
        return false;
    };
    match sweep.inner.max_secure_distance_m {
        Some(d) => {
            if !out_distance_m.is_null() {
                *out_distance_m = d;
            }
            true
        }
        None => false,
    }
}

/// Message describing the most recent failed call on this thread, or null
/// when the most recent call succeeded. The pointer stays valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn thz_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The library's version as a static string.
#[no_mangle]
pub extern "C" fn thz_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
