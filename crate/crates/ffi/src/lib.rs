//! C ABI over the `thematic` library.
//!
//! Every fallible call returns a [`ThmStatus`]; on failure the message is kept in
//! thread-local storage and read with [`thm_last_error_message`]. Symbols and
//! bundles are opaque handles released with their `_free` functions. Array
//! outputs use caller buffers: the required length is always written to `*len`,
//! and `THM_STATUS_BUFFER_TOO_SMALL` is returned when it exceeds `cap`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use thematic::cli::{self, Format, RunConfig};
use thematic::thematic::FactorBundle;
use thematic::{hankel, invariance, CircleFunction, Error, ErrorClass, GridSpec, ToleranceConfig};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, unknown fields, inconsistent shapes in the input.
    ParseError = 3,
    /// Numerical failure: grid too coarse, not unimodular, inconsistent table.
    NumericError = 4,
    /// A singular value fell inside the guard band around the level.
    AmbiguousSpectrum = 5,
    InvalidConfig = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Grid and tolerance settings. Pass `NULL` wherever a config is accepted to use
/// [`thm_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ThmConfig {
    pub samples: usize,
    pub eq_tol: f64,
    pub sv_tol: f64,
    pub coeff_tol: f64,
}

/// Opaque matrix function on the unit circle.
pub struct ThmSymbol(CircleFunction);

/// Opaque (partial) thematic factorization.
pub struct ThmBundle(FactorBundle);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> ThmStatus {
    match (err, err.class()) {
        (Error::InvalidConfig(_), _) => ThmStatus::InvalidConfig,
        (_, ErrorClass::Parse) => ThmStatus::ParseError,
        (_, ErrorClass::Ambiguity) => ThmStatus::AmbiguousSpectrum,
        (_, ErrorClass::Numeric) => ThmStatus::NumericError,
    }
}

fn fail(status: ThmStatus, msg: impl Into<String>) -> ThmStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> ThmStatus) -> ThmStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            fail(ThmStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return fail(status_of(&err), err.to_string()),
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(ThmStatus::NullPointer, concat!("`", stringify!($p), "` is NULL"));
        })+
    };
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ThmStatus> {
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(ThmStatus::InvalidUtf8, format!("input is not UTF-8: {e}")))
}

unsafe fn settings(config: *const ThmConfig) -> Result<(GridSpec, ToleranceConfig), ThmStatus> {
    let c = if config.is_null() {
        thm_config_default()
    } else {
        *config
    };
    let tol = ToleranceConfig::new(c.eq_tol, c.sv_tol, c.coeff_tol)
        .map_err(|e| fail(status_of(&e), e.to_string()))?;
    let grid = GridSpec::with_samples(c.samples).map_err(|e| fail(status_of(&e), e.to_string()))?;
    Ok((grid, tol))
}

fn write_buffer<T: Copy>(values: &[T], buf: *mut T, cap: usize, len: *mut usize) -> ThmStatus {
    // SAFETY: callers checked `len` for NULL; `buf` must hold `cap` elements.
    unsafe { *len = values.len() };
    if values.len() > cap {
        return fail(
            ThmStatus::BufferTooSmall,
            format!("{} values needed, buffer holds {cap}", values.len()),
        );
    }
    if !values.is_empty() {
        if buf.is_null() {
            return fail(ThmStatus::NullPointer, "`buf` is NULL");
        }
        unsafe { ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len()) };
    }
    ThmStatus::Ok
}

/// Default settings: 1024 samples, `eq_tol = 1e-9`, `sv_tol = 1e-6`, `coeff_tol = 1e-10`.
#[no_mangle]
pub extern "C" fn thm_config_default() -> ThmConfig {
    let tol = ToleranceConfig::default();
    ThmConfig {
        samples: GridSpec::DEFAULT_SAMPLES,
        eq_tol: tol.eq_tol,
        sv_tol: tol.sv_tol,
        coeff_tol: tol.coeff_tol,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn thm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or `NULL`. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn thm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a symbol from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_symbol_from_json(
    json: *const c_char,
    out: *mut *mut ThmSymbol,
) -> ThmStatus {
    guard(|| {
        non_null!(json, out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let f = tri!(CircleFunction::from_json_str(text));
        *out = Box::into_raw(Box::new(ThmSymbol(f)));
        ThmStatus::Ok
    })
}

/// Releases a symbol; `NULL` is ignored.
///
/// # Safety
/// `symbol` must come from [`thm_symbol_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn thm_symbol_free(symbol: *mut ThmSymbol) {
    if !symbol.is_null() {
        drop(Box::from_raw(symbol));
    }
}

/// # Safety
/// `symbol` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_symbol_shape(
    symbol: *const ThmSymbol,
    rows: *mut usize,
    cols: *mut usize,
) -> ThmStatus {
    guard(|| {
        non_null!(symbol, rows, cols);
        *rows = (*symbol).0.rows();
        *cols = (*symbol).0.cols();
        ThmStatus::Ok
    })
}

/// `‖H_Φ‖` at the exact (or automatically grown) truncation order.
///
/// # Safety
/// `symbol` must be a live handle; `config` may be `NULL`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_hankel_norm(
    symbol: *const ThmSymbol,
    config: *const ThmConfig,
    out: *mut f64,
) -> ThmStatus {
    guard(|| {
        non_null!(symbol, out);
        let (grid, tol) = match settings(config) {
            Ok(s) => s,
            Err(s) => return s,
        };
        *out = tri!(hankel::hankel_norm(&(*symbol).0, None, &grid, &tol)).value;
        ThmStatus::Ok
    })
}

/// `ι(H_Φ)`; `*zero_hankel` is set when the Hankel operator vanishes.
///
/// # Safety
/// `symbol` must be a live handle; `config` may be `NULL`; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_iota(
    symbol: *const ThmSymbol,
    config: *const ThmConfig,
    out: *mut usize,
    zero_hankel: *mut bool,
) -> ThmStatus {
    guard(|| {
        non_null!(symbol, out, zero_hankel);
        let (grid, tol) = match settings(config) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let i = tri!(hankel::iota(&(*symbol).0, &grid, &tol));
        *out = i.value;
        *zero_hankel = i.zero_hankel;
        ThmStatus::Ok
    })
}

/// Maximizing dimensions `D(0), D(1), …` at `level`, up to the first zero.
///
/// # Safety
/// `symbol` must be a live handle; `config` may be `NULL`; `buf` must hold `cap`
/// values; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_dim_table(
    symbol: *const ThmSymbol,
    level: f64,
    config: *const ThmConfig,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> ThmStatus {
    guard(|| {
        non_null!(symbol, len);
        let (grid, tol) = match settings(config) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let table = tri!(hankel::dim_table(&(*symbol).0, level, None, &grid, &tol));
        write_buffer(&table.dims(), buf, cap, len)
    })
}

/// Monotone thematic indices at level `‖H_Φ‖`, nonincreasing.
///
/// # Safety
/// As for [`thm_dim_table`].
#[no_mangle]
pub unsafe extern "C" fn thm_recover_indices(
    symbol: *const ThmSymbol,
    config: *const ThmConfig,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> ThmStatus {
    guard(|| {
        non_null!(symbol, len);
        let (grid, tol) = match settings(config) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let phi = &(*symbol).0;
        let t0 = tri!(hankel::hankel_norm(phi, None, &grid, &tol)).value;
        if t0 <= tol.coeff_tol {
            return write_buffer::<usize>(&[], buf, cap, len);
        }
        let rec = tri!(invariance::recover_monotone_indices(phi, t0, &grid, &tol));
        write_buffer(&rec.indices, buf, cap, len)
    })
}

/// Full `analyze` report as a JSON string, to be released with [`thm_string_free`].
///
/// # Safety
/// `symbol` must be a live handle; `config` may be `NULL`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_analyze_json(
    symbol: *const ThmSymbol,
    config: *const ThmConfig,
    out: *mut *mut c_char,
) -> ThmStatus {
    guard(|| {
        non_null!(symbol, out);
        let (grid, tol) = match settings(config) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let cfg = RunConfig {
            trunc: None,
            grid,
            tol,
            kappa_max: None,
            format: Format::Json,
        };
        let report = tri!(cli::analyze_symbol(&(*symbol).0, "<ffi>", &cfg));
        let text = serde_json::to_string(&report).expect("plain data serializes");
        *out = CString::new(text).expect("JSON has no NUL").into_raw();
        ThmStatus::Ok
    })
}

/// Releases a string returned by the library; `NULL` is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn thm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a factor bundle from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_bundle_from_json(
    json: *const c_char,
    out: *mut *mut ThmBundle,
) -> ThmStatus {
    guard(|| {
        non_null!(json, out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let b = tri!(FactorBundle::from_json_str(text));
        *out = Box::into_raw(Box::new(ThmBundle(b)));
        ThmStatus::Ok
    })
}

/// Releases a bundle; `NULL` is ignored.
///
/// # Safety
/// `bundle` must come from [`thm_bundle_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn thm_bundle_free(bundle: *mut ThmBundle) {
    if !bundle.is_null() {
        drop(Box::from_raw(bundle));
    }
}

/// Composes the bundle into a new symbol handle.
///
/// # Safety
/// `bundle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_bundle_compose(
    bundle: *const ThmBundle,
    out: *mut *mut ThmSymbol,
) -> ThmStatus {
    guard(|| {
        non_null!(bundle, out);
        let f = tri!((*bundle).0.compose());
        *out = Box::into_raw(Box::new(ThmSymbol(f)));
        ThmStatus::Ok
    })
}

/// Verifies the bundle against `symbol`. A failed verification is reported
/// through `*ok = false` with status `THM_OK`; the failing checks are available
/// through [`thm_last_error_message`].
///
/// # Safety
/// Handles must be live; `config` may be `NULL`; `ok` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_bundle_verify(
    bundle: *const ThmBundle,
    symbol: *const ThmSymbol,
    config: *const ThmConfig,
    ok: *mut bool,
) -> ThmStatus {
    guard(|| {
        non_null!(bundle, symbol, ok);
        let (grid, tol) = match settings(config) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let report = (*bundle).0.verify(&(*symbol).0, &grid, &tol);
        *ok = report.ok;
        if !report.ok {
            let failed: Vec<String> = report
                .checks
                .iter()
                .filter(|c| !c.ok)
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect();
            set_error(failed.join("; "));
        }
        ThmStatus::Ok
    })
}

/// Thematic indices `ind T_{u_j}` of the bundle in slot order.
///
/// # Safety
/// `bundle` must be a live handle; `config` may be `NULL`; `buf` must hold `cap`
/// values; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thm_bundle_indices(
    bundle: *const ThmBundle,
    config: *const ThmConfig,
    buf: *mut i64,
    cap: usize,
    len: *mut usize,
) -> ThmStatus {
    guard(|| {
        non_null!(bundle, len);
        let (grid, tol) = match settings(config) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let report = tri!((*bundle).0.indices(&grid, &tol));
        write_buffer(&report.indices, buf, cap, len)
    })
}
