//! C ABI for the smacofss engine.
//!
//! Data and results live behind opaque handles that the caller frees with
//! the matching `_free` function. Every fallible call returns a
//! [`SmacofssStatus`]; on failure, [`smacofss_last_error`] describes the
//! problem until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use smacofss::{
    make_mds_data, Configuration, DistTriangle, EngineConfig, Error, MdsData, MdsResult,
    TieApproach,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmacofssStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DataError = 3,
    EngineError = 4,
    Panic = 5,
}

/// Engine settings. `ties` is 1, 2 or 3 and only matters when `ordinal`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SmacofssConfig {
    pub ndim: usize,
    pub ties: u8,
    pub weighted: bool,
    pub ordinal: bool,
    pub itmax: usize,
    pub eps: f64,
}

/// Opaque MDS data handle.
pub struct SmacofssData(MdsData);

/// Opaque fit result handle.
pub struct SmacofssResult(MdsResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> SmacofssStatus {
    if err.is_data_error() {
        SmacofssStatus::DataError
    } else {
        SmacofssStatus::EngineError
    }
}

/// Runs `f`, recording its error message and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (SmacofssStatus, String)>) -> SmacofssStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SmacofssStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SmacofssStatus::Panic
        }
    }
}

fn engine_err(e: Error) -> (SmacofssStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SmacofssStatus, String) {
    (SmacofssStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (SmacofssStatus, String) {
    (SmacofssStatus::InvalidArgument, msg.into())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn smacofss_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn smacofss_config_default() -> SmacofssConfig {
    let d = EngineConfig::default();
    SmacofssConfig {
        ndim: d.ndim,
        ties: d.ties.into(),
        weighted: d.weighted,
        ordinal: d.ordinal,
        itmax: d.itmax,
        eps: d.eps,
    }
}

fn triangle(
    nobj: usize,
    values: *const f64,
    what: &str,
) -> Result<DistTriangle, (SmacofssStatus, String)> {
    if values.is_null() {
        return Err(null(what));
    }
    let len = nobj * nobj.saturating_sub(1) / 2;
    // SAFETY: the caller guarantees `values` points to len readable doubles.
    let slice = unsafe { std::slice::from_raw_parts(values, len) };
    let cells = slice
        .iter()
        .map(|&v| if v.is_nan() { None } else { Some(v) })
        .collect();
    DistTriangle::new(nobj, cells).map_err(engine_err)
}

/// Builds MDS data from row-major lower triangles (entries (2,1), (3,1),
/// (3,2), …) of length `nobj (nobj - 1) / 2`. NaN marks a missing value.
/// `weights` may be null for unit weights.
///
/// # Safety
/// `delta` (and `weights` when non-null) must point to
/// `nobj (nobj - 1) / 2` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smacofss_data_from_triangle(
    nobj: usize,
    delta: *const f64,
    weights: *const f64,
    out: *mut *mut SmacofssData,
) -> SmacofssStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let d = triangle(nobj, delta, "delta")?;
        let w = if weights.is_null() {
            None
        } else {
            Some(triangle(nobj, weights, "weights")?)
        };
        let data = make_mds_data(&d, w.as_ref()).map_err(engine_err)?;
        *out = Box::into_raw(Box::new(SmacofssData(data)));
        Ok(())
    })
}

/// Builds MDS data from its JSON serialization. The structure is validated.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn smacofss_data_from_json(
    json: *const c_char,
    out: *mut *mut SmacofssData,
) -> SmacofssStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| invalid(e.to_string()))?;
        let data: MdsData = serde_json::from_str(text).map_err(|e| engine_err(e.into()))?;
        data.check().map_err(engine_err)?;
        *out = Box::into_raw(Box::new(SmacofssData(data)));
        Ok(())
    })
}

/// Number of observed pairs, or 0 for a null handle.
///
/// # Safety
/// `data` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smacofss_data_ndat(data: *const SmacofssData) -> usize {
    data.as_ref().map_or(0, |d| d.0.ndat)
}

/// # Safety
/// `data` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn smacofss_data_free(data: *mut SmacofssData) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// Fits a configuration. `xinit` is null for the default start or a
/// row-major `nobj × ndim` array.
///
/// # Safety
/// `data` must be a live handle, `config` readable, `xinit` null or
/// `nobj * ndim` readable doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn smacofss_fit(
    data: *const SmacofssData,
    config: *const SmacofssConfig,
    xinit: *const f64,
    out: *mut *mut SmacofssResult,
) -> SmacofssStatus {
    guard(|| {
        let data = &data.as_ref().ok_or_else(|| null("data"))?.0;
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let ties = TieApproach::try_from(c.ties).map_err(invalid)?;
        let cfg = EngineConfig {
            ndim: c.ndim,
            ties,
            weighted: c.weighted,
            ordinal: c.ordinal,
            itmax: c.itmax,
            eps: c.eps,
            ..EngineConfig::default()
        };
        cfg.check().map_err(|e| invalid(e.to_string()))?;
        let x = if xinit.is_null() {
            None
        } else {
            let len = data.nobj * c.ndim;
            let coords = std::slice::from_raw_parts(xinit, len).to_vec();
            Some(
                Configuration::new(data.nobj, c.ndim, coords)
                    .map_err(|e| invalid(e.to_string()))?,
            )
        };
        let r = smacofss::run(data, &cfg, x.as_ref()).map_err(engine_err)?;
        *out = Box::into_raw(Box::new(SmacofssResult(r)));
        Ok(())
    })
}

/// Stress of the result, NaN for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_stress(result: *const SmacofssResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.0.stress)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_niter(result: *const SmacofssResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.niter)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_nobj(result: *const SmacofssResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.nobj)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_ndim(result: *const SmacofssResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.ndim)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_ndat(result: *const SmacofssResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.delta.len())
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), (SmacofssStatus, String)> {
    if buf.is_null() {
        return Err(null("buf"));
    }
    if len < src.len() {
        return Err(invalid(format!(
            "buffer holds {len} values, need {}",
            src.len()
        )));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Copies the row-major `nobj × ndim` configuration into `buf`.
///
/// # Safety
/// `result` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_conf(
    result: *const SmacofssResult,
    buf: *mut f64,
    len: usize,
) -> SmacofssStatus {
    guard(|| {
        copy_out(
            result
                .as_ref()
                .ok_or_else(|| null("result"))?
                .0
                .conf
                .coords(),
            buf,
            len,
        )
    })
}

/// Copies the `ndat` disparities, in data order, into `buf`.
///
/// # Safety
/// As for [`smacofss_result_conf`].
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_dhat(
    result: *const SmacofssResult,
    buf: *mut f64,
    len: usize,
) -> SmacofssStatus {
    guard(|| {
        copy_out(
            &result.as_ref().ok_or_else(|| null("result"))?.0.dhat,
            buf,
            len,
        )
    })
}

/// Copies the `ndat` configuration distances into `buf`.
///
/// # Safety
/// As for [`smacofss_result_conf`].
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_confdist(
    result: *const SmacofssResult,
    buf: *mut f64,
    len: usize,
) -> SmacofssStatus {
    guard(|| {
        copy_out(
            &result.as_ref().ok_or_else(|| null("result"))?.0.confdist,
            buf,
            len,
        )
    })
}

/// The result as JSON, in the same schema as the command-line `fit`.
/// Free with [`smacofss_string_free`]. Null on failure.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_to_json(result: *const SmacofssResult) -> *mut c_char {
    let mut out = ptr::null_mut();
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        let s = smacofss::cli::to_json(&r.0).map_err(engine_err)?;
        out = CString::new(s)
            .map_err(|e| invalid(e.to_string()))?
            .into_raw();
        Ok(())
    });
    out
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn smacofss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `result` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn smacofss_result_free(result: *mut SmacofssResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
