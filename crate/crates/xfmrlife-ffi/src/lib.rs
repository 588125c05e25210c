//! C ABI for streaming transformer lifetime estimation.
//!
//! The surface mirrors the streaming pipeline: create a handle (optionally
//! from a JSON config), push one hottest-spot measurement or one
//! ambient/load interval per time step, and read the per-step outputs from
//! an out-parameter struct. Handles are opaque; every call returns an
//! [`XlStatus`] code and `xl_last_error_message` describes the most recent
//! failure on the calling thread.
//!
//! The generated header lands in `include/xfmrlife.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use xfmrlife::{Error, OperatingInterval, Pipeline, RunConfig};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// The JSON configuration failed to parse or validate.
    InvalidConfig = 2,
    /// A value was outside its physical or mathematical domain.
    DomainError = 3,
    /// The API was driven in an unsupported way.
    UsageError = 4,
    /// Every observed loss was zero; no finite estimate exists.
    NoObservableAging = 5,
}

/// Per-step outputs of the estimation loop.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct XlStepResult {
    /// 0-based index of the processed interval.
    pub hour_index: u64,
    /// Hottest-spot temperature of the interval, °C.
    pub hotspot_temp_c: f64,
    /// Aging acceleration factor at that temperature.
    pub aging_factor: f64,
    /// Per-unit loss of life over the interval.
    pub interval_loss_pu: f64,
    /// Running mean of all per-interval losses so far.
    pub cma_pu: f64,
    pub estimate_total_years: f64,
    pub estimate_remaining_years: f64,
    pub estimate_elapsed_years: f64,
    /// Nonzero once the estimate has converged.
    pub converged: bool,
    /// Step at which convergence was detected; 0 while not converged.
    pub converged_at_step: u64,
}

/// Opaque streaming estimator handle.
pub struct XlPipeline {
    inner: Pipeline,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_for(err: &Error) -> XlStatus {
    match err {
        Error::Domain(_) => XlStatus::DomainError,
        Error::NoObservableAging => XlStatus::NoObservableAging,
        Error::Config { .. } => XlStatus::InvalidConfig,
        _ => XlStatus::UsageError,
    }
}

fn fail(err: &Error) -> XlStatus {
    set_last_error(&err.to_string());
    status_for(err)
}

/// Create a pipeline. `config_json` may be null for the built-in defaults
/// (the studied transformer, standard aging constants, paper-mode
/// initialization, 1-hour intervals); otherwise it must be a UTF-8 JSON
/// document in the same schema as the CLI config file.
///
/// On success `*out` owns the handle; release it with
/// [`xl_pipeline_free`].
///
/// # Safety
/// `out` must point to writable storage for one pointer; `config_json`,
/// when non-null, must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn xl_pipeline_new(
    config_json: *const c_char,
    out: *mut *mut XlPipeline,
) -> XlStatus {
    if out.is_null() {
        set_last_error("out must not be null");
        return XlStatus::NullPointer;
    }
    unsafe { *out = ptr::null_mut() };

    let config = if config_json.is_null() {
        RunConfig::default()
    } else {
        let text = match unsafe { CStr::from_ptr(config_json) }.to_str() {
            Ok(text) => text,
            Err(_) => {
                set_last_error("config_json is not valid UTF-8");
                return XlStatus::InvalidConfig;
            }
        };
        match RunConfig::from_json_str(text) {
            Ok(config) => config,
            Err(err) => {
                set_last_error(&format!("invalid config: {err}"));
                return XlStatus::InvalidConfig;
            }
        }
    };

    match Pipeline::new(&config) {
        Ok(inner) => {
            let handle = Box::new(XlPipeline { inner });
            unsafe { *out = Box::into_raw(handle) };
            XlStatus::Ok
        }
        Err(err) => {
            set_last_error(&err.to_string());
            XlStatus::InvalidConfig
        }
    }
}

unsafe fn with_pipeline<'a>(
    pipeline: *mut XlPipeline,
    out: *mut XlStepResult,
) -> Result<(&'a mut XlPipeline, &'a mut XlStepResult), XlStatus> {
    if pipeline.is_null() || out.is_null() {
        set_last_error("pipeline and out must not be null");
        return Err(XlStatus::NullPointer);
    }
    unsafe { Ok((&mut *pipeline, &mut *out)) }
}

fn fill_result(handle: &XlPipeline, record: &xfmrlife::RunRecord, out: &mut XlStepResult) {
    let estimate = handle
        .inner
        .latest_estimate()
        .expect("a processed record implies an estimate");
    *out = XlStepResult {
        hour_index: record.hour_index,
        hotspot_temp_c: record.hotspot_temp,
        aging_factor: record.aging_factor,
        interval_loss_pu: record.interval_loss,
        cma_pu: record.cma,
        estimate_total_years: estimate.total_years,
        estimate_remaining_years: estimate.remaining_years,
        estimate_elapsed_years: estimate.elapsed_years,
        converged: record.converged,
        converged_at_step: handle.inner.converged_at().unwrap_or(0),
    };
}

/// Process one measured hottest-spot temperature (°C) and write the
/// per-step outputs to `*out`.
///
/// # Safety
/// `pipeline` must be a live handle from [`xl_pipeline_new`]; `out` must
/// point to writable storage for one [`XlStepResult`].
#[no_mangle]
pub unsafe extern "C" fn xl_pipeline_push_hotspot(
    pipeline: *mut XlPipeline,
    hotspot_temp_c: f64,
    out: *mut XlStepResult,
) -> XlStatus {
    let (handle, out) = match unsafe { with_pipeline(pipeline, out) } {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    match handle.inner.push_hotspot(hotspot_temp_c) {
        Ok(record) => {
            fill_result(handle, &record, out);
            XlStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Simulate one operating interval (ambient °C, initial and ultimate
/// per-unit load ratios; the configured interval length applies) and
/// write the per-step outputs to `*out`.
///
/// # Safety
/// Same contract as [`xl_pipeline_push_hotspot`].
#[no_mangle]
pub unsafe extern "C" fn xl_pipeline_push_interval(
    pipeline: *mut XlPipeline,
    ambient_c: f64,
    load_ratio_initial: f64,
    load_ratio_ultimate: f64,
    out: *mut XlStepResult,
) -> XlStatus {
    let (handle, out) = match unsafe { with_pipeline(pipeline, out) } {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    let interval = OperatingInterval {
        ambient_temp: ambient_c,
        load_ratio_initial,
        load_ratio_ultimate,
        duration: 1.0,
    };
    match handle.inner.push_interval(&interval) {
        Ok(record) => {
            fill_result(handle, &record, out);
            XlStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Step at which the estimate converged, or 0 while it has not.
///
/// # Safety
/// `pipeline` must be a live handle or null (null reports 0).
#[no_mangle]
pub unsafe extern "C" fn xl_pipeline_converged_step(pipeline: *const XlPipeline) -> u64 {
    if pipeline.is_null() {
        return 0;
    }
    unsafe { &*pipeline }.inner.converged_at().unwrap_or(0)
}

/// Release a handle. Passing null is a no-op.
///
/// # Safety
/// `pipeline` must be a handle from [`xl_pipeline_new`] that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn xl_pipeline_free(pipeline: *mut XlPipeline) {
    if !pipeline.is_null() {
        drop(unsafe { Box::from_raw(pipeline) });
    }
}

/// Description of the most recent failure on the calling thread. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn xl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn xl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
