//! C ABI over `fourbessel`.
//!
//! Every fallible function returns an [`FbStatus`] and writes its results
//! through out-pointers, which are left untouched on failure. The message of
//! the most recent failure on the calling thread is available from
//! [`fb_last_error_message`]. Reports are opaque handles owned by the caller
//! and released with [`fb_report_free`]; strings returned by the library are
//! released with [`fb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fourbessel::quadbessel::OracleSummary;
use fourbessel::{Error, EvaluationReport, Formula, IntegralSpec, Method, QuadratureConfig};

/// Status code of every fallible call. `FB_STATUS_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbStatus {
    Ok = 0,
    /// No bridge order satisfies both triangle windows.
    NoValidBridge = 1,
    /// A dividing 3j symbol vanishes.
    PrefactorZero = 2,
    /// k1 and k2 coincide for a bridge order of at least one.
    DegenerateMomenta = 3,
    /// The quadrature oracle did not reach its tolerance.
    NoConvergence = 4,
    /// An argument is outside the mathematical domain.
    DomainError = 5,
    /// A required pointer was null.
    NullPointer = 6,
    /// An index or enum value is out of range.
    InvalidArgument = 7,
    /// The request needs data the report does not hold.
    NotAvailable = 8,
    /// An internal panic was caught at the boundary.
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbFormula {
    /// Paired closed form when the orders allow it, otherwise the general sum.
    Auto = 0,
    General = 1,
    Paired = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbMethod {
    Analytic = 0,
    Paired = 1,
    Oracle = 2,
}

/// One term of an analytic report. Indices are -1 for paired terms, which
/// carry no bridge or Legendre indices.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbTerm {
    pub cal_l: i32,
    pub cal_lp: i32,
    pub l: i32,
    pub lp: i32,
    pub mu: u32,
    pub value: f64,
}

/// Oracle settings. A non-positive `max_radius` selects the default radius.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbQuadratureConfig {
    pub rel_tol: f64,
    pub max_radius: f64,
    pub panels_per_period: u32,
    pub acceleration_depth: u32,
}

impl From<FbQuadratureConfig> for QuadratureConfig {
    fn from(c: FbQuadratureConfig) -> Self {
        QuadratureConfig {
            rel_tol: c.rel_tol,
            max_radius: (c.max_radius > 0.0).then_some(c.max_radius),
            panels_per_period: c.panels_per_period,
            acceleration_depth: c.acceleration_depth,
        }
    }
}

/// Opaque evaluation report.
pub struct FbReport {
    inner: EvaluationReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    // interior NULs would truncate the message on the C side anyway
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: FbStatus, msg: impl Into<String>) -> FbStatus {
    set_last_error(msg);
    status
}

fn status_of(err: &Error) -> FbStatus {
    match err {
        Error::NoValidBridge { .. } => FbStatus::NoValidBridge,
        Error::PrefactorZero { .. } => FbStatus::PrefactorZero,
        Error::DegenerateMomenta { .. } => FbStatus::DegenerateMomenta,
        Error::NoConvergence { .. } => FbStatus::NoConvergence,
        Error::Domain(_) => FbStatus::DomainError,
    }
}

fn from_error(err: Error) -> FbStatus {
    fail(status_of(&err), err.to_string())
}

/// Run `f` with panics converted to `FbStatus::Internal`.
fn guarded(f: impl FnOnce() -> FbStatus) -> FbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_owned())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_owned());
            fail(FbStatus::Internal, format!("internal error: {msg}"))
        }
    }
}

/// Read four orders from a caller array.
///
/// # Safety
/// `lambda` is null or points to four readable `u32`.
unsafe fn read_lambda(lambda: *const u32) -> Option<[u32; 4]> {
    if lambda.is_null() {
        return None;
    }
    Some(ptr::read_unaligned(lambda.cast::<[u32; 4]>()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failure on this thread, or null if none occurred.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default oracle settings.
#[no_mangle]
pub extern "C" fn fb_quadrature_config_default() -> FbQuadratureConfig {
    let d = QuadratureConfig::default();
    FbQuadratureConfig {
        rel_tol: d.rel_tol,
        max_radius: d.max_radius.unwrap_or(0.0),
        panels_per_period: d.panels_per_period,
        acceleration_depth: d.acceleration_depth,
    }
}

/// Evaluate the four-Bessel integral analytically. `formula` is an
/// `FbFormula` value.
///
/// # Safety
/// `lambda` points to four `u32`; `out` is a valid pointer to write a handle.
#[no_mangle]
pub unsafe extern "C" fn fb_evaluate(
    lambda: *const u32,
    k1: f64,
    k2: f64,
    formula: i32,
    out: *mut *mut FbReport,
) -> FbStatus {
    guarded(|| {
        let Some(lambda) = read_lambda(lambda) else {
            return fail(FbStatus::NullPointer, "lambda is null");
        };
        if out.is_null() {
            return fail(FbStatus::NullPointer, "out is null");
        }
        // an out-of-range value must not be transmuted into the enum
        let formula = match formula {
            f if f == FbFormula::Auto as i32 => Formula::Auto,
            f if f == FbFormula::General as i32 => Formula::General,
            f if f == FbFormula::Paired as i32 => Formula::Paired,
            f => return fail(FbStatus::InvalidArgument, format!("unknown formula {f}")),
        };
        let report = IntegralSpec::new(lambda, k1, k2)
            .and_then(|spec| fourbessel::evaluate_with(&spec, formula));
        match report {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(FbReport { inner }));
                FbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Run the quadrature oracle on the report's integral and record the
/// relative discrepancy. A null `config` uses the defaults.
///
/// # Safety
/// `report` is a live handle; `config` is null or valid.
#[no_mangle]
pub unsafe extern "C" fn fb_report_check(
    report: *mut FbReport,
    config: *const FbQuadratureConfig,
) -> FbStatus {
    guarded(|| {
        let Some(report) = report.as_mut() else {
            return fail(FbStatus::NullPointer, "report is null");
        };
        let cfg = config
            .as_ref()
            .map_or_else(QuadratureConfig::default, |c| (*c).into());
        let r = &report.inner;
        let oracle = IntegralSpec::new(r.lambda, r.k1, r.k2)
            .and_then(|s| fourbessel::quad_bessel_numeric(&s, &cfg));
        match oracle {
            Ok(o) => {
                let summary = OracleSummary {
                    value: o.value,
                    error_estimate: o.error_estimate,
                };
                report.inner = report.inner.clone().with_oracle(summary);
                FbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Release a report. Null is ignored.
///
/// # Safety
/// `report` is null or a handle from [`fb_evaluate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fb_report_free(report: *mut FbReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Value of the integral, or NaN for a null handle.
///
/// # Safety
/// `report` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_report_value(report: *const FbReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.inner.value)
}

/// Bridge order L, or -1 when the report has none or the handle is null.
///
/// # Safety
/// `report` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_report_bridge_order(report: *const FbReport) -> i64 {
    report
        .as_ref()
        .and_then(|r| r.inner.bridge_l)
        .map_or(-1, i64::from)
}

/// How the value was obtained.
///
/// # Safety
/// `report` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_report_method(report: *const FbReport, out: *mut FbMethod) -> FbStatus {
    let (Some(r), false) = (report.as_ref(), out.is_null()) else {
        return fail(FbStatus::NullPointer, "report or out is null");
    };
    *out = match r.inner.method {
        Method::Analytic => FbMethod::Analytic,
        Method::Paired => FbMethod::Paired,
        Method::Oracle => FbMethod::Oracle,
    };
    FbStatus::Ok
}

/// Number of terms, zero for a null handle.
///
/// # Safety
/// `report` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_report_term_count(report: *const FbReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.terms.len())
}

/// Copy term `index` into `out`.
///
/// # Safety
/// `report` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fb_report_term(
    report: *const FbReport,
    index: usize,
    out: *mut FbTerm,
) -> FbStatus {
    let (Some(r), false) = (report.as_ref(), out.is_null()) else {
        return fail(FbStatus::NullPointer, "report or out is null");
    };
    let Some(t) = r.inner.terms.get(index) else {
        return fail(
            FbStatus::InvalidArgument,
            format!(
                "term index {index} out of range for {} terms",
                r.inner.terms.len()
            ),
        );
    };
    let index = |d: Option<u32>| d.map_or(-1, |d| i32::try_from(d).unwrap_or(i32::MAX));
    *out = FbTerm {
        cal_l: index(t.cal_l),
        cal_lp: index(t.cal_lp),
        l: index(t.l),
        lp: index(t.lp),
        mu: t.mu,
        value: t.value,
    };
    FbStatus::Ok
}

/// Oracle value, error estimate and relative discrepancy recorded by
/// [`fb_report_check`]. Any out-pointer may be null.
///
/// # Safety
/// `report` is a live handle; non-null out-pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn fb_report_oracle(
    report: *const FbReport,
    value: *mut f64,
    error_estimate: *mut f64,
    discrepancy: *mut f64,
) -> FbStatus {
    let Some(r) = report.as_ref() else {
        return fail(FbStatus::NullPointer, "report is null");
    };
    let (Some(o), Some(d)) = (r.inner.oracle, r.inner.discrepancy) else {
        return fail(
            FbStatus::NotAvailable,
            "report has not been checked against the oracle",
        );
    };
    for (p, v) in [
        (value, o.value),
        (error_estimate, o.error_estimate),
        (discrepancy, d),
    ] {
        if let Some(p) = p.as_mut() {
            *p = v;
        }
    }
    FbStatus::Ok
}

/// The report as JSON, in the same shape the CLI prints. Free with
/// [`fb_string_free`]. Null on failure.
///
/// # Safety
/// `report` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_report_to_json(report: *const FbReport) -> *mut c_char {
    let Some(r) = report.as_ref() else {
        set_last_error("report is null");
        return ptr::null_mut();
    };
    match serde_json::to_string(&r.inner) {
        Ok(s) => into_c_string(s),
        Err(e) => {
            set_last_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Evaluate the integral by quadrature alone. A null `config` uses the
/// defaults; `error_estimate` may be null.
///
/// # Safety
/// `lambda` points to four `u32`; `value` is writable.
#[no_mangle]
pub unsafe extern "C" fn fb_oracle(
    lambda: *const u32,
    k1: f64,
    k2: f64,
    config: *const FbQuadratureConfig,
    value: *mut f64,
    error_estimate: *mut f64,
) -> FbStatus {
    guarded(|| {
        let Some(lambda) = read_lambda(lambda) else {
            return fail(FbStatus::NullPointer, "lambda is null");
        };
        if value.is_null() {
            return fail(FbStatus::NullPointer, "value is null");
        }
        let cfg = config
            .as_ref()
            .map_or_else(QuadratureConfig::default, |c| (*c).into());
        match IntegralSpec::new(lambda, k1, k2)
            .and_then(|s| fourbessel::quad_bessel_numeric(&s, &cfg))
        {
            Ok(o) => {
                *value = o.value;
                if let Some(e) = error_estimate.as_mut() {
                    *e = o.error_estimate;
                }
                FbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Smallest parity-valid bridge order.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fb_bridge_order(
    l1: u32,
    l2: u32,
    l3: u32,
    l4: u32,
    out: *mut u32,
) -> FbStatus {
    if out.is_null() {
        return fail(FbStatus::NullPointer, "out is null");
    }
    match fourbessel::select_bridge_order(l1, l2, l3, l4) {
        Ok(l) => {
            *out = l;
            FbStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Write the float value and, if `exact` is non-null, an exact string such
/// as `+sqrt(2/15)` to be freed with [`fb_string_free`].
unsafe fn write_exact(
    v: &fourbessel::SignedSqrtRational,
    value: *mut f64,
    exact: *mut *mut c_char,
) -> FbStatus {
    if value.is_null() {
        return fail(FbStatus::NullPointer, "value is null");
    }
    *value = v.to_f64();
    if let Some(exact) = exact.as_mut() {
        *exact = into_c_string(v.to_string());
    }
    FbStatus::Ok
}

/// The 3j symbol (j1 j2 j3; 0 0 0).
///
/// # Safety
/// `value` is writable; `exact` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn fb_wigner_3j_zero(
    j1: u32,
    j2: u32,
    j3: u32,
    value: *mut f64,
    exact: *mut *mut c_char,
) -> FbStatus {
    guarded(|| write_exact(&fourbessel::wigner_3j_zero(j1, j2, j3), value, exact))
}

/// The 6j symbol {j1 j2 j3; j4 j5 j6}.
///
/// # Safety
/// `value` is writable; `exact` is null or writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fb_wigner_6j(
    j1: u32,
    j2: u32,
    j3: u32,
    j4: u32,
    j5: u32,
    j6: u32,
    value: *mut f64,
    exact: *mut *mut c_char,
) -> FbStatus {
    guarded(|| write_exact(&fourbessel::wigner_6j(j1, j2, j3, j4, j5, j6), value, exact))
}

/// Associated Legendre function of order `twice_m / 2` for `x > 1`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fb_assoc_legendre_gt1(
    l: u32,
    twice_m: i32,
    x: f64,
    out: *mut f64,
) -> FbStatus {
    guarded(|| {
        if out.is_null() {
            return fail(FbStatus::NullPointer, "out is null");
        }
        match fourbessel::assoc_legendre_gt1(
            l,
            fourbessel::HalfIntegerOrder::from_twice(twice_m),
            x,
        ) {
            Ok(v) => {
                *out = v;
                FbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
