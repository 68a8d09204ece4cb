//! C ABI over the trigsum library.
//!
//! Series live behind an opaque [`TrigsumSeries`] handle; every fallible
//! call returns a [`TrigsumStatus`] and writes its results through out
//! pointers. Constructors return null on invalid input. The matching
//! header, `include/trigsum.h`, is generated by the build script.

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use trigsum::acceleration::{estimate_r_sequence, RSelectionConfig, StopReason};
use trigsum::cli::report_json;
use trigsum::evaluation::{build_report, oracle_sum};
use trigsum::operators::{RSequence, TrigKind, TrigPhase};
use trigsum::sequence::CoefficientSequence;
use trigsum::transforms::{transform, transformed_partial_sum, SeriesSpec};
use trigsum::{Error, Scalar};

/// Outcome of a trigsum call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigsumStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    InvalidInput = 2,
    IndexOutOfRange = 3,
    /// A transform denominator was too close to zero.
    DenominatorNearZero = 4,
    /// A ratio probe failed to settle.
    RatioDivergent = 5,
    ZeroDenominator = 6,
    /// A term budget ran out before the stopping rule fired.
    BudgetExceeded = 7,
    /// The library panicked; treat the out values as unwritten.
    Panic = 8,
}

/// Trigonometric factor of the series.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigsumKind {
    Cosine = 0,
    Sine = 1,
}

/// Why factor estimation stopped.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigsumStopReason {
    /// All requested factors were estimated.
    Completed = 0,
    /// The differenced coefficients vanished; no further factor is needed.
    Annihilated = 1,
    /// A ratio probe failed to settle; the chain ends early.
    RatioDivergent = 2,
}

/// An opaque series handle; create with one of the `trigsum_series_*`
/// constructors and release with `trigsum_series_free`.
pub struct TrigsumSeries {
    inner: SeriesSpec,
}

fn status_of(err: &Error) -> TrigsumStatus {
    match err {
        Error::InvalidInput(_) => TrigsumStatus::InvalidInput,
        Error::IndexOutOfRange { .. } => TrigsumStatus::IndexOutOfRange,
        Error::DenominatorNearZero { .. } => TrigsumStatus::DenominatorNearZero,
        Error::RatioDivergent { .. } => TrigsumStatus::RatioDivergent,
        Error::ZeroDenominator => TrigsumStatus::ZeroDenominator,
        Error::BudgetExceeded { .. } => TrigsumStatus::BudgetExceeded,
    }
}

fn guarded(f: impl FnOnce() -> TrigsumStatus) -> TrigsumStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(TrigsumStatus::Panic)
}

fn new_series(
    coefficients: trigsum::Result<CoefficientSequence>,
    alpha: f64,
    beta: f64,
    x: f64,
    kind: TrigsumKind,
) -> *mut TrigsumSeries {
    let built = catch_unwind(AssertUnwindSafe(|| -> trigsum::Result<SeriesSpec> {
        let phase = TrigPhase::new(alpha, beta, x)?;
        let kind = match kind {
            TrigsumKind::Cosine => TrigKind::Cosine,
            TrigsumKind::Sine => TrigKind::Sine,
        };
        Ok(SeriesSpec::new(coefficients?, phase, kind))
    }));
    match built {
        Ok(Ok(inner)) => Box::into_raw(Box::new(TrigsumSeries { inner })),
        _ => std::ptr::null_mut(),
    }
}

/// Gathers `len` complex values from a real array and an optional imaginary
/// array (null = all zero).
unsafe fn gather_values(re: *const f64, im: *const f64, len: usize) -> Option<Vec<Scalar>> {
    if re.is_null() || len == 0 {
        return None;
    }
    let re = std::slice::from_raw_parts(re, len);
    let values = if im.is_null() {
        re.iter().map(|&r| Scalar::new(r, 0.0)).collect()
    } else {
        let im = std::slice::from_raw_parts(im, len);
        re.iter()
            .zip(im)
            .map(|(&r, &i)| Scalar::new(r, i))
            .collect()
    };
    Some(values)
}

/// Creates a series with coefficients `1/(aⁿ + bⁿ)`; null if the input is
/// invalid (requires `0 < a < b` and a finite nonzero phase).
#[no_mangle]
pub extern "C" fn trigsum_series_two_exp(
    a: f64,
    b: f64,
    alpha: f64,
    beta: f64,
    x: f64,
    kind: TrigsumKind,
) -> *mut TrigsumSeries {
    new_series(
        CoefficientSequence::two_exponential(a, b),
        alpha,
        beta,
        x,
        kind,
    )
}

/// Creates a series with coefficients `ρⁿ`; null if the input is invalid.
#[no_mangle]
pub extern "C" fn trigsum_series_geometric(
    rho: f64,
    alpha: f64,
    beta: f64,
    x: f64,
    kind: TrigsumKind,
) -> *mut TrigsumSeries {
    new_series(CoefficientSequence::geometric(rho), alpha, beta, x, kind)
}

/// Creates a series with coefficients `n⁻ˢ`; null if the input is invalid.
#[no_mangle]
pub extern "C" fn trigsum_series_power(
    s: f64,
    alpha: f64,
    beta: f64,
    x: f64,
    kind: TrigsumKind,
) -> *mut TrigsumSeries {
    new_series(CoefficientSequence::power(s), alpha, beta, x, kind)
}

/// Creates a series from `len` explicit coefficients: `re[k]` (+ `im[k]`i
/// when `im` is non-null) is the coefficient of index `k + 1`. Null if `re`
/// is null, `len` is zero, or the phase is invalid.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn trigsum_series_from_values(
    re: *const f64,
    im: *const f64,
    len: usize,
    alpha: f64,
    beta: f64,
    x: f64,
    kind: TrigsumKind,
) -> *mut TrigsumSeries {
    match gather_values(re, im, len) {
        Some(values) => new_series(
            CoefficientSequence::from_values(values),
            alpha,
            beta,
            x,
            kind,
        ),
        None => std::ptr::null_mut(),
    }
}

/// Releases a series handle. Null is a no-op.
///
/// # Safety
/// `series` must be null or a pointer returned by a constructor, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn trigsum_series_free(series: *mut TrigsumSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Sums the series directly with the conservative stopping rule, writing
/// the sum and the number of terms used.
///
/// # Safety
/// `series` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn trigsum_sum(
    series: *const TrigsumSeries,
    tail_bound: f64,
    out_sum_re: *mut f64,
    out_sum_im: *mut f64,
    out_terms: *mut u64,
) -> TrigsumStatus {
    if series.is_null() || out_sum_re.is_null() || out_sum_im.is_null() || out_terms.is_null() {
        return TrigsumStatus::NullArgument;
    }
    let series = &(*series).inner;
    guarded(|| match oracle_sum(series, tail_bound) {
        Ok((sum, terms)) => {
            *out_sum_re = sum.re;
            *out_sum_im = sum.im;
            *out_terms = terms;
            TrigsumStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Estimates up to `max_p` scale factors into `out_re`/`out_im` (each with
/// capacity `max_p`), writing how many were found and why estimation
/// stopped. A stop before `max_p` factors is still `Ok`; the shorter chain
/// is usable.
///
/// # Safety
/// `series` must be a live handle; `out_re` and `out_im` must have room for
/// `max_p` doubles; the remaining out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn trigsum_estimate_r(
    series: *const TrigsumSeries,
    max_p: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    out_len: *mut usize,
    out_reason: *mut TrigsumStopReason,
) -> TrigsumStatus {
    if series.is_null()
        || out_re.is_null()
        || out_im.is_null()
        || out_len.is_null()
        || out_reason.is_null()
    {
        return TrigsumStatus::NullArgument;
    }
    let series = &(*series).inner;
    guarded(|| {
        let est = match estimate_r_sequence(series.coefficients(), &RSelectionConfig::new(max_p)) {
            Ok(est) => est,
            Err(e) => return status_of(&e),
        };
        for (k, v) in est.values().iter().enumerate() {
            *out_re.add(k) = v.re;
            *out_im.add(k) = v.im;
        }
        *out_len = est.values().len();
        *out_reason = match est.reason() {
            StopReason::Completed => TrigsumStopReason::Completed,
            StopReason::Annihilated { .. } => TrigsumStopReason::Annihilated,
            StopReason::RatioDivergent { .. } => TrigsumStopReason::RatioDivergent,
        };
        TrigsumStatus::Ok
    })
}

/// Applies the transform with the given scale factors (`r_im` null = all
/// real) and writes the partial sum with `remainder_terms` remainder terms.
///
/// # Safety
/// `series` must be a live handle; `r_re` (and `r_im` when non-null) must
/// point to `r_len` readable doubles; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn trigsum_transformed_partial_sum(
    series: *const TrigsumSeries,
    r_re: *const f64,
    r_im: *const f64,
    r_len: usize,
    remainder_terms: u64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> TrigsumStatus {
    if series.is_null() || out_re.is_null() || out_im.is_null() {
        return TrigsumStatus::NullArgument;
    }
    let Some(r_values) = gather_values(r_re, r_im, r_len) else {
        return TrigsumStatus::NullArgument;
    };
    let series = &(*series).inner;
    guarded(|| {
        let result = RSequence::new(r_values)
            .and_then(|r| transform(series, &r))
            .and_then(|t| transformed_partial_sum(&t, remainder_terms));
        match result {
            Ok(sum) => {
                *out_re = sum.re;
                *out_im = sum.im;
                TrigsumStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Builds the full acceleration report and returns it as the same JSON the
/// CLI prints. The string is heap-allocated; release it with
/// `trigsum_string_free`.
///
/// # Safety
/// `series` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trigsum_accelerate_json(
    series: *const TrigsumSeries,
    tol: f64,
    max_p: usize,
    out_json: *mut *mut c_char,
) -> TrigsumStatus {
    if series.is_null() || out_json.is_null() {
        return TrigsumStatus::NullArgument;
    }
    let series = &(*series).inner;
    guarded(|| {
        let report = match build_report(series, &RSelectionConfig::new(max_p), tol) {
            Ok(report) => report,
            Err(e) => return status_of(&e),
        };
        // JSON output never contains interior NULs.
        let text = CString::new(report_json(&report)).expect("JSON is NUL-free");
        *out_json = text.into_raw();
        TrigsumStatus::Ok
    })
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn trigsum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
