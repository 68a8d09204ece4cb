//! Brute-force reference sums, terms-to-tolerance counts, and the
//! acceleration report the CLI serializes.

use crate::acceleration::{
    estimate_r_sequence, validate_theorem2, EstimatedRSequence, RSelectionConfig, ValidationReport,
};
use crate::kahan::CompensatedSum;
use crate::operators::RSequence;
use crate::transforms::{transform, transformed_partial_sum, SeriesSpec};
use crate::{Error, Result, Scalar};

/// Safety cap for the brute-force reference sum.
pub const ORACLE_TERM_BUDGET: u64 = 1_000_000;

/// Safety cap for terms-to-tolerance scans.
pub const TERM_SCAN_BUDGET: u64 = 100_000;

/// Consecutive sub-threshold terms required before the reference sum trusts
/// that the tail has gone quiet, and the extra terms it adds afterwards.
const ORACLE_STREAK: u32 = 30;

/// Direct reference sum of the series with a conservative stopping rule:
/// stop only after [`ORACLE_STREAK`] consecutive terms fall below
/// `tail_bound / 100`, then take the same number again for good measure.
/// Returns the sum and the number of terms used.
///
/// An oscillating series can dip below any threshold briefly; requiring a
/// long quiet run (and the trig factor's bounded magnitude) makes a false
/// stop implausible for the decaying coefficient families this crate
/// targets. Bounded sequences that end before the rule fires are summed in
/// full.
pub fn oracle_sum(series: &SeriesSpec, tail_bound: f64) -> Result<(Scalar, u64)> {
    if !(tail_bound.is_finite() && tail_bound > 0.0) {
        return Err(Error::InvalidInput(
            "tail bound must be positive and finite".into(),
        ));
    }
    let threshold = tail_bound / 100.0;
    let mut acc = CompensatedSum::new();
    let mut streak: u32 = 0;
    let mut extra_left: Option<u32> = None;
    let mut n: u64 = 0;
    loop {
        n += 1;
        if n > ORACLE_TERM_BUDGET {
            return Err(Error::BudgetExceeded {
                budget: ORACLE_TERM_BUDGET,
            });
        }
        let term = match series_term_uncached(series, n) {
            Ok(t) => t,
            Err(Error::IndexOutOfRange { .. }) => return Ok((acc.value(), n - 1)),
            Err(e) => return Err(e),
        };
        acc.add(term);
        match extra_left.as_mut() {
            Some(left) => {
                *left -= 1;
                if *left == 0 {
                    return Ok((acc.value(), n));
                }
            }
            None => {
                if term.norm() < threshold {
                    streak += 1;
                    if streak >= ORACLE_STREAK {
                        extra_left = Some(ORACLE_STREAK);
                    }
                } else {
                    streak = 0;
                }
            }
        }
    }
}

fn series_term_uncached(series: &SeriesSpec, n: u64) -> Result<Scalar> {
    let a = series.coefficients().value_uncached(n)?;
    Ok(a * Scalar::new(series.phase().trig_value(series.kind(), n), 0.0))
}

/// Smallest direct-term count `N` with `|Σₙ₌₁..N term(n) − reference| ≤ tol`.
pub fn terms_to_tolerance_direct(series: &SeriesSpec, tol: f64, reference: Scalar) -> Result<u64> {
    check_tolerance(tol)?;
    let mut acc = CompensatedSum::new();
    if (acc.value() - reference).norm() <= tol {
        return Ok(0);
    }
    for n in 1..=TERM_SCAN_BUDGET {
        acc.add(series_term_uncached(series, n)?);
        if (acc.value() - reference).norm() <= tol {
            return Ok(n);
        }
    }
    Err(Error::BudgetExceeded {
        budget: TERM_SCAN_BUDGET,
    })
}

/// Term counts for a transformed series, under both conventions: remainder
/// terms alone, and remainder terms plus the `p` head terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermCounts {
    pub remainder_terms: u64,
    pub total_terms: u64,
}

/// Smallest remainder-term count `N` whose transformed partial sum (heads
/// plus `N` remainder terms) lands within `tol` of `reference`.
pub fn terms_to_tolerance_transformed(
    series: &SeriesSpec,
    r: &RSequence,
    tol: f64,
    reference: Scalar,
) -> Result<TermCounts> {
    check_tolerance(tol)?;
    let t = transform(series, r)?;
    let counts = |n: u64| TermCounts {
        remainder_terms: n,
        total_terms: n + t.p() as u64,
    };
    let mut acc = CompensatedSum::new();
    for &h in t.head_terms() {
        acc.add(h);
    }
    if (acc.value() - reference).norm() <= tol {
        return Ok(counts(0));
    }
    for n in 1..=TERM_SCAN_BUDGET {
        acc.add(t.remainder_term(n)?);
        if (acc.value() - reference).norm() <= tol {
            return Ok(counts(n));
        }
    }
    Err(Error::BudgetExceeded {
        budget: TERM_SCAN_BUDGET,
    })
}

fn check_tolerance(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(
            "tolerance must be positive and finite".into(),
        ));
    }
    Ok(())
}

/// One successfully counted depth in an [`AccelerationReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct PerPEntry {
    pub p: usize,
    pub r_values: Vec<Scalar>,
    pub remainder_terms_needed: u64,
    /// Number of head terms (equals `p`).
    pub head_count: usize,
    pub total_terms: u64,
    /// `|partial sum − reference|` at the counted term count.
    pub achieved_error: f64,
}

/// A depth that could not be counted, and why.
#[derive(Debug, Clone, PartialEq)]
pub struct PerPFailure {
    pub p: usize,
    pub cause: Error,
}

/// Everything `accelerate` reports: the reference sum, the direct-summation
/// cost, per-depth transformed costs, and the hypothesis checks for the
/// estimated factors. Reports can be partial — depths that fail land in
/// `failures` with their cause, and a series whose factors cannot be
/// estimated at all still reports the direct numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct AccelerationReport {
    pub reference_sum: Scalar,
    pub reference_terms: u64,
    pub direct_terms_needed: u64,
    pub per_p: Vec<PerPEntry>,
    pub failures: Vec<PerPFailure>,
    pub validation: Option<ValidationReport>,
    pub tolerance: f64,
    /// The factor estimation outcome, including why it stopped early (if it
    /// did). `None` when `max_p` was 0 and no estimation was attempted.
    pub estimate: Option<EstimatedRSequence>,
}

/// Builds the full acceleration report for a series at one tolerance.
///
/// The reference sum is taken at `tol · 1e-4` so reference error cannot
/// blur the term counts. Factor estimation failures for later depths do not
/// discard the earlier depths' results.
pub fn build_report(
    series: &SeriesSpec,
    cfg: &RSelectionConfig,
    tol: f64,
) -> Result<AccelerationReport> {
    check_tolerance(tol)?;
    let (reference_sum, reference_terms) = oracle_sum(series, tol * 1e-4)?;
    let direct_terms_needed = terms_to_tolerance_direct(series, tol, reference_sum)?;

    let estimate = if cfg.max_p == 0 {
        None
    } else {
        Some(estimate_r_sequence(series.coefficients(), cfg)?)
    };

    let validation = estimate
        .as_ref()
        .and_then(|e| e.to_r_sequence())
        .map(|r| validate_theorem2(series, &r, r.len()));

    let mut per_p = Vec::new();
    let mut failures = Vec::new();
    if let Some(est) = &estimate {
        for p in 1..=est.values().len() {
            let r_values = est.values()[..p].to_vec();
            let r = RSequence::new(r_values.clone()).expect("estimates are finite");
            match terms_to_tolerance_transformed(series, &r, tol, reference_sum) {
                Ok(counts) => {
                    let t = transform(series, &r).expect("counting already transformed");
                    let achieved = (transformed_partial_sum(&t, counts.remainder_terms)?
                        - reference_sum)
                        .norm();
                    per_p.push(PerPEntry {
                        p,
                        r_values,
                        remainder_terms_needed: counts.remainder_terms,
                        head_count: p,
                        total_terms: counts.total_terms,
                        achieved_error: achieved,
                    });
                }
                Err(cause) => failures.push(PerPFailure { p, cause }),
            }
        }
    }

    Ok(AccelerationReport {
        reference_sum,
        reference_terms,
        direct_terms_needed,
        per_p,
        failures,
        validation,
        tolerance: tol,
        estimate,
    })
}
