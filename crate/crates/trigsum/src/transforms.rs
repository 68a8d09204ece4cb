//! Rewriting a trigonometric series as head terms plus an accelerated
//! remainder.
//!
//! For admissible scale factors the identity behind [`transform`] is exact:
//! the sum of the original series equals the sum of `p` closed-form head
//! terms plus the sum of a remainder series whose `n`-th coefficient is the
//! depth-`p` difference `L(aₙ)`. Each scale factor `r` contributes a
//! denominator `1 − 2r·cos(αx) + r²`; factors that push a denominator near
//! zero are rejected up front because every head term and every remainder
//! term divides by them.

use crate::kahan::CompensatedSum;
use crate::operators::{signed_weights, trig_l_values, RSequence, TrigKind, TrigPhase};
use crate::sequence::CoefficientSequence;
use crate::{Error, Result, Scalar};

/// Reject a scale factor whose denominator magnitude falls at or below this.
///
/// The transform divides by each `1 − 2r·cos(αx) + r²` once per head term and
/// once per remainder term; anywhere near zero the rewrite is numerically
/// meaningless even though it is formally exact.
pub const DENOMINATOR_EPSILON: f64 = 1e-8;

/// A trigonometric series: coefficients plus the phase and factor kind.
///
/// Represents `Σₙ₌₁ aₙ·cos((αn + β)x)` or the sine counterpart.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    coefficients: CoefficientSequence,
    phase: TrigPhase,
    kind: TrigKind,
}

impl SeriesSpec {
    pub fn new(coefficients: CoefficientSequence, phase: TrigPhase, kind: TrigKind) -> Self {
        Self {
            coefficients,
            phase,
            kind,
        }
    }

    pub fn coefficients(&self) -> &CoefficientSequence {
        &self.coefficients
    }

    pub fn phase(&self) -> &TrigPhase {
        &self.phase
    }

    pub fn kind(&self) -> TrigKind {
        self.kind
    }

    /// The `n`-th term `aₙ·cos((αn + β)x)` (or sine), `n ≥ 1`.
    pub fn term(&self, n: u64) -> Result<Scalar> {
        let a = self.coefficients.value(n)?;
        Ok(a * Scalar::new(self.phase.trig_value(self.kind, n), 0.0))
    }
}

/// `1 − 2r·cos(αx) + r²` for one scale factor.
pub(crate) fn denominator(phase: &TrigPhase, r: Scalar) -> Scalar {
    let c = (phase.alpha() * phase.x()).cos();
    Scalar::new(1.0, 0.0) - r * (2.0 * c) + r * r
}

/// The first `k_terms` head terms, all sharing one running denominator
/// product. This is the single implementation behind both [`transform`] and
/// the Euler-style partial sums, so the two agree bit for bit.
pub(crate) fn head_terms_prefix(
    series: &SeriesSpec,
    r_values: &[Scalar],
    k_terms: usize,
) -> Result<Vec<Scalar>> {
    debug_assert!(k_terms <= r_values.len());
    let a = series.coefficients();
    let mut heads = Vec::with_capacity(k_terms);
    let mut denom_product = Scalar::new(1.0, 0.0);
    for k in 0..k_terms {
        let d = denominator(series.phase(), r_values[k]);
        check_denominator(d, k)?;
        denom_product *= d;
        let coeff = if k == 0 {
            a.value(1)?
        } else {
            crate::operators::apply_l_values(a, &r_values[..k], 1)?
        };
        let trig = trig_l_values(series.kind(), series.phase(), &r_values[..k + 1], 0);
        heads.push(coeff * trig / denom_product);
    }
    Ok(heads)
}

fn check_denominator(d: Scalar, index: usize) -> Result<()> {
    let magnitude = d.norm();
    if magnitude <= DENOMINATOR_EPSILON {
        return Err(Error::DenominatorNearZero {
            index: index + 1,
            magnitude,
            threshold: DENOMINATOR_EPSILON,
        });
    }
    Ok(())
}

/// Outcome of [`transform`]: the head terms, the per-factor denominators, and
/// an evaluator for the accelerated remainder series.
#[derive(Debug, Clone)]
pub struct TransformResult {
    series: SeriesSpec,
    r: RSequence,
    head_terms: Vec<Scalar>,
    denominators: Vec<Scalar>,
    weights: Vec<Scalar>,
    denom_product: Scalar,
}

impl TransformResult {
    /// Operator depth; also the number of head terms.
    pub fn p(&self) -> usize {
        self.r.len()
    }

    pub fn head_terms(&self) -> &[Scalar] {
        &self.head_terms
    }

    pub fn denominators(&self) -> &[Scalar] {
        &self.denominators
    }

    pub fn r(&self) -> &RSequence {
        &self.r
    }

    /// Sum of the head terms alone.
    pub fn head_sum(&self) -> Scalar {
        let mut acc = CompensatedSum::new();
        for &h in &self.head_terms {
            acc.add(h);
        }
        acc.value()
    }

    /// The `n`-th term of the accelerated remainder series
    /// `L(aₙ)·C(n) / Π dⱼ`, `n ≥ 1`. Costs `O(p)` coefficient reads.
    pub fn remainder_term(&self, n: u64) -> Result<Scalar> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "remainder terms are indexed from 1".into(),
            ));
        }
        let p = self.p();
        let a = self.series.coefficients();
        let mut coeff = CompensatedSum::new();
        let mut trig = CompensatedSum::new();
        for (k, &w) in self.weights.iter().enumerate() {
            let shift = (p - k) as u64;
            coeff.add(w * a.value(n + shift)?);
            trig.add(
                w * Scalar::new(
                    self.series
                        .phase()
                        .trig_value(self.series.kind(), n + shift),
                    0.0,
                ),
            );
        }
        Ok(coeff.value() * trig.value() / self.denom_product)
    }
}

/// Rewrites `series` against the scale factors `r`.
///
/// Fails only when a denominator is near zero ([`DENOMINATOR_EPSILON`]); the
/// identity itself holds for any factors, useful or not.
pub fn transform(series: &SeriesSpec, r: &RSequence) -> Result<TransformResult> {
    let p = r.len();
    let mut denominators = Vec::with_capacity(p);
    let mut denom_product = Scalar::new(1.0, 0.0);
    for (j, &rj) in r.values().iter().enumerate() {
        let d = denominator(series.phase(), rj);
        check_denominator(d, j)?;
        denominators.push(d);
        denom_product *= d;
    }
    let head_terms = head_terms_prefix(series, r.values(), p)?;
    Ok(TransformResult {
        series: series.clone(),
        r: r.clone(),
        head_terms,
        denominators,
        weights: signed_weights(r.values()),
        denom_product,
    })
}

/// [`transform`] with one scale factor repeated `p` times.
pub fn transform_single_r(series: &SeriesSpec, r: Scalar, p: usize) -> Result<TransformResult> {
    transform(series, &RSequence::uniform(r, p)?)
}

/// Head terms plus the first `remainder_terms` accelerated remainder terms.
pub fn transformed_partial_sum(t: &TransformResult, remainder_terms: u64) -> Result<Scalar> {
    let mut acc = CompensatedSum::new();
    for &h in t.head_terms() {
        acc.add(h);
    }
    for n in 1..=remainder_terms {
        acc.add(t.remainder_term(n)?);
    }
    Ok(acc.value())
}
