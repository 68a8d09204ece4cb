//! Data-driven choice of scale factors, hypothesis checks for the
//! infinite-expansion form, and Euler-style partial sums.
//!
//! The good scale factors are limits of coefficient ratios: `r₁` is the limit
//! of `aₙ₊₁/aₙ`, and once `r₁, …, r_p` are fixed, `r_{p+1}` is the limit of
//! the same ratio taken over the differenced sequence `L(aₙ)`. The estimator
//! reads those limits off finite probes.
//!
//! Probing is done entirely in extended precision (see the crate's internal
//! `extended` module): the differenced values shrink geometrically while the
//! terms being cancelled do not, so double precision runs out of signal
//! before the ratio settles — and worse, rounding in an accepted factor
//! leaves a residual component that later, smaller probes lock onto. The
//! chain of accepted factors is therefore carried in extended precision from
//! stage to stage and only rounded on the way out.

use crate::extended::{aitken_best, neville_unit_fraction, HpComplex};
use crate::kahan::CompensatedSum;
use crate::operators::RSequence;
use crate::sequence::CoefficientSequence;
use crate::transforms::{denominator, head_terms_prefix, SeriesSpec};
use crate::{Error, Result, Scalar};

/// Tuning for the ratio estimator.
///
/// `ratio_probe_start` is the first index probed, `ratio_probe_count` the
/// number of consecutive stagnant probes required before an estimate is
/// accepted, and `stagnation_tol` the relative movement below which a probe
/// counts as stagnant. The defaults suit coefficient sequences whose ratios
/// settle within the first hundred or so indices; bounded sequences are
/// probed later than `ratio_probe_start` only as far as their length allows.
#[derive(Debug, Clone, PartialEq)]
pub struct RSelectionConfig {
    /// Maximum number of scale factors to estimate.
    pub max_p: usize,
    pub ratio_probe_start: u64,
    pub ratio_probe_count: u32,
    pub stagnation_tol: f64,
}

impl Default for RSelectionConfig {
    fn default() -> Self {
        Self {
            max_p: 4,
            ratio_probe_start: 30,
            ratio_probe_count: 10,
            stagnation_tol: 1e-9,
        }
    }
}

impl RSelectionConfig {
    pub fn new(max_p: usize) -> Self {
        Self {
            max_p,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_p == 0 {
            return Err(Error::InvalidInput("estimation needs max_p >= 1".into()));
        }
        if self.ratio_probe_start == 0 || self.ratio_probe_count == 0 {
            return Err(Error::InvalidInput(
                "probe start and probe count must be positive".into(),
            ));
        }
        if !(self.stagnation_tol.is_finite() && self.stagnation_tol > 0.0) {
            return Err(Error::InvalidInput(
                "stagnation tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// How far past `ratio_probe_start` a single stage will scan before giving
/// up on stagnation.
const MAX_PROBE_SPAN: u64 = 220;

/// Differenced values at or below this fraction of the local coefficient
/// scale count as zero: the operator has annihilated the sequence down to
/// extended-precision noise.
const ANNIHILATION_REL: f64 = 1e-48;

/// Extrapolated channels may only claim stagnation while the raw ratio
/// itself is at least this quiet; Aitken acceleration of a genuinely
/// oscillating ratio would otherwise stagnate on its antilimit.
const RAW_GATE: f64 = 1e-2;

/// Points used by the reciprocal-index extrapolation channel: a deep window
/// for natively extended-precision data, a short one for promoted `f64`
/// data, whose ~1e-16 sample noise an eight-point extrapolation would blow
/// up past the stagnation tolerance.
const NEVILLE_POINTS_EXTENDED: usize = 8;
const NEVILLE_POINTS_PROMOTED: usize = 5;

/// Why [`estimate_r_sequence`] stopped before reaching `max_p` factors.
#[derive(Debug, Clone, PartialEq)]
pub enum StopReason {
    /// All `max_p` factors were estimated.
    Completed,
    /// At `depth` accepted factors the differenced coefficients vanished at
    /// every probe: the operator annihilates the sequence and no further
    /// factor is needed (or estimable).
    Annihilated { depth: usize },
    /// At `depth` accepted factors the ratio probes never stagnated.
    RatioDivergent {
        depth: usize,
        last_estimate: Option<Scalar>,
    },
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StopReason::Completed => write!(f, "completed"),
            StopReason::Annihilated { .. } => write!(f, "annihilated"),
            StopReason::RatioDivergent { .. } => write!(f, "ratio-divergent"),
        }
    }
}

/// Result of [`estimate_r_sequence`]: the factors found, and why estimation
/// stopped where it did.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedRSequence {
    values: Vec<Scalar>,
    reason: StopReason,
}

impl EstimatedRSequence {
    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn reason(&self) -> &StopReason {
        &self.reason
    }

    /// The factors as an [`RSequence`]; `None` when none were found.
    pub fn to_r_sequence(&self) -> Option<RSequence> {
        if self.values.is_empty() {
            None
        } else {
            Some(RSequence::new(self.values.clone()).expect("estimates are finite"))
        }
    }
}

enum ProbeOutcome {
    Converged(HpComplex),
    Annihilated,
    Divergent(Option<HpComplex>),
}

/// One stagnation-tracked estimate stream.
struct Channel {
    prev: Option<Scalar>,
    last_hp: Option<HpComplex>,
    last_diff_rel: f64,
    run: u32,
}

impl Channel {
    fn new() -> Self {
        Self {
            prev: None,
            last_hp: None,
            last_diff_rel: f64::INFINITY,
            run: 0,
        }
    }

    fn feed(&mut self, v: HpComplex, stagnation_tol: f64) {
        let s = v.to_scalar();
        let finite = s.re.is_finite() && s.im.is_finite();
        match (finite, self.prev) {
            (true, Some(prev)) => {
                let rel = (s - prev).norm() / 1f64.max(s.norm());
                self.last_diff_rel = rel;
                if rel <= stagnation_tol {
                    self.run += 1;
                } else {
                    self.run = 0;
                }
            }
            _ => {
                self.last_diff_rel = f64::INFINITY;
                self.run = 0;
            }
        }
        self.prev = if finite { Some(s) } else { None };
        self.last_hp = Some(v);
    }
}

/// The differenced value `L(aₙ)` for an extended-precision factor chain,
/// by the defining recurrence.
fn hp_l(a: &CoefficientSequence, chain: &[HpComplex], n: u64) -> Result<HpComplex> {
    let p = chain.len();
    let mut window: Vec<HpComplex> = (0..=p as u64)
        .map(|i| a.hp_value(n + i))
        .collect::<Result<_>>()?;
    for (j, rj) in chain.iter().enumerate() {
        for i in 0..p - j {
            window[i] = window[i + 1].sub(&rj.mul(&window[i]));
        }
    }
    Ok(window.swap_remove(0))
}

/// Scans ratio probes for the next factor given an accepted chain.
///
/// Three estimate streams run side by side over the probe ratios: iterated
/// Aitken Δ² (fast for geometric approach), polynomial extrapolation in `1/n`
/// (fast for ratios that settle like `c + d/n`), and the raw ratio itself.
/// The first stream to hold still for `ratio_probe_count` consecutive probes
/// wins; extrapolated streams additionally need the raw ratio to be moving
/// slowly, so an oscillating ratio cannot sneak in through its antilimit.
fn probe_next(
    a: &CoefficientSequence,
    chain: &[HpComplex],
    cfg: &RSelectionConfig,
) -> Result<ProbeOutcome> {
    let p = chain.len();
    let need = cfg.ratio_probe_count;

    // Bounded sequences may not reach the configured start; probe what the
    // data allows, keeping clear of the very first indices where transients
    // dominate.
    let bound = match a.len() {
        Some(len) => {
            let highest = len.saturating_sub(1 + p as u64);
            if highest < 16 {
                return Err(Error::InvalidInput(format!(
                    "sequence of length {len} is too short to probe at depth {p}"
                )));
            }
            Some(highest)
        }
        None => None,
    };
    let start = match bound {
        Some(b) => cfg
            .ratio_probe_start
            .min(b.saturating_sub(need as u64 + 6))
            .max(4),
        None => cfg.ratio_probe_start,
    };
    let end = match bound {
        Some(b) => b.min(start + MAX_PROBE_SPAN),
        None => start + MAX_PROBE_SPAN,
    };

    let mut samples: Vec<HpComplex> = Vec::new();
    let mut sample_ns: Vec<u64> = Vec::new();
    let mut aitken = Channel::new();
    let mut neville = Channel::new();
    let mut raw = Channel::new();
    let mut zero_run: u32 = 0;

    let mut l_cur = hp_l(a, chain, start)?;
    for n in start..=end {
        let l_next = hp_l(a, chain, n + 1)?;

        // Annihilation test against the local coefficient scale.
        let mut scale = 0f64;
        for i in 0..=(p as u64 + 1) {
            scale = scale.max(a.value(n + i)?.norm());
        }
        let threshold = HpComplex::from_f64_parts(ANNIHILATION_REL * scale, 0.0);
        let below = {
            let diff = l_cur.abs_sq().sub(
                &threshold.abs_sq(),
                crate::extended::HP_PREC,
                astro_float::RoundingMode::ToEven,
            );
            diff.is_negative() || diff.is_zero()
        };
        if below {
            zero_run += 1;
            if zero_run >= need {
                return Ok(ProbeOutcome::Annihilated);
            }
            l_cur = l_next;
            continue;
        }
        zero_run = 0;

        let ratio = l_next.div(&l_cur);
        samples.push(ratio.clone());
        sample_ns.push(n);

        raw.feed(
            samples.last().expect("just pushed").clone(),
            cfg.stagnation_tol,
        );
        aitken.feed(aitken_best(&samples), cfg.stagnation_tol);
        if samples.len() >= 2 {
            let points = if a.has_extended_eval() {
                NEVILLE_POINTS_EXTENDED
            } else {
                NEVILLE_POINTS_PROMOTED
            };
            neville.feed(
                neville_unit_fraction(&sample_ns, &samples, points),
                cfg.stagnation_tol,
            );
        }

        let raw_quiet = raw.last_diff_rel <= RAW_GATE;
        for ch in [&aitken, &neville] {
            if ch.run >= need && raw_quiet {
                return Ok(ProbeOutcome::Converged(
                    ch.last_hp.clone().expect("run > 0 implies a value"),
                ));
            }
        }
        if raw.run >= need {
            return Ok(ProbeOutcome::Converged(
                raw.last_hp.clone().expect("run > 0 implies a value"),
            ));
        }

        l_cur = l_next;
    }

    Ok(ProbeOutcome::Divergent(aitken.last_hp.or(raw.last_hp)))
}

/// Estimates the next scale factor given the ones already accepted.
///
/// The accepted prefix arrives in double precision here, which is fine for
/// shallow chains; [`estimate_r_sequence`] keeps the chain in extended
/// precision internally and is the right entry point for deep ones.
pub fn estimate_r_next(
    a: &CoefficientSequence,
    r_so_far: &[Scalar],
    cfg: &RSelectionConfig,
) -> Result<Scalar> {
    cfg.validate()?;
    let chain: Vec<HpComplex> = r_so_far
        .iter()
        .map(|&r| HpComplex::from_scalar(r))
        .collect();
    match probe_next(a, &chain, cfg)? {
        ProbeOutcome::Converged(v) => Ok(v.to_scalar()),
        ProbeOutcome::Annihilated => Err(Error::ZeroDenominator),
        ProbeOutcome::Divergent(last) => Err(Error::RatioDivergent {
            last_estimate: last.map(|v| v.to_scalar()),
        }),
    }
}

/// Estimates up to `cfg.max_p` scale factors, stopping early when the
/// differenced sequence is annihilated or a ratio refuses to settle. Early
/// stops are recorded in the result, not reported as errors — a shorter
/// chain is still usable.
pub fn estimate_r_sequence(
    a: &CoefficientSequence,
    cfg: &RSelectionConfig,
) -> Result<EstimatedRSequence> {
    cfg.validate()?;
    let mut chain: Vec<HpComplex> = Vec::new();
    let mut values: Vec<Scalar> = Vec::new();
    for _ in 0..cfg.max_p {
        match probe_next(a, &chain, cfg)? {
            ProbeOutcome::Converged(v) => {
                values.push(v.to_scalar());
                chain.push(v);
            }
            ProbeOutcome::Annihilated => {
                return Ok(EstimatedRSequence {
                    reason: StopReason::Annihilated {
                        depth: values.len(),
                    },
                    values,
                });
            }
            ProbeOutcome::Divergent(last) => {
                return Ok(EstimatedRSequence {
                    reason: StopReason::RatioDivergent {
                        depth: values.len(),
                        last_estimate: last.map(|v| v.to_scalar()),
                    },
                    values,
                });
            }
        }
    }
    Ok(EstimatedRSequence {
        values,
        reason: StopReason::Completed,
    })
}

/// Verdict of the decay-rate check in [`validate_theorem2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayCondition {
    Decays,
    Grows,
    Indeterminate,
}

impl std::fmt::Display for DecayCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecayCondition::Decays => write!(f, "decays"),
            DecayCondition::Grows => write!(f, "grows"),
            DecayCondition::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

/// Outcome of checking the infinite-expansion hypotheses on a factor prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// `π/2 ≤ |α|·x ≤ 3π/2`.
    pub domain_ok: bool,
    /// Every probed factor is real and strictly positive.
    pub r_positive_real: bool,
    /// Whether `rₙ` decays (or `1/rₙ` does, i.e. grows) fast enough that the
    /// expansion's tail argument applies.
    pub decay_condition: DecayCondition,
    /// Fitted decay exponent: `rₙ ~ n^{−λ̂}`. `None` with fewer than two
    /// probes or a zero factor.
    pub lambda_hat: Option<f64>,
    /// Every probed denominator satisfies `|1 − 2r·cos(αx) + r²| > 1`.
    pub denominators_ok: bool,
}

impl ValidationReport {
    /// All hypotheses hold (with `decay_condition` reading `decays` or
    /// `grows`, either of which the expansion accepts).
    pub fn hypotheses_hold(&self) -> bool {
        self.domain_ok
            && self.r_positive_real
            && self.denominators_ok
            && matches!(
                self.decay_condition,
                DecayCondition::Decays | DecayCondition::Grows
            )
    }
}

/// Margin on fitted slopes before a decay/growth verdict is issued; a fitted
/// exponent within the margin of the λ = 1 boundary stays indeterminate.
const FIT_MARGIN: f64 = 0.05;

fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - xbar) * (y - ybar);
        sxx += (x - xbar) * (x - xbar);
    }
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = ybar - slope * xbar;
    let rss = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum::<f64>();
    (slope, rss)
}

/// Checks the hypotheses of the infinite-expansion form against a probed
/// prefix of the factor sequence: the phase-angle window, positivity of the
/// factors, their decay (or growth) rate, and the unit lower bound on the
/// denominators. Total — returns a report rather than erroring.
///
/// The decay verdict fits `ln rₙ` both against `n` (geometric decay) and
/// against `ln n` (power-law decay) and judges by whichever model fits
/// better, so clean geometric factor sequences — which satisfy any
/// power-law rate — are not misread as indeterminate. `lambda_hat` is the
/// power-law exponent estimate regardless of which model wins. Fewer than
/// four probes, or a fit too close to its threshold, yields `Indeterminate`.
pub fn validate_theorem2(series: &SeriesSpec, r: &RSequence, probe_len: usize) -> ValidationReport {
    let phase = series.phase();
    let m = probe_len.min(r.len());
    let probed = &r.values()[..m];

    let ax = phase.alpha().abs() * phase.x();
    let domain_ok = (std::f64::consts::FRAC_PI_2..=1.5 * std::f64::consts::PI).contains(&ax);

    let r_positive_real = probed.iter().all(|v| v.im == 0.0 && v.re > 0.0);

    let denominators_ok = probed.iter().all(|&rj| denominator(phase, rj).norm() > 1.0);

    let magnitudes: Vec<f64> = probed.iter().map(|v| v.norm()).collect();
    let usable = magnitudes.iter().all(|&v| v > 0.0 && v.is_finite());

    let lambda_hat = if m >= 2 && usable {
        let log_n: Vec<f64> = (1..=m).map(|i| (i as f64).ln()).collect();
        let log_r: Vec<f64> = magnitudes.iter().map(|v| v.ln()).collect();
        let (slope, _) = fit_line(&log_n, &log_r);
        Some(-slope)
    } else {
        None
    };

    let decay_condition = if m < 4 || !usable {
        DecayCondition::Indeterminate
    } else {
        let idx: Vec<f64> = (1..=m).map(|i| i as f64).collect();
        let log_n: Vec<f64> = (1..=m).map(|i| (i as f64).ln()).collect();
        let log_r: Vec<f64> = magnitudes.iter().map(|v| v.ln()).collect();
        let (slope_g, rss_g) = fit_line(&idx, &log_r);
        let (slope_p, rss_p) = fit_line(&log_n, &log_r);
        let power_verdict = if slope_p <= -(1.0 + FIT_MARGIN) {
            DecayCondition::Decays
        } else if slope_p >= 1.0 + FIT_MARGIN {
            DecayCondition::Grows
        } else {
            DecayCondition::Indeterminate
        };
        if rss_g < rss_p {
            // Geometric decay at any rate beats every power law.
            if slope_g <= -FIT_MARGIN {
                DecayCondition::Decays
            } else if slope_g >= FIT_MARGIN {
                DecayCondition::Grows
            } else {
                power_verdict
            }
        } else {
            power_verdict
        }
    };

    ValidationReport {
        domain_ok,
        r_positive_real,
        decay_condition,
        lambda_hat,
        denominators_ok,
    }
}

/// The `k`-th head term (0-based) of the expansion: the factor chain must
/// provide `k + 1` entries.
pub fn euler_term(series: &SeriesSpec, r: &RSequence, k: usize) -> Result<Scalar> {
    if k >= r.len() {
        return Err(Error::InvalidInput(format!(
            "head term {k} needs {} scale factors, got {}",
            k + 1,
            r.len()
        )));
    }
    let mut heads = head_terms_prefix(series, r.values(), k + 1)?;
    Ok(heads.pop().expect("k+1 terms were built"))
}

/// Sum of the first `k_terms` head terms — the Euler-style approximation
/// that uses no remainder terms at all. Shares its formulas (and rounding)
/// with [`crate::transforms::transform`], so for `k_terms ≤ p` it equals the
/// head-term prefix sum of the corresponding transform exactly.
pub fn euler_partial_sum(series: &SeriesSpec, r: &RSequence, k_terms: usize) -> Result<Scalar> {
    if k_terms > r.len() {
        return Err(Error::InvalidInput(format!(
            "{k_terms} head terms need at least {k_terms} scale factors, got {}",
            r.len()
        )));
    }
    let heads = head_terms_prefix(series, r.values(), k_terms)?;
    let mut acc = CompensatedSum::new();
    for h in heads {
        acc.add(h);
    }
    Ok(acc.value())
}
