//! Extended-precision scalar support for the ratio-probe path.
//!
//! Estimating the scale factor for difference depth `p` means evaluating
//! `L(aₙ₊₁)/L(aₙ)` where both sides are tiny alternating sums of much larger
//! terms. In double precision the cancellation noise floor overtakes the
//! signal long before the ratio settles, and rounding already committed to
//! earlier scale factors leaves residual geometric components that a later
//! probe locks onto. Probing therefore runs on 256-bit floats end to end; the
//! result is rounded to `f64` only when it leaves the estimator.

use astro_float::{BigFloat, RoundingMode, Sign};

use crate::Scalar;

/// Working precision (bits) for ratio probes.
pub(crate) const HP_PREC: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

/// Complex number over `BigFloat`, with only the operations probing needs.
#[derive(Debug, Clone)]
pub(crate) struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl HpComplex {
    pub(crate) fn from_f64_parts(re: f64, im: f64) -> Self {
        Self {
            re: BigFloat::from_f64(re, HP_PREC),
            im: BigFloat::from_f64(im, HP_PREC),
        }
    }

    pub(crate) fn from_scalar(z: Scalar) -> Self {
        Self::from_f64_parts(z.re, z.im)
    }

    pub(crate) fn to_scalar(&self) -> Scalar {
        Scalar::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub(crate) fn sub(&self, rhs: &Self) -> Self {
        Self {
            re: self.re.sub(&rhs.re, HP_PREC, RM),
            im: self.im.sub(&rhs.im, HP_PREC, RM),
        }
    }

    pub(crate) fn mul(&self, rhs: &Self) -> Self {
        let ac = self.re.mul(&rhs.re, HP_PREC, RM);
        let bd = self.im.mul(&rhs.im, HP_PREC, RM);
        let ad = self.re.mul(&rhs.im, HP_PREC, RM);
        let bc = self.im.mul(&rhs.re, HP_PREC, RM);
        Self {
            re: ac.sub(&bd, HP_PREC, RM),
            im: ad.add(&bc, HP_PREC, RM),
        }
    }

    pub(crate) fn scale(&self, s: &BigFloat) -> Self {
        Self {
            re: self.re.mul(s, HP_PREC, RM),
            im: self.im.mul(s, HP_PREC, RM),
        }
    }

    pub(crate) fn div(&self, rhs: &Self) -> Self {
        let den = rhs.abs_sq();
        let ac = self.re.mul(&rhs.re, HP_PREC, RM);
        let bd = self.im.mul(&rhs.im, HP_PREC, RM);
        let bc = self.im.mul(&rhs.re, HP_PREC, RM);
        let ad = self.re.mul(&rhs.im, HP_PREC, RM);
        Self {
            re: ac.add(&bd, HP_PREC, RM).div(&den, HP_PREC, RM),
            im: bc.sub(&ad, HP_PREC, RM).div(&den, HP_PREC, RM),
        }
    }

    /// Squared modulus; avoids square roots in threshold comparisons.
    pub(crate) fn abs_sq(&self) -> BigFloat {
        let rr = self.re.mul(&self.re, HP_PREC, RM);
        let ii = self.im.mul(&self.im, HP_PREC, RM);
        rr.add(&ii, HP_PREC, RM)
    }
}

/// Rounds a `BigFloat` to the nearest-ish `f64` (correct to about one ulp,
/// which is all the callers need). `astro-float` exposes no direct
/// conversion, so this rebuilds the value from its top mantissa words.
pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // Mantissa words are little-endian and normalized: the value is
    // sign · 0.m · 2^exp with the top bit of the last word set.
    let top = words.last().copied().unwrap_or(0);
    let next = if words.len() >= 2 {
        words[words.len() - 2]
    } else {
        0
    };
    let m = (top as f64) * 2f64.powi(-64) + (next as f64) * 2f64.powi(-128);
    let mag = m * 2f64.powi(exp);
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

/// Iterated Aitken Δ² extrapolation over the trailing window of `samples`,
/// returning the deepest accelerated value. A vanishing second difference
/// passes the raw sample through instead of dividing by zero.
pub(crate) fn aitken_best(samples: &[HpComplex]) -> HpComplex {
    const WINDOW: usize = 24;
    const MAX_DEPTH: usize = 4;
    let start = samples.len().saturating_sub(WINDOW);
    let mut cur: Vec<HpComplex> = samples[start..].to_vec();
    let mut best = cur.last().expect("aitken_best needs samples").clone();
    for _ in 0..MAX_DEPTH {
        if cur.len() < 3 {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() - 2);
        for i in 0..cur.len() - 2 {
            let d2 = cur[i + 2].sub(&cur[i + 1]).sub(&cur[i + 1].sub(&cur[i]));
            if d2.abs_sq().is_zero() {
                next.push(cur[i + 2].clone());
                continue;
            }
            let d1 = cur[i + 2].sub(&cur[i + 1]);
            next.push(cur[i + 2].sub(&d1.mul(&d1).div(&d2)));
        }
        best = next.last().expect("depth loop keeps >= 1 entry").clone();
        cur = next;
    }
    best
}

/// Neville extrapolation of `samples[i] = f(nᵢ)` to `n → ∞`, treating the
/// data as a polynomial in `1/n` and evaluating it at zero. Uses the trailing
/// `max_points` samples; effective when convergence is ~ c/n rather than
/// geometric. Extrapolating from a short window far from zero amplifies
/// sample noise steeply with the point count, so callers match `max_points`
/// to the precision of their data.
pub(crate) fn neville_unit_fraction(
    ns: &[u64],
    samples: &[HpComplex],
    max_points: usize,
) -> HpComplex {
    debug_assert_eq!(ns.len(), samples.len());
    let start = samples.len().saturating_sub(max_points);
    let ts: Vec<BigFloat> = ns[start..]
        .iter()
        .map(|&n| {
            let one = BigFloat::from_f64(1.0, HP_PREC);
            one.div(&BigFloat::from_f64(n as f64, HP_PREC), HP_PREC, RM)
        })
        .collect();
    let mut vals: Vec<HpComplex> = samples[start..].to_vec();
    let k = vals.len();
    for j in 1..k {
        for i in 0..k - j {
            // P_i ← (tᵢ·P_{i+1} − t_{i+j}·P_i) / (tᵢ − t_{i+j}), the Neville
            // update evaluated at t = 0.
            let num = vals[i + 1].scale(&ts[i]).sub(&vals[i].scale(&ts[i + j]));
            let den = ts[i].sub(&ts[i + j], HP_PREC, RM);
            let den_c = HpComplex {
                re: den,
                im: BigFloat::from_f64(0.0, HP_PREC),
            };
            vals[i] = num.div(&den_c);
        }
    }
    vals[0].clone()
}
