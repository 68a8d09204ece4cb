//! Coefficient sequences `a₁, a₂, …` that drive a trigonometric series.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use astro_float::{BigFloat, RoundingMode};

use crate::extended::{HpComplex, HP_PREC};
use crate::{Error, Result, Scalar};

type EvalFn = dyn Fn(u64) -> Scalar + Send + Sync;
type HpEvalFn = dyn Fn(u64) -> HpComplex + Send + Sync;

/// A deterministic coefficient sequence, evaluated on demand and memoized.
///
/// Indices are 1-based: `value(1)` is the first coefficient of the series.
/// Sequences are either unbounded (closed-form families, arbitrary closures)
/// or bounded (an explicit list of values, e.g. read from a file); bounded
/// sequences report their length through [`len`](Self::len) and reject
/// out-of-range indices.
///
/// Cloning is cheap and clones share one memoization cache. Some families
/// also carry an extended-precision evaluator used internally by the ratio
/// estimator, where double precision is insufficient; everything else in the
/// crate reads the `f64` path.
#[derive(Clone)]
pub struct CoefficientSequence {
    eval: Arc<EvalFn>,
    hp_eval: Option<Arc<HpEvalFn>>,
    ratio_hint: Option<Scalar>,
    len: Option<u64>,
    cache: Arc<Mutex<HashMap<u64, Scalar>>>,
}

impl fmt::Debug for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSequence")
            .field("len", &self.len)
            .field("ratio_hint", &self.ratio_hint)
            .field("extended", &self.hp_eval.is_some())
            .finish_non_exhaustive()
    }
}

impl CoefficientSequence {
    fn new(eval: Arc<EvalFn>, hp_eval: Option<Arc<HpEvalFn>>, len: Option<u64>) -> Self {
        Self {
            eval,
            hp_eval,
            ratio_hint: None,
            len,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    /// Sequence defined by an arbitrary function of the index.
    pub fn from_fn(f: impl Fn(u64) -> Scalar + Send + Sync + 'static) -> Self {
        Self::new(Arc::new(f), None, None)
    }

    /// Bounded sequence holding explicit values; `values[0]` is `a₁`.
    pub fn from_values(values: Vec<Scalar>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput(
                "coefficient list must not be empty".into(),
            ));
        }
        if let Some(bad) = values
            .iter()
            .find(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "coefficient list contains a non-finite value {bad}"
            )));
        }
        let len = values.len() as u64;
        let shared = Arc::new(values);
        let eval_vals = Arc::clone(&shared);
        Ok(Self::new(
            Arc::new(move |n| eval_vals[(n - 1) as usize]),
            None,
            Some(len),
        ))
    }

    /// `aₙ = 1 / (aⁿ + bⁿ)` with `0 < a < b`; the coefficient ratio tends to
    /// `1/b`.
    pub fn two_exponential(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b) {
            return Err(Error::InvalidInput(format!(
                "two-exponential family requires 0 < a < b (got a = {a}, b = {b})"
            )));
        }
        let eval = move |n: u64| {
            let denom = a.powi(n as i32) + b.powi(n as i32);
            Scalar::new(1.0 / denom, 0.0)
        };
        let hp = move |n: u64| {
            let an = BigFloat::from_f64(a, HP_PREC).powi(n as usize, HP_PREC, RoundingMode::ToEven);
            let bn = BigFloat::from_f64(b, HP_PREC).powi(n as usize, HP_PREC, RoundingMode::ToEven);
            let den = an.add(&bn, HP_PREC, RoundingMode::ToEven);
            let one = BigFloat::from_f64(1.0, HP_PREC);
            HpComplex {
                re: one.div(&den, HP_PREC, RoundingMode::ToEven),
                im: BigFloat::from_f64(0.0, HP_PREC),
            }
        };
        let mut seq = Self::new(Arc::new(eval), Some(Arc::new(hp)), None);
        seq.ratio_hint = Some(Scalar::new(1.0 / b, 0.0));
        Ok(seq)
    }

    /// `aₙ = ρⁿ`.
    pub fn geometric(rho: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::InvalidInput(format!(
                "geometric family requires a finite ratio (got {rho})"
            )));
        }
        let eval = move |n: u64| Scalar::new(rho.powi(n as i32), 0.0);
        let hp = move |n: u64| HpComplex {
            re: BigFloat::from_f64(rho, HP_PREC).powi(n as usize, HP_PREC, RoundingMode::ToEven),
            im: BigFloat::from_f64(0.0, HP_PREC),
        };
        let mut seq = Self::new(Arc::new(eval), Some(Arc::new(hp)), None);
        seq.ratio_hint = Some(Scalar::new(rho, 0.0));
        Ok(seq)
    }

    /// `aₙ = n⁻ˢ`; the coefficient ratio tends to 1.
    pub fn power(s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidInput(format!(
                "power family requires a finite exponent (got {s})"
            )));
        }
        let eval = move |n: u64| Scalar::new((n as f64).powf(-s), 0.0);
        // Integer exponents get an exact extended path; otherwise promoting
        // the f64 value is accurate enough for the smooth probes this family
        // produces.
        let hp: Arc<HpEvalFn> = if s.fract() == 0.0 && s.abs() <= 64.0 {
            let k = s as i64;
            Arc::new(move |n: u64| {
                let npow = BigFloat::from_f64(n as f64, HP_PREC).powi(
                    k.unsigned_abs() as usize,
                    HP_PREC,
                    RoundingMode::ToEven,
                );
                let one = BigFloat::from_f64(1.0, HP_PREC);
                let re = if k >= 0 {
                    one.div(&npow, HP_PREC, RoundingMode::ToEven)
                } else {
                    npow
                };
                HpComplex {
                    re,
                    im: BigFloat::from_f64(0.0, HP_PREC),
                }
            })
        } else {
            Arc::new(move |n: u64| HpComplex::from_f64_parts((n as f64).powf(-s), 0.0))
        };
        let mut seq = Self::new(Arc::new(eval), Some(hp), None);
        seq.ratio_hint = Some(Scalar::new(1.0, 0.0));
        Ok(seq)
    }

    /// The coefficient at 1-based index `n`, memoized.
    pub fn value(&self, n: u64) -> Result<Scalar> {
        self.check_index(n)?;
        if let Some(v) = self.cache.lock().expect("cache lock").get(&n) {
            return Ok(*v);
        }
        let v = (self.eval)(n);
        self.cache.lock().expect("cache lock").insert(n, v);
        Ok(v)
    }

    /// Like [`value`](Self::value) but bypasses the cache — for long forward
    /// scans that read each index once and would only bloat the memo table.
    pub(crate) fn value_uncached(&self, n: u64) -> Result<Scalar> {
        self.check_index(n)?;
        Ok((self.eval)(n))
    }

    /// Extended-precision view of the coefficient, for the probe path.
    /// Families without a native extended evaluator promote the `f64` value.
    pub(crate) fn hp_value(&self, n: u64) -> Result<HpComplex> {
        self.check_index(n)?;
        match &self.hp_eval {
            Some(f) => Ok(f(n)),
            None => Ok(HpComplex::from_scalar(self.value(n)?)),
        }
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidInput("coefficient indices start at 1".into()));
        }
        if let Some(len) = self.len {
            if n > len {
                return Err(Error::IndexOutOfRange { index: n, len });
            }
        }
        Ok(())
    }

    /// Number of values for bounded sequences; `None` when unbounded.
    pub fn len(&self) -> Option<u64> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // bounded construction requires at least one value
    }

    /// Known limit of `aₙ₊₁/aₙ`, when the family implies one.
    pub fn ratio_hint(&self) -> Option<Scalar> {
        self.ratio_hint
    }

    /// Whether the sequence evaluates natively in extended precision (as
    /// opposed to promoting `f64` values, which caps its accuracy at f64
    /// noise level).
    pub(crate) fn has_extended_eval(&self) -> bool {
        self.hp_eval.is_some()
    }
}
