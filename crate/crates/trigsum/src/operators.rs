//! The generalized difference operator and its action on coefficient and
//! trigonometric sequences.
//!
//! For scale factors `r₁, …, r_p` the operator is built one factor at a time:
//! the depth-1 difference is `aₙ₊₁ − r₁aₙ`, and each further factor `r`
//! turns a sequence `bₙ` into `bₙ₊₁ − r·bₙ`. Expanding the composition gives
//! the closed form `L(aₙ) = Σₖ (−1)ᵏ Eₖ aₙ₊ₚ₋ₖ`, where `Eₖ` is the `k`-th
//! elementary symmetric function of the scale factors. Both routes are
//! implemented and kept separate on purpose: agreement between them is one of
//! the crate's standing self-checks.

use crate::kahan::CompensatedSum;
use crate::sequence::CoefficientSequence;
use crate::{Error, Result, Scalar};

/// The scale factors `r₁, …, r_p` defining a depth-`p` difference operator.
#[derive(Debug, Clone, PartialEq)]
pub struct RSequence {
    values: Vec<Scalar>,
    positive_real: bool,
}

impl RSequence {
    /// At least one finite value is required; records on the way in whether
    /// every factor is real and strictly positive (the infinite-expansion
    /// hypotheses want that).
    pub fn new(values: Vec<Scalar>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput(
                "at least one scale factor is required".into(),
            ));
        }
        if let Some(bad) = values
            .iter()
            .find(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "scale factors must be finite (got {bad})"
            )));
        }
        let positive_real = values.iter().all(|v| v.im == 0.0 && v.re > 0.0);
        Ok(Self {
            values,
            positive_real,
        })
    }

    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&r| Scalar::new(r, 0.0)).collect())
    }

    /// `p` copies of the same factor.
    pub fn uniform(r: Scalar, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput(
                "operator depth must be at least 1".into(),
            ));
        }
        Self::new(vec![r; p])
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// Operator depth `p`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one value
    }

    pub fn is_positive_real(&self) -> bool {
        self.positive_real
    }
}

/// Which trigonometric factor the series carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigKind {
    Cosine,
    Sine,
}

/// The argument family `(αn + β)x` of the trigonometric factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigPhase {
    alpha: f64,
    beta: f64,
    x: f64,
}

impl TrigPhase {
    pub fn new(alpha: f64, beta: f64, x: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && x.is_finite()) {
            return Err(Error::InvalidInput(
                "phase parameters must be finite".into(),
            ));
        }
        if alpha == 0.0 {
            return Err(Error::InvalidInput("phase slope α must be nonzero".into()));
        }
        Ok(Self { alpha, beta, x })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// `cos` or `sin` of `(αk + β)x`.
    pub(crate) fn trig_value(&self, kind: TrigKind, k: u64) -> f64 {
        let arg = (self.alpha * k as f64 + self.beta) * self.x;
        match kind {
            TrigKind::Cosine => arg.cos(),
            TrigKind::Sine => arg.sin(),
        }
    }
}

/// Elementary symmetric functions `E₀, …, E_p` of the scale factors.
///
/// One pass of the standard recurrence (append a factor, update in place).
/// The factors are first put in a canonical order so that permuted inputs
/// produce bit-identical results — `Eₖ` is symmetric, and sorting makes the
/// floating-point evaluation honor that exactly.
pub fn elementary_symmetric(r: &RSequence) -> Vec<Scalar> {
    elementary_symmetric_values(r.values())
}

pub(crate) fn elementary_symmetric_values(values: &[Scalar]) -> Vec<Scalar> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut e = vec![Scalar::new(0.0, 0.0); sorted.len() + 1];
    e[0] = Scalar::new(1.0, 0.0);
    for (j, &rj) in sorted.iter().enumerate() {
        for k in (1..=j + 1).rev() {
            e[k] = e[k] + rj * e[k - 1];
        }
    }
    e
}

/// Signed weights `(−1)ᵏ Eₖ` indexed by `k`; the dot product of these with
/// `a_{n+p-k}` is the symmetric form of the operator.
pub(crate) fn signed_weights(values: &[Scalar]) -> Vec<Scalar> {
    let mut w = elementary_symmetric_values(values);
    for (k, wk) in w.iter_mut().enumerate() {
        if k % 2 == 1 {
            *wk = -*wk;
        }
    }
    w
}

/// `L(aₙ)` by unwinding the defining recurrence: evaluates the coefficients
/// at indices `n..=n+p` and folds one scale factor at a time.
pub fn apply_l_recurrence(a: &CoefficientSequence, r: &RSequence, n: u64) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "the difference operator applies from index 1".into(),
        ));
    }
    let p = r.len();
    let mut window: Vec<Scalar> = (0..=p as u64)
        .map(|i| a.value(n + i))
        .collect::<Result<_>>()?;
    for (j, &rj) in r.values().iter().enumerate() {
        // After this pass, window[i] holds the depth-(j+1) difference at
        // offset i; one slot dies per factor.
        for i in 0..p - j {
            window[i] = window[i + 1] - rj * window[i];
        }
    }
    Ok(window[0])
}

/// `L(aₙ)` through the symmetric closed form `Σₖ (−1)ᵏ Eₖ aₙ₊ₚ₋ₖ`.
pub fn apply_l_symmetric(a: &CoefficientSequence, r: &RSequence, n: u64) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "the difference operator applies from index 1".into(),
        ));
    }
    let weights = signed_weights(r.values());
    weighted_tail_sum(&weights, |k| a.value(n + (r.len() - k) as u64))
}

/// The operator applied to the trigonometric factor sequence
/// `cos((αk + β)x)` (or `sin`), which is defined from `k = 0`.
pub fn trig_l(kind: TrigKind, phase: &TrigPhase, r: &RSequence, n: u64) -> Scalar {
    trig_l_values(kind, phase, r.values(), n)
}

pub(crate) fn trig_l_values(
    kind: TrigKind,
    phase: &TrigPhase,
    r_values: &[Scalar],
    n: u64,
) -> Scalar {
    let weights = signed_weights(r_values);
    let p = r_values.len();
    weighted_tail_sum(&weights, |k| {
        Ok(Scalar::new(phase.trig_value(kind, n + (p - k) as u64), 0.0))
    })
    .expect("trig factors are total")
}

pub(crate) fn apply_l_values(
    a: &CoefficientSequence,
    r_values: &[Scalar],
    n: u64,
) -> Result<Scalar> {
    let weights = signed_weights(r_values);
    weighted_tail_sum(&weights, |k| a.value(n + (r_values.len() - k) as u64))
}

fn weighted_tail_sum(
    weights: &[Scalar],
    mut term: impl FnMut(usize) -> Result<Scalar>,
) -> Result<Scalar> {
    let mut acc = CompensatedSum::new();
    for (k, &w) in weights.iter().enumerate() {
        acc.add(w * term(k)?);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(values: &[f64]) -> CoefficientSequence {
        CoefficientSequence::from_values(values.iter().map(|&v| Scalar::new(v, 0.0)).collect())
            .unwrap()
    }

    #[test]
    fn depth_one_zero_factor_is_a_pure_shift() {
        let a = seq(&[5.0, -2.0, 7.0, 1.0]);
        let r = RSequence::from_reals(&[0.0]).unwrap();
        assert_eq!(
            apply_l_recurrence(&a, &r, 1).unwrap(),
            Scalar::new(-2.0, 0.0)
        );
        assert_eq!(apply_l_symmetric(&a, &r, 2).unwrap(), Scalar::new(7.0, 0.0));
    }

    #[test]
    fn unit_factor_annihilates_constant_sequences() {
        let a = CoefficientSequence::from_fn(|_| Scalar::new(4.25, 0.0));
        let r = RSequence::from_reals(&[1.0]).unwrap();
        assert_eq!(
            apply_l_recurrence(&a, &r, 3).unwrap(),
            Scalar::new(0.0, 0.0)
        );
    }

    #[test]
    fn matched_factor_annihilates_geometric_sequences_exactly() {
        // Powers of 0.5 scaled by 3 stay exact in binary, so the difference
        // cancels to literal zero.
        let a = CoefficientSequence::from_fn(|n| Scalar::new(3.0 * 0.5f64.powi(n as i32), 0.0));
        let r = RSequence::from_reals(&[0.5]).unwrap();
        for n in [1u64, 2, 9] {
            assert_eq!(
                apply_l_recurrence(&a, &r, n).unwrap(),
                Scalar::new(0.0, 0.0)
            );
            assert_eq!(apply_l_symmetric(&a, &r, n).unwrap(), Scalar::new(0.0, 0.0));
        }
    }

    #[test]
    fn elementary_symmetric_matches_hand_expansions() {
        let e = elementary_symmetric(&RSequence::from_reals(&[2.0, 3.0]).unwrap());
        assert_eq!(
            e,
            vec![
                Scalar::new(1.0, 0.0),
                Scalar::new(5.0, 0.0),
                Scalar::new(6.0, 0.0)
            ]
        );
        let e = elementary_symmetric(&RSequence::from_reals(&[1.0, 1.0, 1.0]).unwrap());
        assert_eq!(
            e,
            vec![
                Scalar::new(1.0, 0.0),
                Scalar::new(3.0, 0.0),
                Scalar::new(3.0, 0.0),
                Scalar::new(1.0, 0.0)
            ]
        );
    }

    #[test]
    fn weight_total_matches_product_form() {
        // Σₖ Eₖ telescopes to Π (1 + rⱼ).
        let r = RSequence::from_reals(&[0.25, 1.5, 0.75, 2.0]).unwrap();
        let sum: Scalar = elementary_symmetric(&r).iter().sum();
        let prod: f64 = r.values().iter().map(|v| 1.0 + v.re).product();
        assert!((sum.re - prod).abs() <= 1e-13 * prod.abs());
        assert_eq!(sum.im, 0.0);
    }

    #[test]
    fn routes_agree_on_an_uneven_sequence() {
        let a = seq(&[1.0, 4.0, -3.0, 2.5, 0.5, 6.0, -1.0, 3.0, 2.0]);
        let r = RSequence::new(vec![
            Scalar::new(0.4, 0.2),
            Scalar::new(-1.1, 0.0),
            Scalar::new(0.9, -0.5),
        ])
        .unwrap();
        for n in 1..=5 {
            let rec = apply_l_recurrence(&a, &r, n).unwrap();
            let sym = apply_l_symmetric(&a, &r, n).unwrap();
            assert!((rec - sym).norm() <= 1e-12 * (1.0 + sym.norm()), "n = {n}");
        }
    }

    #[test]
    fn symmetric_route_is_exactly_permutation_invariant() {
        let a = seq(&[1.0, 4.0, -3.0, 2.5, 0.5, 6.0]);
        let base = RSequence::from_reals(&[0.3, 1.2, 0.7]).unwrap();
        let perm = RSequence::from_reals(&[1.2, 0.7, 0.3]).unwrap();
        for n in 1..=3 {
            assert_eq!(
                apply_l_symmetric(&a, &base, n).unwrap(),
                apply_l_symmetric(&a, &perm, n).unwrap(),
            );
        }
    }

    #[test]
    fn trig_factors_difference_as_expected() {
        // cos(π/3) − ½·cos(0) = 0 for the depth-1 operator at n = 0.
        let phase = TrigPhase::new(1.0, 0.0, std::f64::consts::FRAC_PI_3).unwrap();
        let r = RSequence::from_reals(&[0.5]).unwrap();
        let v = trig_l(TrigKind::Cosine, &phase, &r, 0);
        assert!(v.norm() < 1e-15, "{v}");
    }

    #[test]
    fn sine_factors_are_cosine_factors_with_a_quarter_turn() {
        // sin(θ) = cos(θ − π/2), so shifting β by −π/(2x) swaps the kinds.
        let x = 2.1;
        let phase_s = TrigPhase::new(0.8, 0.3, x).unwrap();
        let phase_c = TrigPhase::new(0.8, 0.3 - std::f64::consts::FRAC_PI_2 / x, x).unwrap();
        let r = RSequence::from_reals(&[0.6, 0.2]).unwrap();
        for n in 0..6 {
            let s = trig_l(TrigKind::Sine, &phase_s, &r, n);
            let c = trig_l(TrigKind::Cosine, &phase_c, &r, n);
            assert!((s - c).norm() <= 1e-12, "n = {n}: {s} vs {c}");
        }
    }

    #[test]
    fn positive_real_flag_tracks_contents() {
        assert!(RSequence::from_reals(&[0.5, 2.0])
            .unwrap()
            .is_positive_real());
        assert!(!RSequence::from_reals(&[0.5, -2.0])
            .unwrap()
            .is_positive_real());
        assert!(!RSequence::new(vec![Scalar::new(0.5, 1e-8)])
            .unwrap()
            .is_positive_real());
        assert!(RSequence::new(vec![]).is_err());
    }
}
