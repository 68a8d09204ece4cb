//! Acceptance gate: every acceptance criterion, one pass/fail line each.
//!
//! Run `cargo test --test acceptance -- --nocapture` to see the lines even
//! when everything passes; on any failure the summary panics and the lines
//! are shown regardless.

use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use trigsum::acceleration::{
    estimate_r_sequence, euler_partial_sum, validate_theorem2, RSelectionConfig, StopReason,
};
use trigsum::evaluation::{oracle_sum, terms_to_tolerance_direct, terms_to_tolerance_transformed};
use trigsum::operators::{
    apply_l_recurrence, apply_l_symmetric, elementary_symmetric, RSequence, TrigKind, TrigPhase,
};
use trigsum::sequence::CoefficientSequence;
use trigsum::transforms::{transform, transformed_partial_sum, SeriesSpec};
use trigsum::Scalar;

const REFERENCE: f64 = -0.129_147_564_939_820_56;

type CriterionResult = Result<String, String>;
type Criterion = (&'static str, fn() -> CriterionResult);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn two_exp_series() -> SeriesSpec {
    SeriesSpec::new(
        CoefficientSequence::two_exponential(2.0, 3.0).unwrap(),
        TrigPhase::new(1.0, 0.0, 3.0 * std::f64::consts::FRAC_PI_4).unwrap(),
        TrigKind::Cosine,
    )
}

/// Limiting ratios `a^p/b^{p+1}` of `aₙ = 1/(aⁿ + bⁿ)`.
fn two_exp_factors(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|p| a.powi(p as i32) / b.powi(p as i32 + 1))
        .collect()
}

fn complex_in_disk(rng: &mut StdRng, max_mag: f64) -> Scalar {
    let mag = rng.random_range(0.0..max_mag);
    let ang = rng.random_range(0.0..std::f64::consts::TAU);
    Scalar::from_polar(mag, ang)
}

/// Criterion 1: the known-example term counts — 12 direct terms at 1e-6, and
/// the transformed counts for depths 1, 2, 3 — inside a second of runtime.
fn criterion_known_example_counts() -> CriterionResult {
    let start = Instant::now();
    let series = two_exp_series();
    let tol = 1e-6;
    let (reference, _) = oracle_sum(&series, tol * 1e-4).map_err(|e| e.to_string())?;
    check((reference.re - REFERENCE).abs() < 1e-10, || {
        format!("reference drifted: {}", reference.re)
    })?;
    let direct = terms_to_tolerance_direct(&series, tol, reference).map_err(|e| e.to_string())?;
    check(direct == 12, || format!("direct terms = {direct}, want 12"))?;
    let expected_remainder = [7u64, 4, 2];
    let mut counts = Vec::new();
    for p in 1..=3usize {
        let r = RSequence::from_reals(&two_exp_factors(2.0, 3.0, p)).unwrap();
        let c = terms_to_tolerance_transformed(&series, &r, tol, reference)
            .map_err(|e| e.to_string())?;
        // Exact equality on the remainder-terms convention is stronger than
        // the required ±1 under some convention.
        check(c.remainder_terms == expected_remainder[p - 1], || {
            format!(
                "p = {p}: remainder terms = {}, want {}",
                c.remainder_terms,
                expected_remainder[p - 1]
            )
        })?;
        check(c.total_terms == c.remainder_terms + p as u64, || {
            format!("p = {p}: total/remainder conventions disagree")
        })?;
        counts.push(c.remainder_terms);
    }
    let elapsed = start.elapsed();
    check(elapsed.as_secs_f64() < 1.0, || {
        format!("took {elapsed:?}, budget 1s")
    })?;
    Ok(format!(
        "direct 12; remainder terms {counts:?} (totals {:?}) in {elapsed:.2?}",
        counts
            .iter()
            .zip(1u64..)
            .map(|(c, p)| c + p)
            .collect::<Vec<_>>()
    ))
}

/// Criterion 2: estimated scale-factor chains match the known ratio limits
/// to 1e-6 relative for three two-exponential coefficient pairs.
fn criterion_ratio_estimation() -> CriterionResult {
    let mut worst = 0f64;
    for (a, b) in [(2.0, 3.0), (1.0, 2.0), (3.0, 5.0)] {
        let seq = CoefficientSequence::two_exponential(a, b).unwrap();
        let est =
            estimate_r_sequence(&seq, &RSelectionConfig::new(4)).map_err(|e| e.to_string())?;
        check(est.reason() == &StopReason::Completed, || {
            format!("({a},{b}): stopped early: {:?}", est.reason())
        })?;
        check(est.values().len() == 4, || {
            format!("({a},{b}): got {} factors, want 4", est.values().len())
        })?;
        for (k, (got, want)) in est
            .values()
            .iter()
            .zip(two_exp_factors(a, b, 4))
            .enumerate()
        {
            let rel = (got - Scalar::new(want, 0.0)).norm() / want;
            worst = worst.max(rel);
            check(rel <= 1e-6, || {
                format!("({a},{b}) r[{k}]: rel err {rel:e} vs {want}")
            })?;
        }
    }
    Ok(format!(
        "three pairs, four factors each; worst rel err {worst:.1e}"
    ))
}

/// Criterion 3: the recurrence and symmetric operator routes agree to 1e-12
/// on 200 random instances, and the symmetric weights sum to ∏(1 + rⱼ) to
/// 1e-13 for depths up to 12.
fn criterion_operator_identities() -> CriterionResult {
    let mut rng = StdRng::seed_from_u64(0x5EED_0003);
    for case in 0..200 {
        let values: Vec<Scalar> = (0..40).map(|_| complex_in_disk(&mut rng, 1.0)).collect();
        let a = CoefficientSequence::from_values(values.clone()).unwrap();
        let p = rng.random_range(1..=8usize);
        let n = rng.random_range(1..=20u64);
        let r = RSequence::new((0..p).map(|_| complex_in_disk(&mut rng, 2.0)).collect()).unwrap();
        let rec = apply_l_recurrence(&a, &r, n).map_err(|e| e.to_string())?;
        let sym = apply_l_symmetric(&a, &r, n).map_err(|e| e.to_string())?;
        // Scale the comparison by the size of the terms actually summed;
        // relative-to-result would demand cancellation-proof arithmetic.
        let cond: f64 = elementary_symmetric(&r)
            .iter()
            .enumerate()
            .map(|(k, e)| e.norm() * values[(n + (p - k) as u64 - 1) as usize].norm())
            .sum();
        let tol = 1e-12 * cond.max(1.0);
        check((rec - sym).norm() <= tol, || {
            format!(
                "case {case}: routes differ by {:e} (scale {cond:e})",
                (rec - sym).norm()
            )
        })?;
    }
    for case in 0..200 {
        let p = rng.random_range(1..=12usize);
        let r = RSequence::new(
            (0..p)
                .map(|_| Scalar::new(rng.random_range(f64::EPSILON..=2.0), 0.0))
                .collect(),
        )
        .unwrap();
        let sum: Scalar = elementary_symmetric(&r).iter().sum();
        let prod: f64 = r.values().iter().map(|v| 1.0 + v.re).product();
        check((sum.re - prod).abs() <= 1e-13 * prod, || {
            format!("case {case}: ΣEₖ = {} vs ∏(1+rⱼ) = {prod}", sum.re)
        })?;
    }
    Ok("200 route-agreement cases (p ≤ 8) and 200 weight-sum cases (p ≤ 12)".into())
}

/// Criterion 4: the transform preserves the sum — heads plus remainder agree
/// with direct summation to 1e-10 on 20 random series and factor sets.
fn criterion_sum_preservation() -> CriterionResult {
    let mut rng = StdRng::seed_from_u64(0x5EED_0004);
    let mut worst = 0f64;
    for case in 0..20 {
        // Geometric envelope with random complex modulation keeps the tail
        // summable; factor magnitudes ≤ 0.6 keep the denominators away from
        // zero so the 1e-10 bound is achievable in double precision.
        let rho: f64 = rng.random_range(0.3..0.8);
        let values: Vec<Scalar> = (1..=2100)
            .map(|n| complex_in_disk(&mut rng, 1.0) * rho.powi(n))
            .collect();
        let a = CoefficientSequence::from_values(values).unwrap();
        let x_mag =
            rng.random_range(std::f64::consts::FRAC_PI_2 + 0.1..1.5 * std::f64::consts::PI - 0.1);
        let x = if rng.random_bool(0.5) { x_mag } else { -x_mag };
        let phase = TrigPhase::new(1.0, rng.random_range(-1.0..1.0), x).unwrap();
        let kind = if case % 2 == 0 {
            TrigKind::Cosine
        } else {
            TrigKind::Sine
        };
        let series = SeriesSpec::new(a, phase, kind);
        let p = rng.random_range(1..=4usize);
        let r = RSequence::new((0..p).map(|_| complex_in_disk(&mut rng, 0.6)).collect()).unwrap();

        let mut direct = Scalar::new(0.0, 0.0);
        for n in 1..=300u64 {
            direct += series.term(n).map_err(|e| e.to_string())?;
        }
        let t = transform(&series, &r).map_err(|e| e.to_string())?;
        let transformed = transformed_partial_sum(&t, 300).map_err(|e| e.to_string())?;
        let diff = (transformed - direct).norm();
        worst = worst.max(diff);
        check(diff <= 1e-10, || {
            format!("case {case}: |transformed − direct| = {diff:e}")
        })?;
    }
    Ok(format!("20 random series, p ≤ 4; worst |Δ| {worst:.1e}"))
}

/// Criterion 5: a matched factor annihilates a geometric series — remainder
/// terms below 1e-13·|c| and the head equal to the closed form to 1e-12.
fn criterion_annihilation() -> CriterionResult {
    let mut rng = StdRng::seed_from_u64(0x5EED_0005);
    // The contract's own instance first: aₙ = ρⁿ, ρ = 0.5, x = 2.
    {
        let (rho, x) = (0.5f64, 2.0f64);
        let series = SeriesSpec::new(
            CoefficientSequence::geometric(rho).unwrap(),
            TrigPhase::new(1.0, 0.0, x).unwrap(),
            TrigKind::Cosine,
        );
        let t = transform(&series, &RSequence::from_reals(&[rho]).unwrap())
            .map_err(|e| e.to_string())?;
        let closed = (rho * x.cos() - rho * rho) / (1.0 - 2.0 * rho * x.cos() + rho * rho);
        check((t.head_sum().re - closed).abs() <= 1e-12, || {
            format!("head {} vs closed form {closed}", t.head_sum().re)
        })?;
    }
    for case in 0..12 {
        let c = complex_in_disk(&mut rng, 2.0) + Scalar::new(0.3, 0.0);
        let rho: f64 = rng.random_range(0.15..0.85);
        let x = rng.random_range(0.4..2.8) * if case % 2 == 0 { 1.0 } else { -1.0 };
        let series = SeriesSpec::new(
            CoefficientSequence::from_fn(move |n| c * rho.powi(n as i32)),
            TrigPhase::new(1.0, 0.0, x).unwrap(),
            TrigKind::Cosine,
        );
        let t = transform(&series, &RSequence::from_reals(&[rho]).unwrap())
            .map_err(|e| e.to_string())?;
        for n in 1..=60u64 {
            let rem = t.remainder_term(n).map_err(|e| e.to_string())?.norm();
            check(rem <= 1e-13 * c.norm(), || {
                format!("case {case}, n = {n}: remainder {rem:e} vs 1e-13·|c|")
            })?;
        }
        let d = 1.0 - 2.0 * rho * x.cos() + rho * rho;
        let closed = c * ((rho * x.cos() - rho * rho) / d);
        check((t.head_sum() - closed).norm() <= 1e-12 * c.norm(), || {
            format!("case {case}: head {} vs closed {closed}", t.head_sum())
        })?;
    }
    Ok("closed-form instance plus 12 random (c, ρ, x) triples, 60 remainder terms each".into())
}

/// Criterion 6: head-terms-only sums converge — error below 1e-8 by K = 8,
/// non-increasing from K = 2 — and the hypothesis checks all pass.
fn criterion_euler_sums() -> CriterionResult {
    let series = two_exp_series();
    let r = RSequence::from_reals(&two_exp_factors(2.0, 3.0, 10)).unwrap();
    let errs: Vec<f64> = (1..=10)
        .map(|k| {
            euler_partial_sum(&series, &r, k)
                .map(|s| (s.re - REFERENCE).abs())
                .map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    for k in 2..8 {
        // errs[k-1] is the K = k error.
        check(errs[k] <= errs[k - 1], || {
            format!(
                "error rose from K={k} ({:e}) to K={} ({:e})",
                errs[k - 1],
                k + 1,
                errs[k]
            )
        })?;
    }
    check(errs[7] < 1e-8, || {
        format!("K = 8 error {:e} ≥ 1e-8", errs[7])
    })?;
    let validation = validate_theorem2(
        &series,
        &RSequence::from_reals(&two_exp_factors(2.0, 3.0, 8)).unwrap(),
        8,
    );
    check(validation.domain_ok, || "domain check failed".into())?;
    check(validation.r_positive_real, || {
        "positivity check failed".into()
    })?;
    check(
        validation.decay_condition == trigsum::acceleration::DecayCondition::Decays,
        || format!("decay verdict {:?}", validation.decay_condition),
    )?;
    check(validation.denominators_ok, || {
        "denominator check failed".into()
    })?;
    Ok(format!(
        "errors K=1..10 decay to {:.1e}; K=8 at {:.1e}; all four hypothesis checks pass",
        errs[9], errs[7]
    ))
}

/// Criterion 7: a sine series transforms identically to the cosine series
/// with β shifted by −π/(2x), on 20 random instances.
fn criterion_sine_cosine_shift() -> CriterionResult {
    let mut rng = StdRng::seed_from_u64(0x5EED_0007);
    for case in 0..20 {
        let alpha = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let beta = rng.random_range(-1.0..1.0);
        let x = rng.random_range(0.4..4.2) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let rho: f64 = rng.random_range(0.3..0.7);
        let values: Vec<Scalar> = (1..=400)
            .map(|n| complex_in_disk(&mut rng, 1.0) * rho.powi(n))
            .collect();
        let coeffs = CoefficientSequence::from_values(values).unwrap();
        let p = rng.random_range(1..=3usize);
        let r = RSequence::new((0..p).map(|_| complex_in_disk(&mut rng, 0.6)).collect()).unwrap();

        let sine = SeriesSpec::new(
            coeffs.clone(),
            TrigPhase::new(alpha, beta, x).unwrap(),
            TrigKind::Sine,
        );
        let shifted = SeriesSpec::new(
            coeffs,
            TrigPhase::new(alpha, beta - std::f64::consts::FRAC_PI_2 / x, x).unwrap(),
            TrigKind::Cosine,
        );
        let ts = transform(&sine, &r).map_err(|e| e.to_string())?;
        let tc = transform(&shifted, &r).map_err(|e| e.to_string())?;
        check(ts.denominators() == tc.denominators(), || {
            format!("case {case}: denominators differ")
        })?;
        for (k, (hs, hc)) in ts.head_terms().iter().zip(tc.head_terms()).enumerate() {
            check((hs - hc).norm() <= 1e-12 * (1.0 + hc.norm()), || {
                format!("case {case}, head {k}: {hs} vs {hc}")
            })?;
        }
        let ss = transformed_partial_sum(&ts, 60).map_err(|e| e.to_string())?;
        let sc = transformed_partial_sum(&tc, 60).map_err(|e| e.to_string())?;
        check((ss - sc).norm() <= 1e-12 * (1.0 + sc.norm()), || {
            format!("case {case}: partial sums {ss} vs {sc}")
        })?;
        let es = euler_partial_sum(&sine, &r, p).map_err(|e| e.to_string())?;
        let ec = euler_partial_sum(&shifted, &r, p).map_err(|e| e.to_string())?;
        check((es - ec).norm() <= 1e-12 * (1.0 + ec.norm()), || {
            format!("case {case}: head-only sums {es} vs {ec}")
        })?;
    }
    Ok("20 random instances: denominators exact, heads and partial sums to 1e-12".into())
}

/// Criterion 8: the CLI emits the documented JSON with the known-example
/// numbers, and rejects three malformed invocations with exit code 2.
fn criterion_cli_contract() -> CriterionResult {
    let bin = env!("CARGO_BIN_EXE_trigsum");
    let out = Command::new(bin)
        .args([
            "accelerate",
            "--family",
            "two-exp",
            "--a",
            "2",
            "--b",
            "3",
            "--x",
            "3pi/4",
            "--tol",
            "1e-6",
            "--max-p",
            "3",
        ])
        .output()
        .map_err(|e| format!("failed to launch CLI: {e}"))?;
    check(out.status.success(), || {
        format!(
            "accelerate exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    let json: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("stdout is not JSON: {e}"))?;
    let keys: Vec<&str> = json
        .as_object()
        .ok_or("top level is not an object")?
        .keys()
        .map(String::as_str)
        .collect();
    check(
        keys == [
            "reference_sum",
            "reference_terms",
            "direct_terms",
            "tolerance",
            "validation",
            "per_p",
        ],
        || format!("top-level keys {keys:?}"),
    )?;
    check(json["direct_terms"] == 12, || {
        format!("direct_terms = {}", json["direct_terms"])
    })?;
    let reference = json["reference_sum"]
        .as_f64()
        .ok_or("reference_sum not a number")?;
    check((reference - REFERENCE).abs() < 1e-10, || {
        format!("reference_sum = {reference}")
    })?;
    check(!json["validation"].is_null(), || {
        "validation is null".into()
    })?;
    let per_p = json["per_p"].as_array().ok_or("per_p not an array")?;
    check(per_p.len() == 3, || {
        format!("per_p has {} entries", per_p.len())
    })?;
    let expected_remainder = [7u64, 4, 2];
    for (i, entry) in per_p.iter().enumerate() {
        let p = i + 1;
        check(entry["p"] == p as u64, || {
            format!("entry {i} p = {}", entry["p"])
        })?;
        let r = entry["r"].as_array().ok_or("r not an array")?;
        check(r.len() == p, || format!("p = {p}: {} factors", r.len()))?;
        for (k, (rv, want)) in r.iter().zip(two_exp_factors(2.0, 3.0, p)).enumerate() {
            let got = rv.as_f64().ok_or("r entry not a number")?;
            check((got - want).abs() <= 1e-6 * want, || {
                format!("p = {p}, r[{k}] = {got} vs {want}")
            })?;
        }
        check(entry["remainder_terms"] == expected_remainder[i], || {
            format!("p = {p}: remainder_terms = {}", entry["remainder_terms"])
        })?;
        let err = entry["achieved_error"]
            .as_f64()
            .ok_or("achieved_error not a number")?;
        check(err <= 1e-6, || format!("p = {p}: achieved_error {err:e}"))?;
    }

    // Three malformed invocations, each exit code 2 with a pointed message.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let short = dir.path().join("short.txt");
    std::fs::write(&short, "1.0\n0.5\n0.25\n").map_err(|e| e.to_string())?;
    let fixtures: Vec<(Vec<String>, &str)> = vec![
        (
            [
                "accelerate",
                "--family",
                "two-exp",
                "--a",
                "3",
                "--b",
                "2",
                "--x",
                "3pi/4",
            ]
            .map(String::from)
            .to_vec(),
            "0 < a < b",
        ),
        (
            [
                "estimate-r",
                "--family",
                "file",
                "--path",
                short.to_str().unwrap(),
                "--x",
                "1.0",
            ]
            .map(String::from)
            .to_vec(),
            "at least 32",
        ),
        (
            [
                "sum", "--family", "two-exp", "--a", "2", "--b", "3", "--x", "3tau/4",
            ]
            .map(String::from)
            .to_vec(),
            "cannot parse x",
        ),
    ];
    for (args, needle) in fixtures {
        let out = Command::new(bin)
            .args(&args)
            .output()
            .map_err(|e| format!("failed to launch CLI: {e}"))?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        check(out.status.code() == Some(2), || {
            format!("{args:?} exited {:?} (want 2)", out.status.code())
        })?;
        check(stderr.contains(needle), || {
            format!("{args:?} stderr missing {needle:?}: {stderr}")
        })?;
    }
    Ok("JSON schema, known-example numbers, and three exit-2 fixtures".into())
}

#[test]
fn acceptance_gate() {
    let criteria: &[Criterion] = &[
        ("known-example term counts", criterion_known_example_counts),
        ("scale-factor estimation", criterion_ratio_estimation),
        ("operator identities", criterion_operator_identities),
        ("transform sum preservation", criterion_sum_preservation),
        ("geometric annihilation", criterion_annihilation),
        ("head-only convergence and hypotheses", criterion_euler_sums),
        ("sine/cosine phase shift", criterion_sine_cosine_shift),
        ("CLI JSON contract and exit codes", criterion_cli_contract),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(msg) => {
                failures += 1;
                println!("[FAIL] {name}: {msg}");
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criterion(s) failed");
}
