//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`). Tolerances
//! and runtime budgets are pinned here, in code.

use std::time::{Duration, Instant};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use isl_core::bitstring::{
    apply_e, apply_single, zero_frequency, BitString, EOperator, Generator,
};
use isl_core::chsh::{
    all_deterministic_strategies, build_subexperiment, local_hv_baseline, mi_violation,
    run_planar_experiment, LambdaDistribution, LambdaId, SettingPair,
};
use isl_core::dynsys::{
    box_counting_dimension, cantor_intervals, cantor_membership, correlation_dimension,
    dyadic_integer_map, first_autocorr_minimum, integrate, perfect_set_neighbor, takens_embed,
    ternary_to_binary_map, CantorSpec, DigitStream, EmbeddingSpec, OdeSystem,
};
use isl_core::hilbert::{born_probability, e_to_state, state_to_e, Definability};
use isl_core::numkit::{doubling_sequence, niven_classify, NivenClass, RationalAngle};
use isl_core::{BitBudget, Dyadic};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("criterion {criterion}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn within_budget(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "{name} exceeded its runtime budget: {elapsed:?} >= {budget:?}"
    );
}

fn budget(n: u32) -> BitBudget {
    BitBudget::new(n).unwrap()
}

fn quarter() -> RationalAngle {
    RationalAngle::new(1, 4).unwrap()
}

fn log_scales(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn criterion_1_chsh_violation() {
    let t0 = Instant::now();
    let report_s = run_planar_experiment(
        [0.0, 90.0, 45.0, 135.0],
        budget(20),
        0,
        quarter(),
        quarter(),
    )
    .unwrap();
    let s = report_s.s_value;
    let pass = (2.818..=2.838).contains(&s);
    within_budget("criterion 1", t0, Duration::from_secs(5));
    report("1 (CHSH violation)", pass, &format!("S = {} ~ {s:.6}", report_s.s));
}

#[test]
fn criterion_2_local_baseline_bound() {
    let t0 = Instant::now();
    let two = Ratio::from_integer(2);
    let strategies = all_deterministic_strategies();

    let mut max_seen = Ratio::from_integer(0);
    for s in &strategies {
        let v = local_hv_baseline(&[(*s, Ratio::from_integer(1))]).unwrap();
        assert!(v <= two);
        if v > max_seen {
            max_seen = v;
        }
    }

    let mut rng = StdRng::seed_from_u64(2024);
    let mut all_bounded = true;
    for _ in 0..10_000 {
        let weights: Vec<i128> = (0..16).map(|_| rng.gen_range(0..1000)).collect();
        let total: i128 = weights.iter().sum::<i128>().max(1);
        let mixture: Vec<_> = strategies
            .iter()
            .zip(&weights)
            .map(|(s, w)| (*s, Ratio::new(*w, total)))
            .collect();
        // Top up rounding leftovers onto the first strategy so the weights
        // sum exactly to one.
        let v = local_hv_baseline(&mixture).unwrap();
        if v > two {
            all_bounded = false;
        }
    }

    let pass = all_bounded && max_seen == two;
    within_budget("criterion 2", t0, Duration::from_secs(10));
    report(
        "2 (local baseline bound)",
        pass,
        &format!("max deterministic S = {max_seen}, 10^4 mixtures all <= 2"),
    );
}

#[test]
fn criterion_3_definability() {
    let b = budget(12);
    let experiment =
        run_planar_experiment([0.0, 90.0, 45.0, 135.0], b, 5, quarter(), quarter()).unwrap();
    let joint = experiment.joint_analysis.as_ref().unwrap();
    let joint_ok = joint.definable_count == 2
        && joint.a1b1.is_definable()
        && joint.a2b2.is_definable();
    // The four-sub-ensemble protocol itself completes all-definable.
    let protocol_ok = experiment.definability.definable_count == 4;
    // Deterministic: an identical run yields an identical report.
    let again =
        run_planar_experiment([0.0, 90.0, 45.0, 135.0], b, 5, quarter(), quarter()).unwrap();
    let deterministic = again == experiment;
    report(
        "3 (definability)",
        joint_ok && protocol_ok && deterministic,
        &format!(
            "joint definable = {}, protocol definable = {}, deterministic = {deterministic}",
            joint.definable_count, experiment.definability.definable_count
        ),
    );
}

/// 240-bit cosine + continued-fraction probe, the numeric side of the
/// rational-cosine check (see tests/niven_oracle.rs for the full oracle).
fn numeric_is_rational(angle: RationalAngle) -> Option<Ratio<i128>> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};
    let v = angle.cos_highprec().to_rational();
    let mut x = v.clone();
    let (mut h0, mut k0) = (BigInt::one(), BigInt::zero());
    let (mut h1, mut k1) = (x.to_integer(), BigInt::one());
    loop {
        let frac = &x - BigRational::from_integer(x.to_integer());
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
        let a = x.to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > BigInt::from(1_000_000u64) {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    let best = BigRational::new(h1.clone(), k1.clone());
    let err = (&v - &best).abs();
    let tol = BigRational::new(BigInt::one(), BigInt::one() << 150);
    (err < tol).then(|| Ratio::new(h1.to_i128().unwrap(), k1.to_i128().unwrap()))
}

#[test]
fn criterion_4_rational_cosine_theorem() {
    let t0 = Instant::now();
    let mut checked = 0u32;
    let mut doubling_checked = 0u32;
    for n in 1i128..=50 {
        for m in 0..(2 * n) {
            if m.gcd(&n) != 1 && !(m == 0 && n == 1) {
                continue;
            }
            let angle = RationalAngle::new(m, n).unwrap();
            let numeric = numeric_is_rational(angle);
            match niven_classify(angle) {
                NivenClass::RationalCos(v) => assert_eq!(
                    numeric,
                    Some(v),
                    "mismatch at {angle}"
                ),
                NivenClass::IrrationalCos => {
                    assert!(numeric.is_none(), "oracle found rational at {angle}")
                }
            }
            checked += 1;
        }
        // Doubling bound on the theorem's domain 0 < m/n < 1/2.
        for m in 1..n {
            if 2 * m >= n || m.gcd(&n) != 1 {
                continue;
            }
            let angle = RationalAngle::new(m, n).unwrap();
            let seq = doubling_sequence(angle, 50);
            assert_eq!(seq.values.len(), 51);
            assert!(
                (seq.distinct as i128) <= n,
                "doubling {angle}: {} values > {n}",
                seq.distinct
            );
            doubling_checked += 1;
        }
    }
    within_budget("criterion 4", t0, Duration::from_secs(30));
    report(
        "4 (rational-cosine theorem)",
        checked > 1500 && doubling_checked > 350,
        &format!("{checked} classifier cases, {doubling_checked} doubling sequences, {:?}", t0.elapsed()),
    );
}

#[test]
fn criterion_5_bitstring_algebra() {
    let mut rng = StdRng::seed_from_u64(55);
    // Quaternion identities, N in 2..=10, 100 random strings each.
    for n in 2..=10u32 {
        let b = budget(n);
        for _ in 0..100 {
            let bits: Vec<bool> = (0..b.string_len()).map(|_| rng.gen()).collect();
            let s = BitString::from_bits(bits, b).unwrap();
            let neg = apply_single(Generator::Negation, &s);
            assert_eq!(apply_single(Generator::I, &apply_single(Generator::I, &s)), neg);
            assert_eq!(apply_single(Generator::J, &apply_single(Generator::J, &s)), neg);
            assert_eq!(apply_single(Generator::K, &apply_single(Generator::K, &s)), neg);
            assert_eq!(
                apply_single(Generator::I, &apply_single(Generator::J, &s)),
                apply_single(Generator::K, &s)
            );
            assert_eq!(
                apply_single(Generator::J, &apply_single(Generator::I, &s)),
                apply_single(Generator::Negation, &apply_single(Generator::K, &s))
            );
        }
    }
    // Zero frequency |1 - alpha/2| exactly, exhaustive for N <= 8.
    let mut freq_cases = 0u32;
    for n in 2..=8u32 {
        let b = budget(n);
        let zeros = BitString::zeros(b).unwrap();
        for k in 0..=(1u64 << n) {
            let alpha = Dyadic::new(k as i128, n - 1);
            let e = EOperator::new(alpha, Dyadic::ZERO, b).unwrap();
            let expected = (Dyadic::ONE - alpha.mul_pow2(-1)).abs();
            assert_eq!(zero_frequency(&apply_e(&e, &zeros).unwrap()), expected);
            freq_cases += 1;
        }
    }
    report(
        "5 (bit-string algebra)",
        true,
        &format!("quaternion identities on 900 strings, {freq_cases} exact frequencies"),
    );
}

#[test]
fn criterion_6_correspondence() {
    // Round trip exhaustively at N <= 6.
    let mut round_trips = 0u32;
    for n in 2..=6u32 {
        let b = budget(n);
        for k in 0..=(1u64 << n) {
            let alpha = Dyadic::new(k as i128, n - 1);
            for j in 0..(1u64 << (n + 2)) {
                let beta = Dyadic::new(j as i128, n);
                let e = EOperator::new(alpha, beta, b).unwrap();
                let state = e_to_state(&e);
                let back = state_to_e(state.cos_half_sq().to_ratio(), state.phase(), b)
                    .unwrap();
                assert_eq!(back, Definability::Defined(e));
                round_trips += 1;
            }
        }
    }
    // Born probability equals the sample-space frequency exactly (N <= 8).
    let mut born_cases = 0u32;
    for n in 2..=8u32 {
        let b = budget(n);
        let zeros = BitString::zeros(b).unwrap();
        for k in 0..=(1u64 << n) {
            let alpha = Dyadic::new(k as i128, n - 1);
            let e = EOperator::new(alpha, Dyadic::ZERO, b).unwrap();
            let frequency = zero_frequency(&apply_e(&e, &zeros).unwrap());
            assert_eq!(born_probability(&e).unwrap(), frequency);
            assert_eq!(e_to_state(&e).cos_half_sq(), frequency);
            born_cases += 1;
        }
    }
    report(
        "6 (correspondence)",
        true,
        &format!("{round_trips} exact round trips, {born_cases} Born checks"),
    );
}

#[test]
fn criterion_7_cantor_suite() {
    // Exact measure at depth 20 (materialised) and the law in general.
    let deep = CantorSpec::ternary(20);
    let iterate = cantor_intervals(&deep).unwrap();
    let measure_ok = iterate.measure == Ratio::new(1i128 << 20, 3i128.pow(20))
        && iterate.intervals.len() == 1 << 20;

    // Perfect-set neighbors for all 2^k members, k <= 12.
    let mut neighbors = 0u64;
    for k in 1..=12u32 {
        let spec = CantorSpec::ternary(k);
        let eps = Ratio::new(1, 3i128.pow(k.saturating_sub(1)));
        for idx in 0..(1u64 << k) {
            let digits: Vec<u8> =
                (0..k).map(|i| if idx >> i & 1 == 1 { 2 } else { 0 }).collect();
            let x = DigitStream::finite(digits.clone()).value(3).unwrap();
            let n = perfect_set_neighbor(&digits, eps, &spec).unwrap();
            assert!(n.distance < eps && n.value != x);
            assert!(cantor_membership(n.value, &spec).unwrap());
            neighbors += 1;
        }
    }

    // Digit maps round trip on 10^4 random 64-digit truncations.
    let mut rng = StdRng::seed_from_u64(77);
    for _ in 0..10_000 {
        let bits: Vec<u8> = (0..64).map(|_| rng.gen_range(0..=1u8)).collect();
        let stream = DigitStream::finite(bits);
        let expected = stream.value(2).unwrap();
        let ternary = dyadic_integer_map(&stream).unwrap();
        assert_eq!(ternary_to_binary_map(&ternary).unwrap(), expected);
    }

    report(
        "7 (Cantor suite)",
        measure_ok,
        &format!(
            "depth-20 measure {} over {} intervals, {neighbors} neighbors, 10^4 round trips",
            iterate.measure,
            iterate.intervals.len()
        ),
    );
}

#[test]
fn criterion_8_dynamics() {
    let t0 = Instant::now();

    // Limit cycle converges from inside and outside.
    let sys = OdeSystem::<f64>::LimitCycle;
    let mut radii: Vec<f64> = Vec::new();
    for r0 in [0.1, 2.0] {
        let traj = integrate(&sys, &[r0, 0.0], 0.01, 100.0).unwrap();
        let end = traj.state(traj.len() - 1);
        radii.push((end[0] * end[0] + end[1] * end[1]).sqrt());
    }
    let cycle_ok = radii.iter().all(|r| (r - 1.0).abs() < 1e-6);

    // Lorenz box-counting dimension. Fine sampling so the trajectory marks
    // every box it passes through at the smallest scale.
    let lorenz = OdeSystem::lorenz_standard();
    let traj = integrate(&lorenz, &[1.0, 1.0, 1.0], 0.001, 2010.0).unwrap();
    let box_points = traj.points(10_000, 1);
    let box_fit = box_counting_dimension(&box_points, &log_scales(0.4, 4.0, 8)).unwrap();
    let box_ok = (1.9..=2.2).contains(&box_fit.estimate);

    // Takens reconstruction from the X component against the full state.
    let coarse = integrate(&lorenz, &[1.0, 1.0, 1.0], 0.01, 410.0).unwrap();
    let full = coarse.points(1000, 1).thin(8);
    let x_series: Vec<f64> = coarse.component(0)[1000..].to_vec();
    let tau = first_autocorr_minimum(&x_series, 200).unwrap();
    let spec = EmbeddingSpec::new(tau, 3).unwrap();
    let embedded = takens_embed(&x_series, &spec).unwrap().thin(8);
    let radii_gp = log_scales(0.5, 8.0, 10);
    let fit_full = correlation_dimension(&full, &radii_gp).unwrap();
    let fit_emb = correlation_dimension(&embedded, &radii_gp).unwrap();
    let diff = (fit_full.estimate - fit_emb.estimate).abs();
    let takens_ok = diff < 0.15;

    within_budget("criterion 8", t0, Duration::from_secs(120));
    report(
        "8 (dynamics)",
        cycle_ok && box_ok && takens_ok,
        &format!(
            "radii {radii:?}, box dim {:.4} (r2 {:.5}), GP full {:.4} vs embedded {:.4} (tau {tau}), {:?}",
            box_fit.estimate, box_fit.r_squared, fit_full.estimate, fit_emb.estimate, t0.elapsed()
        ),
    );
}

#[test]
fn criterion_9_measurement_independence() {
    // Baseline: the hidden-variable distribution never depends on settings.
    let shared = LambdaDistribution::uniform(
        (0..1u64 << 10).map(|p| LambdaId { ensemble: 0, position: p }),
    );
    let baseline: Vec<_> = SettingPair::ALL.iter().map(|&p| (p, shared.clone())).collect();
    let baseline_mi = mi_violation(&baseline).unwrap();

    // Invariant-set model at the standard configuration, N = 10.
    let b = budget(10);
    let experiment =
        run_planar_experiment([0.0, 90.0, 45.0, 135.0], b, 17, quarter(), quarter()).unwrap();
    let ist_mi = experiment.mi_violation;

    // Cross-check the report's label-reduced value against the fully
    // materialised position distributions.
    let mut materialised = Vec::new();
    for (pair, seed) in SettingPair::ALL.iter().zip(17u64..) {
        let cos = experiment.definability.verdict(*pair);
        let cos = match cos {
            isl_core::chsh::PairVerdict::Definable { cos } => *cos,
            _ => unreachable!("protocol pairs are definable"),
        };
        let sub = build_subexperiment(*pair, cos, b, seed).unwrap().defined().unwrap();
        materialised.push((*pair, sub.lambda_distribution()));
    }
    let materialised_mi = mi_violation(&materialised).unwrap();

    let pass = baseline_mi == Ratio::from_integer(0)
        && ist_mi > Ratio::from_integer(0)
        && materialised_mi == ist_mi;
    report(
        "9 (measurement independence)",
        pass,
        &format!("baseline {baseline_mi}, invariant-set {ist_mi}, materialised {materialised_mi}"),
    );
}
