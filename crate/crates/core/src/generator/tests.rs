use super::*;
use crate::algorithms::{run_grover, Choice, GroverOptions};
use crate::bits::bits;
use crate::quantum::{hadamard, inversion_about_mean, unitary_deviation, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family(kind: FamilyKind, n: usize) -> FunctionFamily {
    FunctionFamily::build(kind, n).unwrap()
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let cases = [(FamilyKind::Grover, 2), (FamilyKind::DeutschJozsa, 2), (FamilyKind::Simon, 2)];
    for instance in 0..50 {
        let (kind, n) = cases[instance % 3];
        let objective = if instance % 5 == 4 { Objective::LeakedInformation } else { Objective::SuccessProbability };
        let gap = gradient_discrepancy(&family(kind, n), objective, 1 + instance % 2, 6, &mut rng).unwrap();
        assert!(gap < 1e-5, "instance {instance}: {gap}");
    }
}

#[test]
fn one_call_suffices_for_the_two_bit_families() {
    for kind in [FamilyKind::Grover, FamilyKind::DeutschJozsa, FamilyKind::Simon] {
        let fam = family(kind, 2);
        let alg = generate_algorithm(&fam, &GeneratorConfig::default()).unwrap();
        assert_eq!(alg.oracle_calls, 1, "{kind}");
        assert!(alg.final_p_s() >= 1.0 - 1e-9, "{kind}: {}", alg.final_p_s());
        assert!(alg.over_iteration.iter().all(|p| *p >= 1.0 - 1e-9));
        for s in &alg.slots {
            assert!(unitary_deviation(&s.matrix()) < 1e-10);
        }
        let p = success_probability(&alg.final_state(&fam).unwrap(), &SolutionPredicate::for_family(&fam)).unwrap();
        assert!((p - alg.final_p_s()).abs() < 1e-12);
    }
}

#[test]
fn trace_never_decreases() {
    for strategy in [Strategy::Joint, Strategy::Greedy, Strategy::LeakFirst] {
        let fam = family(FamilyKind::Grover, 3);
        let cfg = GeneratorConfig { strategy, over_iterations: 2, ..Default::default() };
        let alg = generate_algorithm(&fam, &cfg).unwrap();
        let all: Vec<f64> = alg.p_s_trace.iter().chain(&alg.over_iteration).copied().collect();
        assert!(all.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{strategy:?}: {all:?}");
    }
}

#[test]
fn never_worse_than_canonical_grover() {
    for n in 2..=3 {
        let fam = family(FamilyKind::Grover, n);
        let cfg = GeneratorConfig {
            threshold: Some(1.0 - 1e-5),
            max_oracle_calls: 2,
            over_iterations: 0,
            ..Default::default()
        };
        let trace = match generate_algorithm(&fam, &cfg) {
            Ok(alg) => alg.p_s_trace,
            Err(Error::IterateCap { .. }) => panic!("n={n} did not reach the threshold"),
            Err(e) => panic!("{e}"),
        };
        let theta = 0.5f64.powf(n as f64 / 2.0).asin();
        for (k, p) in trace.iter().enumerate() {
            // sin²((2k+1)θ) while the rotation has not overshot, otherwise exact search is possible
            let calls = k + 1;
            let angle = (2 * calls + 1) as f64 * theta;
            let canonical = if angle <= std::f64::consts::FRAC_PI_2 { angle.sin().powi(2) } else { 1.0 };
            if angle <= std::f64::consts::FRAC_PI_2 {
                assert!((p - canonical).abs() < 1e-6, "n={n} calls={calls}: {p} vs {canonical}");
            } else {
                assert!(*p >= 1.0 - 1e-5, "n={n} calls={calls}: {p}");
            }
        }
    }
}

#[test]
fn inversion_about_the_mean_is_a_maximizer() {
    let fam = family(FamilyKind::Grover, 2);
    let pred = SolutionPredicate::for_family(&fam);
    let run = run_grover(&fam, Choice::Label(bits("00")), &GroverOptions::default(), &mut ChaCha8Rng::seed_from_u64(3))
        .unwrap();
    let after_oracle = &run.trajectory.stage("oracle 1").unwrap().state;
    let (u, p, _) =
        maximize_step(after_oracle, &a_slot(&fam), Objective::SuccessProbability, &pred, &OptimizerConfig::default())
            .unwrap();
    assert!(p >= 1.0 - 1e-9);
    let canonical = after_oracle.apply_unitary(&inversion_about_mean(2), &["A"]).unwrap();
    let ours = after_oracle.apply_unitary(&u.matrix(), &["A"]).unwrap();
    let t = crate::quantum::MeasurementTarget::register("A");
    for b in fam.labels() {
        let sub = crate::quantum::Subspace::basis("B", &[b]);
        let x = canonical.project(&sub).unwrap().0.probabilities(&t).unwrap();
        let y = ours.project(&sub).unwrap().0.probabilities(&t).unwrap();
        assert_eq!(x.len(), 1);
        assert!(y.iter().all(|(a, q)| (*a == x[0].0) == (*q > 0.5)));
    }

    // already solved: the warm start keeps p_S = 1
    let final_state = &run.trajectory.stage("inversion 1").unwrap().state;
    let (_, p, d) =
        maximize_step(final_state, &a_slot(&fam), Objective::SuccessProbability, &pred, &OptimizerConfig::default())
            .unwrap();
    assert!(p >= 1.0 - 1e-12);
    assert_eq!(d.best_start, 0);
}

#[test]
fn initial_slots_can_leak_two_bits() {
    let fam = family(FamilyKind::Grover, 2);
    let (slots, e_a, _) = maximize_initial_leak(&fam, &OptimizerConfig::default()).unwrap();
    assert!((e_a - 2.0).abs() < 1e-6, "{e_a}");
    assert_eq!(slots.len(), 2);

    // the Hadamard choice attains the same value
    let (input, oracle) = setup(&fam).unwrap();
    let x = C64::new(0.0, 0.0);
    let _ = x;
    let st = input.apply_unitary(&hadamard(2), &["A"]).unwrap();
    let flip = nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    );
    let st = st.apply_unitary(&(hadamard(1) * flip), &["V"]).unwrap();
    let st = oracle.apply(&st).unwrap();
    assert!((leaked_information(&st).unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn grover_four_within_three_calls() {
    let fam = family(FamilyKind::Grover, 4);
    let cfg = GeneratorConfig { over_iterations: 0, ..Default::default() };
    let alg = generate_algorithm(&fam, &cfg).unwrap();
    assert!(alg.oracle_calls <= 3);
    assert!(alg.final_p_s() >= 1.0 - 1.0 / 16.0);
}

#[test]
fn cap_reports_best() {
    let fam = family(FamilyKind::Grover, 3);
    let cfg = GeneratorConfig { max_oracle_calls: 1, threshold: Some(0.99), ..Default::default() };
    match generate_algorithm(&fam, &cfg) {
        Err(Error::IterateCap { cap: 1, best }) => assert!(best > 0.7 && best < 0.99),
        other => panic!("{other:?}"),
    }
}
