use rand::Rng;
use serde::{Deserialize, Serialize};

use super::circuit::{execute, mass, Step};
use super::{phase_kickback_v, Choice, Representation, Trajectory};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FunctionFamily, OracleUnitary, REG_A, REG_V};

/// How `π/4 · 2^{n/2}` becomes an integer iterate count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationRule {
    /// Largest count not past the rotation optimum; one iterate at n = 2.
    #[default]
    Floor,
    RoundHalfUp,
}

pub fn grover_iterates(n: usize, rule: IterationRule) -> usize {
    let x = std::f64::consts::FRAC_PI_4 * 2f64.powf(n as f64 / 2.0);
    let k = match rule {
        IterationRule::Floor => x.floor(),
        IterationRule::RoundHalfUp => (x + 0.5).floor(),
    };
    (k as usize).max(1)
}

#[derive(Debug, Clone, Default)]
pub struct GroverOptions {
    pub rule: IterationRule,
    /// Overrides the rule.
    pub iterates: Option<usize>,
    pub representation: Option<Representation>,
}

#[derive(Debug, Clone)]
pub struct GroverRun {
    pub trajectory: Trajectory,
    pub oracle: OracleUnitary,
    pub b: BitString,
    pub iterates: usize,
    /// Distribution of `A` given `B = b`.
    pub distribution: Vec<(BitString, f64)>,
    pub outcome: BitString,
    pub success_probability: f64,
}

pub fn run_grover<R: Rng + ?Sized>(
    family: &FunctionFamily,
    choice: Choice,
    options: &GroverOptions,
    rng: &mut R,
) -> Result<GroverRun> {
    if family.kind() != FamilyKind::Grover {
        return Err(Error::InvalidArgument(format!("expected a grover family, got {}", family.kind())));
    }
    if !(1..=5).contains(&family.n()) {
        return Err(Error::UnsupportedFamily { kind: "grover".into(), n: family.n() });
    }
    let iterates = options.iterates.unwrap_or_else(|| grover_iterates(family.n(), options.rule));
    let mut steps = vec![Step::Hadamard(REG_A), Step::Hadamard(REG_V)];
    for _ in 0..iterates {
        steps.push(Step::Oracle);
        steps.push(Step::Inversion(REG_A));
    }
    let run = execute(family, choice, &steps, phase_kickback_v(), false, options.representation, rng)?;
    let success_probability = mass(&run.distribution, &run.b);
    Ok(GroverRun {
        trajectory: run.trajectory,
        oracle: run.oracle,
        b: run.b,
        iterates,
        distribution: run.distribution,
        outcome: run.outcome,
        success_probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::quantum::{RegisterLayout, StateVector, C64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn family(n: usize) -> FunctionFamily {
        FunctionFamily::build(FamilyKind::Grover, n).unwrap()
    }

    #[test]
    fn iterate_counts() {
        let floor: Vec<_> = (1..=5).map(|n| grover_iterates(n, IterationRule::Floor)).collect();
        assert_eq!(floor, vec![1, 1, 2, 3, 4]);
        let half: Vec<_> = (1..=5).map(|n| grover_iterates(n, IterationRule::RoundHalfUp)).collect();
        assert_eq!(half, vec![1, 2, 2, 3, 4]);
    }

    #[test]
    fn two_qubits_reconstructs_choice_in_one_call() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let run = run_grover(&family(2), Choice::Label(bits("01")), &GroverOptions::default(), &mut rng).unwrap();
        assert_eq!(run.trajectory.oracle_calls, 1);
        assert_eq!(run.outcome, bits("01"));
        assert!((run.success_probability - 1.0).abs() < 1e-12);

        // before the retarded projection B and A are perfectly correlated
        let phases = &run.trajectory.phases;
        let pre = &run.trajectory.stage("inversion 1").unwrap().state;
        let layout = RegisterLayout::new(&[("B", 2), ("A", 2), ("V", 1)]).unwrap();
        let mut amps = vec![C64::new(0.0, 0.0); 32];
        for k in 0..4u64 {
            let s = 0.5 * std::f64::consts::FRAC_1_SQRT_2;
            let b = BitString::new(k, 2);
            amps[layout.index_of(&[b, b, bits("0")]).unwrap()] = C64::from_polar(s, phases[k as usize]);
            amps[layout.index_of(&[b, b, bits("1")]).unwrap()] = -C64::from_polar(s, phases[k as usize]);
        }
        let expected = StateVector::new(layout, amps).unwrap();
        assert!(pre.fidelity(&expected).unwrap() > 1.0 - 1e-12);
        assert!(run.trajectory.verify(&run.oracle).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn success_meets_error_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=5 {
            let fam = family(n);
            let run = run_grover(&fam, Choice::Random, &GroverOptions::default(), &mut rng).unwrap();
            assert!(run.success_probability >= 1.0 - 0.5f64.powi(n as i32) - 1e-12, "n={n}");
            assert_eq!(run.trajectory.oracle_calls, run.iterates);
        }
    }

    #[test]
    fn single_qubit_is_a_coin() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let run = run_grover(&family(1), Choice::Label(bits("1")), &GroverOptions::default(), &mut rng).unwrap();
        assert!((run.success_probability - 0.5).abs() < 1e-12);
    }

    #[test]
    fn four_qubits_three_iterates() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let run = run_grover(&family(4), Choice::Label(bits("1011")), &GroverOptions::default(), &mut rng).unwrap();
        assert_eq!(run.iterates, 3);
        // sin²(7θ) with sin θ = 1/4
        let theta = 0.25f64.asin();
        assert!((run.success_probability - (7.0 * theta).sin().powi(2)).abs() < 1e-12);
        assert!(run.success_probability >= 1.0 - 1.0 / 16.0);
    }

    #[test]
    fn deferred_projection_matches_sharp_label() {
        for n in 1..=4 {
            let fam = family(n);
            for b in fam.labels() {
                let mut opts =
                    GroverOptions { representation: Some(Representation::TimeSymmetric), ..Default::default() };
                let joint = run_grover(&fam, Choice::Label(b), &opts, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
                opts.representation = Some(Representation::Conditioned);
                let sharp = run_grover(&fam, Choice::Label(b), &opts, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
                assert_eq!(joint.distribution.len(), sharp.distribution.len());
                for (x, y) in joint.distribution.iter().zip(&sharp.distribution) {
                    assert_eq!(x.0, y.0);
                    assert!((x.1 - y.1).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn success_grows_with_iterates() {
        for n in 1..=5 {
            let fam = family(n);
            let b = fam.tables()[fam.len() - 1].label();
            let mut last = 0.0;
            for k in 1..=grover_iterates(n, IterationRule::Floor) {
                let opts = GroverOptions { iterates: Some(k), ..Default::default() };
                let p = run_grover(&fam, Choice::Label(b), &opts, &mut ChaCha8Rng::seed_from_u64(6))
                    .unwrap()
                    .success_probability;
                assert!(p >= last - 1e-12, "n={n} k={k}");
                last = p;
            }
        }
    }

    #[test]
    fn rejects_other_families_and_large_n() {
        let dj = FunctionFamily::build(FamilyKind::DeutschJozsa, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(run_grover(&dj, Choice::Random, &GroverOptions::default(), &mut rng).is_err());
        assert!(run_grover(&family(6), Choice::Random, &GroverOptions::default(), &mut rng).is_err());
        assert!(matches!(
            run_grover(&family(2), Choice::Label(bits("111")), &GroverOptions::default(), &mut rng),
            Err(Error::UnknownLabel(_))
        ));
    }
}
