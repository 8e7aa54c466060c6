use rand::Rng;
use serde::Serialize;

use super::circuit::{execute, Step};
use super::{phase_kickback_v, Choice, Representation, Trajectory};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FunctionFamily, OracleUnitary, REG_A, REG_V};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Constant,
    Balanced,
}

impl Classification {
    /// All-zeros in `A` reads as constant, anything else as balanced.
    pub fn from_outcome(a: &BitString) -> Self {
        if a.is_zero() {
            Classification::Constant
        } else {
            Classification::Balanced
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Constant => "constant",
            Classification::Balanced => "balanced",
        })
    }
}

#[derive(Debug, Clone)]
pub struct DeutschJozsaRun {
    pub trajectory: Trajectory,
    pub oracle: OracleUnitary,
    pub b: BitString,
    pub distribution: Vec<(BitString, f64)>,
    pub outcome: BitString,
    pub classification: Classification,
    /// Probability that `A` gives the right classification for `b`.
    pub correct_probability: f64,
}

pub fn run_deutsch_jozsa<R: Rng + ?Sized>(
    family: &FunctionFamily,
    choice: Choice,
    extended: bool,
    representation: Option<Representation>,
    rng: &mut R,
) -> Result<DeutschJozsaRun> {
    if family.kind() != FamilyKind::DeutschJozsa {
        return Err(Error::InvalidArgument(format!("expected a deutsch_jozsa family, got {}", family.kind())));
    }
    let steps = [Step::Hadamard(REG_A), Step::Hadamard(REG_V), Step::Oracle, Step::Hadamard(REG_A)];
    let run = execute(family, choice, &steps, phase_kickback_v(), extended, representation, rng)?;
    let truth = if family.get(&run.b)?.is_constant() { Classification::Constant } else { Classification::Balanced };
    let correct_probability =
        run.distribution.iter().filter(|(a, _)| Classification::from_outcome(a) == truth).map(|d| d.1).sum();
    Ok(DeutschJozsaRun {
        trajectory: run.trajectory,
        oracle: run.oracle,
        b: run.b,
        classification: Classification::from_outcome(&run.outcome),
        distribution: run.distribution,
        outcome: run.outcome,
        correct_probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::families::REG_A_PRIME;
    use crate::quantum::MeasurementTarget;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn family(n: usize) -> FunctionFamily {
        FunctionFamily::build(FamilyKind::DeutschJozsa, n).unwrap()
    }

    fn run(b: &str) -> DeutschJozsaRun {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        run_deutsch_jozsa(&family(2), Choice::Label(bits(b)), false, None, &mut rng).unwrap()
    }

    #[test]
    fn classifies_two_bit_tables() {
        let r = run("0000");
        assert_eq!(r.distribution, vec![(bits("00"), r.distribution[0].1)]);
        assert!((r.distribution[0].1 - 1.0).abs() < 1e-12);
        assert_eq!(r.classification, Classification::Constant);
        assert_eq!(r.trajectory.oracle_calls, 1);

        let r = run("0011");
        assert_eq!(r.outcome, bits("10"));
        assert!((r.distribution[0].1 - 1.0).abs() < 1e-12);
        assert_eq!(r.classification, Classification::Balanced);

        assert_eq!(run("1111").classification, Classification::Constant);
    }

    #[test]
    fn classification_is_certain_for_every_table() {
        for n in 2..=4 {
            let fam = family(n);
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let labels: Vec<_> = fam.labels().collect();
            let step = (labels.len() / 40).max(1);
            for b in labels.into_iter().step_by(step) {
                let r = run_deutsch_jozsa(&fam, Choice::Label(b), false, None, &mut rng).unwrap();
                assert!((r.correct_probability - 1.0).abs() < 1e-12, "n={n} b={b}");
                assert_eq!(r.trajectory.oracle_calls, 1);
            }
        }
    }

    #[test]
    fn extended_oracle_copies_choice() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let r = run_deutsch_jozsa(&family(2), Choice::Label(bits("0101")), true, None, &mut rng).unwrap();
        assert_eq!(r.classification, Classification::Balanced);
        let copy = r.trajectory.last().probabilities(&MeasurementTarget::register(REG_A_PRIME)).unwrap();
        assert_eq!(copy.len(), 1);
        assert_eq!(copy[0].0, bits("0101"));
        assert!(r.trajectory.verify(&r.oracle).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn large_layouts_use_sharp_labels() {
        let fam = family(3);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let r = run_deutsch_jozsa(&fam, Choice::Random, false, None, &mut rng).unwrap();
        assert_eq!(r.trajectory.representation, Representation::TimeSymmetric);
        let r = run_deutsch_jozsa(&family(4), Choice::Random, false, None, &mut rng).unwrap();
        assert_eq!(r.trajectory.representation, Representation::Conditioned);
        assert!(run_deutsch_jozsa(&fam, Choice::Random, true, None, &mut rng).is_err());
    }
}
