use rand::Rng;

use super::circuit::{execute, Step};
use super::{Choice, Gf2System, Representation, Trajectory};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::families::{FamilyKind, FunctionFamily, OracleUnitary, REG_A};

#[derive(Debug, Clone, Default)]
pub struct SimonOptions {
    /// Repetitions allowed before giving up; defaults to `64 · n`.
    pub repetition_cap: Option<usize>,
    pub representation: Option<Representation>,
}

#[derive(Debug, Clone)]
pub struct SimonRun {
    /// Trajectory of the first repetition.
    pub trajectory: Trajectory,
    pub oracle: OracleUnitary,
    pub b: BitString,
    pub distribution: Vec<(BitString, f64)>,
    pub samples: Vec<BitString>,
    pub h: BitString,
    pub repetitions: usize,
    pub oracle_calls: usize,
}

/// Repeats the `A`-side of the circuit until the samples pin down the period.
pub fn run_simon<R: Rng + ?Sized>(
    family: &FunctionFamily,
    choice: Choice,
    options: &SimonOptions,
    rng: &mut R,
) -> Result<SimonRun> {
    if family.kind() != FamilyKind::Simon {
        return Err(Error::InvalidArgument(format!("expected a simon family, got {}", family.kind())));
    }
    let n = family.n();
    let cap = options.repetition_cap.unwrap_or(64 * n);
    let steps = [Step::Hadamard(REG_A), Step::Oracle, Step::Hadamard(REG_A)];
    let v = BitString::zeros(family.output_width());

    let first = execute(family, choice, &steps, v, false, options.representation, rng)?;
    let b = first.b;
    let mut system = Gf2System::new(n);
    let mut samples = vec![first.outcome];
    system.push(first.outcome);
    // later repetitions keep Bob's label fixed
    while system.rank() < n - 1 {
        if samples.len() >= cap {
            return Err(Error::RepetitionCap(cap));
        }
        let again = execute(family, Choice::Label(b), &steps, v, false, Some(Representation::Conditioned), rng)?;
        samples.push(again.outcome);
        system.push(again.outcome);
    }
    let candidates = system.solve();
    let h = match candidates.as_slice() {
        [h] => *h,
        _ => return Err(Error::InvalidArgument(format!("{} period candidates left", candidates.len()))),
    };
    Ok(SimonRun {
        trajectory: first.trajectory,
        oracle: first.oracle,
        b,
        distribution: first.distribution,
        repetitions: samples.len(),
        oracle_calls: samples.len(),
        samples,
        h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn family(n: usize) -> FunctionFamily {
        FunctionFamily::build(FamilyKind::Simon, n).unwrap()
    }

    #[test]
    fn two_bit_samples_are_orthogonal_to_period() {
        let fam = family(2);
        for (b, allowed, h) in [("0011", ["00", "10"], "01"), ("0101", ["00", "01"], "10")] {
            for seed in 0..50 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let r = run_simon(&fam, Choice::Label(bits(b)), &SimonOptions::default(), &mut rng).unwrap();
                assert!(r.samples.iter().all(|s| allowed.contains(&s.to_string().as_str())));
                assert_eq!(r.h, bits(h));
                assert_eq!(*r.samples.last().unwrap(), bits(allowed[1]));
                assert_eq!(r.oracle_calls, r.repetitions);
            }
        }
    }

    #[test]
    fn every_sample_satisfies_the_period_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 2..=3 {
            let fam = family(n);
            for _ in 0..500 {
                let r = run_simon(&fam, Choice::Random, &SimonOptions::default(), &mut rng).unwrap();
                let truth = fam.get(&r.b).unwrap().period().unwrap();
                assert_eq!(r.h, truth);
                assert!(r.samples.iter().all(|s| !s.dot(&truth)));
            }
        }
    }

    #[test]
    fn three_bit_distribution_is_uniform_on_orthogonal_strings() {
        let fam = family(3);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let r = run_simon(&fam, Choice::Random, &SimonOptions::default(), &mut rng).unwrap();
        assert_eq!(r.distribution.len(), 4);
        for (s, p) in &r.distribution {
            assert!(!s.dot(&r.h));
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_is_reported() {
        let fam = family(3);
        let opts = SimonOptions { repetition_cap: Some(1), ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        assert_eq!(run_simon(&fam, Choice::Random, &opts, &mut rng).unwrap_err(), Error::RepetitionCap(1));
    }
}
