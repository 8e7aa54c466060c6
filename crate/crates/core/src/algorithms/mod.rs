//! The three canonical oracle algorithms in the time-symmetric picture: the
//! label register `B` starts maximally mixed, runs through the whole unitary
//! part untouched, and is projected on Bob's choice only at the end.

mod circuit;
mod deutsch_jozsa;
mod gf2;
mod grover;
mod simon;
mod trajectory;

pub use circuit::{conditioned_input, time_symmetric_input};
pub use deutsch_jozsa::{run_deutsch_jozsa, Classification, DeutschJozsaRun};
pub use gf2::Gf2System;
pub use grover::{grover_iterates, run_grover, GroverOptions, GroverRun, IterationRule};
pub use simon::{run_simon, SimonOptions, SimonRun};
pub use trajectory::{MeasurementRecord, Operation, Representation, Stage, Trajectory};

use rand::Rng;

use crate::bits::BitString;
use crate::error::Result;

/// Bob's choice: a fixed label or one drawn from the Born rule on `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Label(BitString),
    Random,
}

impl std::str::FromStr for Choice {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("random") {
            Ok(Choice::Random)
        } else {
            Ok(Choice::Label(s.parse()?))
        }
    }
}

/// Independent uniform phases, one per family member in phase order.
pub fn sample_phases<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    (0..count).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect()
}

/// `V` prepared in `|1⟩` so that a Hadamard turns it into `|−⟩`.
pub(crate) fn phase_kickback_v() -> BitString {
    BitString::new(1, 1)
}
